#pragma once

#include <string>

#include "ccpslice/slicer.hpp"

namespace ccpslice {

struct RenderOptions {
  bool show_ids = false;
  bool full = false;  // keep consecutive identical configurations
};

/// Merges runs of `*` in parallel slots and elided sum branches.
Process collapse_holes(const Process& p);

/// `[X ; procs ; store] --> ... --> stop`
std::string render_trace(const Trace& trace, const RenderOptions& options = {});
/// `{t / T > [...] --> [...]} ==>` per unit.
std::string render_timed(const TimedTrace& trace, const RenderOptions& options = {});

std::string render_slice(const Trace& original, const SlicedTrace& slice, const RenderOptions& options = {});
std::string render_timed_slice(const TimedTrace& original, const TimedSlice& slice,
                               const RenderOptions& options = {});

}  // namespace ccpslice
