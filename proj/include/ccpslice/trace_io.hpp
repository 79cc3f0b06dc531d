#pragma once

#include <string>
#include <string_view>

#include "ccpslice/slicer.hpp"

namespace ccpslice {

/// A recorded run together with everything needed to interpret it.
struct TraceFile {
  Program program;
  std::string policy = "leftmost";
  std::size_t budget = kDefaultBudget;
  bool timed = false;
  Trace trace;              // untimed runs
  TimedTrace timed_trace;   // timed runs
  bool operator==(const TraceFile&) const = default;
};

/// `CCPSLICE-TRACE v1` text.
std::string write_trace(const TraceFile& file);
/// Throws SyntaxError (with the trace line) on malformed input or a program
/// hash that does not match the embedded source.
TraceFile read_trace(std::string_view text);

/// Sliced traces in the same line format, preceded by a SLICE header.
std::string write_sliced(const TraceFile& file, const SlicedTrace& slice, const std::string& criterion, bool causal);
std::string write_sliced(const TraceFile& file, const TimedSlice& slice, const std::string& criterion, bool causal);

}  // namespace ccpslice
