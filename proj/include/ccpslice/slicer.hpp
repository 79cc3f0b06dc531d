#pragma once

#include <map>
#include <optional>
#include <vector>

#include "ccpslice/marking.hpp"
#include "ccpslice/timed.hpp"

namespace ccpslice {

/// Replacements keyed by process id. An id without an entry stands for `*`.
using Replacements = std::map<unsigned, Process>;

struct SliceOptions {
  bool causal = false;
  std::optional<std::size_t> cap = kDefaultSubsetCap;
};

/// A sliced configuration. Process slots stay aligned with the original
/// configuration; runs of `*` are only merged when rendering.
struct SlicedConfig {
  VarSet hidden;
  std::vector<IndexedProcess> procs;
  Store store;
  bool operator==(const SlicedConfig&) const = default;
};

struct SlicedTrace {
  std::vector<SlicedConfig> configs;  // one per original configuration
  std::vector<StepLabel> labels;
  Store criterion;   // the marked set S given by the caller
  Store relevant;    // S after causal growth (equals criterion in plain mode)
  Replacements theta;
  /// Guards of retained SUM steps in causal mode, by step index (1-based).
  std::map<std::size_t, Constraint> retained_guards;
  bool capped = false;
};

/// `exists Y. (kept atoms /\ *)`; `*` when nothing of the contribution is kept.
Constraint slice_constraints(const VarSet& x_before, const VarSet& x_after, const Store& s_before,
                             const Store& s_after, const Store& marked);

/// The parallel composition of slot slices; a single `*` when all are holes.
Process par_of(const std::vector<Process>& slots);

struct SliceStep {
  Replacements theta;
  Constraint guard = Constraint::truth();  // c_k for a retained SUM, else true
};

/// One backward step for `before -[label]-> after` given the replacements
/// already known for later steps.
SliceStep slice_process(const Configuration& before, const Configuration& after, const StepLabel& label,
                        const Replacements& theta, const Store& marked);

/// Backward slice of an internal trace. `seed` holds replacements for the
/// processes of the last configuration (empty: they are all `*`).
/// Throws CriterionError when `marked` is not part of the final store.
SlicedTrace slice_trace(const EntailmentEngine& engine, const Trace& trace, const Store& marked,
                        const SliceOptions& options = {}, const Replacements& seed = {});

struct TimedSlice {
  unsigned unit = 0;                // the sliced unit, 1-based
  std::vector<SlicedTrace> units;   // units 1..unit
};

/// Slices unit `unit` with `marked`, then propagates the replacements back
/// through the continuations of every earlier unit.
TimedSlice slice_timed_trace(const EntailmentEngine& engine, const TimedTrace& trace, unsigned unit,
                             const Store& marked, const SliceOptions& options = {});

/// Combines two slices of the same process, keeping whatever either keeps.
Process merge_slices(const Process& a, const Process& b);

/// True when `sliced` is `original` with some subterms replaced by `*`
/// (parallel compositions compared slot by slot, local binders up to
/// renaming, sliced tells by their atoms).
bool approximates(const Process& original, const Process& sliced);

}  // namespace ccpslice
