#pragma once

#include <vector>

#include "ccpslice/engine.hpp"

namespace ccpslice {

/// A continuation component minted when the body of next/unless was itself a
/// parallel composition: `id` is the `slot`-th component (0-based) of the
/// body unwrapped from process `from`.
struct Origin {
  unsigned id = 0;
  unsigned from = 0;
  unsigned slot = 0;
  bool operator==(const Origin&) const = default;
};

struct Continuation {
  std::vector<IndexedProcess> procs;
  std::vector<Origin> origins;
  bool operator==(const Continuation&) const = default;
};

/// The future function F on a quiescent configuration. Unwrapped bodies keep
/// the id of their next/unless wrapper; parallel bodies get fresh ids.
/// Throws ContractViolation on a non-quiescent configuration or a
/// tell/bang/local/call at top level.
Continuation future(const Machine& machine, const Configuration& cfg, unsigned& next_id);

struct TimeUnit {
  Constraint input = Constraint::truth();
  Trace internal;
  Continuation continuation;
  bool operator==(const TimeUnit&) const = default;
};

struct TimedTrace {
  unsigned horizon = 0;
  std::vector<TimeUnit> units;
  bool operator==(const TimedTrace&) const = default;
  /// Every internal step, unit by unit.
  std::vector<Choice> choices() const;
};

/// Runs T time-units of a timed program. Missing inputs default to true.
/// A unit that does not quiesce within the budget throws BudgetExhausted.
/// Seeded policies use seed + t - 1 in unit t; a scripted policy is consumed
/// across units in order.
TimedTrace run_time_units(const Machine& machine, const std::vector<Constraint>& inputs, unsigned horizon,
                          const SchedulerPolicy& policy, std::size_t budget = kDefaultBudget);

}  // namespace ccpslice
