#pragma once

#include <cstddef>
#include <vector>

#include "ccpslice/engine.hpp"

namespace ccpslice {

/// A configuration of the plain operational semantics: no ids, the agents
/// form a multiset (kept sorted), and the store is the set of told constraints.
struct StandardState {
  VarSet hidden;
  std::vector<Process> agents;
  Store told;
  bool operator==(const StandardState&) const = default;
};

struct Exploration {
  std::vector<StandardState> standard;   // filled by explore_standard
  std::vector<Configuration> collecting;  // filled by explore_collecting
  bool capped = false;                    // state cap reached before the depth bound
};

/// All states reachable in at most `depth` steps of the plain semantics,
/// deduplicated up to multiset order. Untimed programs only.
Exploration explore_standard(const Program& program, const EntailmentEngine& engine, std::size_t depth,
                             std::size_t state_cap = 100000);

/// All collecting configurations reachable in at most `depth` steps, under
/// every scheduling choice, deduplicated after forgetting ids.
Exploration explore_collecting(const Machine& machine, std::size_t depth, std::size_t state_cap = 100000);

/// exists X. d |= goal for a plain-semantics state.
bool observes(const EntailmentEngine& engine, const StandardState& state, const Constraint& goal);

/// P reaches a state observing `goal` within `depth` steps (the plain-semantics barb).
bool run_standard(const Program& program, const Constraint& goal, std::size_t depth);

}  // namespace ccpslice
