#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <vector>

#include "ccpslice/program.hpp"

namespace ccpslice {

enum class RuleTag { Tell, Sum, Loc, Call, Unless, Bang };

std::string to_string(RuleTag tag);
RuleTag parse_rule_tag(const std::string& text);

struct IndexedProcess {
  unsigned id = 0;
  Process proc;
  bool operator==(const IndexedProcess&) const = default;
};

/// (X; Gamma; S).
struct Configuration {
  VarSet hidden;
  std::vector<IndexedProcess> procs;
  Store store;
  bool operator==(const Configuration&) const = default;

  /// Position of the process with the given id, or npos.
  std::size_t find(unsigned id) const;
  unsigned max_id() const;
};

inline constexpr std::size_t npos = static_cast<std::size_t>(-1);

struct StepLabel {
  unsigned id = 0;
  std::optional<unsigned> branch;  // 1-based, SUM only
  RuleTag rule = RuleTag::Tell;
  std::vector<unsigned> created;
  Store added;
  VarSet new_hidden;
  bool operator==(const StepLabel&) const = default;
};

struct Step {
  StepLabel label;
  Configuration after;
  bool operator==(const Step&) const = default;
};

struct Choice {
  unsigned id = 0;
  std::optional<unsigned> branch;
  bool operator==(const Choice&) const = default;
};

struct EnabledStep {
  unsigned id = 0;
  RuleTag rule = RuleTag::Tell;
  std::optional<unsigned> branch;
  bool operator==(const EnabledStep&) const = default;
  Choice choice() const { return {id, branch}; }
};

class SchedulerPolicy {
 public:
  enum class Kind { Leftmost, Seeded, Scripted };

  static SchedulerPolicy leftmost() { return SchedulerPolicy(Kind::Leftmost, 0, {}); }
  static SchedulerPolicy seeded(std::uint64_t seed) { return SchedulerPolicy(Kind::Seeded, seed, {}); }
  /// Replays the given choices in order; running out of script or reaching
  /// quiescence ends the run.
  static SchedulerPolicy scripted(std::vector<Choice> script) {
    return SchedulerPolicy(Kind::Scripted, 0, std::move(script));
  }

  Kind kind() const { return kind_; }
  std::uint64_t seed() const { return seed_; }
  const std::vector<Choice>& script() const { return script_; }
  bool operator==(const SchedulerPolicy&) const = default;

  /// `leftmost`, `seed 42`, `script`.
  std::string describe() const;

 private:
  SchedulerPolicy(Kind k, std::uint64_t seed, std::vector<Choice> script)
      : kind_(k), seed_(seed), script_(std::move(script)) {}
  Kind kind_;
  std::uint64_t seed_;
  std::vector<Choice> script_;
};

struct Trace {
  Configuration initial;
  std::vector<Step> steps;
  bool exhausted = false;  // stopped by the step budget, not quiescence
  bool operator==(const Trace&) const = default;

  std::size_t length() const { return steps.size() + 1; }
  /// Configuration l, 0 = initial.
  const Configuration& at(std::size_t l) const { return l == 0 ? initial : steps[l - 1].after; }
  const Configuration& last() const { return at(steps.size()); }
  std::vector<Choice> choices() const;
  unsigned max_id() const;
};

inline constexpr std::size_t kDefaultBudget = 10000;

/// Budget from CCPSLICE_BUDGET when set to a positive integer, else the default.
std::size_t budget_from_env();

/// Collecting semantics over one program. Holds no mutable state; fresh ids
/// come from the caller's counter so they stay unique across a whole trace.
class Machine {
 public:
  Machine(std::shared_ptr<const Program> program, std::shared_ptr<const EntailmentEngine> engine);
  explicit Machine(const Program& program);

  const Program& program() const { return *program_; }
  const EntailmentEngine& engine() const { return *engine_; }

  /// Flattens a process into a sequence with ids next_id, next_id+1, ... (skips dropped).
  std::vector<IndexedProcess> index(const Process& p, unsigned& next_id) const;
  Configuration initial(const Process& entry, unsigned& next_id) const;

  std::vector<EnabledStep> enabled(const Configuration& cfg) const;
  /// Throws ContractViolation when the choice is not enabled.
  Step step(const Configuration& cfg, const Choice& choice, unsigned& next_id) const;

  /// Runs from `init` until quiescence, budget exhaustion or the end of a script.
  Trace run(Configuration init, const SchedulerPolicy& policy, std::size_t budget, unsigned& next_id) const;
  /// Runs the program's entry process with ids starting at 1.
  Trace run(const SchedulerPolicy& policy, std::size_t budget = kDefaultBudget) const;

  /// Variables a fresh name must avoid in the given context.
  VarSet context_vars(const Configuration& cfg) const;

 private:
  std::shared_ptr<const Program> program_;
  std::shared_ptr<const EntailmentEngine> engine_;
  VarSet globals_;
};

/// Observables of a finished run: exists X_n. S_n |= goal at the last configuration.
bool observables(const EntailmentEngine& engine, const Trace& trace, const Constraint& goal);

/// Re-executes every recorded step on its predecessor and compares.
bool replay_check(const Machine& machine, const Trace& trace);

std::string to_string(const Configuration& cfg);

}  // namespace ccpslice
