#pragma once
// Property suites as plain functions: the unit tests require zero failures,
// the acceptance binary reports the same counts.

#include <algorithm>

#include "gen.hpp"
#include "ccpslice/standard.hpp"

namespace gen {

struct SuiteResult {
  int cases = 0;
  int failures = 0;
  std::vector<std::string> notes;  // first few failures

  void fail(std::string note) {
    ++failures;
    if (notes.size() < 5) notes.push_back(std::move(note));
  }
};

inline SuiteResult adequacy_suite(std::uint64_t seed, int cases) {
  SuiteResult r;
  Rng rng(seed);
  for (int n = 0; n < cases; ++n) {
    std::string text = random_program_text(rng, false);
    Program program = parse_program(text);
    auto engine = make_engine(program);
    Machine machine(program);
    ++r.cases;
    for (std::size_t depth : {std::size_t{3}, std::size_t{8}}) {
      Exploration plain = explore_standard(program, *engine, depth);
      Exploration coll = explore_collecting(machine, depth);
      if (plain.capped || coll.capped) {
        r.fail("state cap hit for\n" + text);
        continue;
      }
      for (const auto& goal : alphabet()) {
        bool a = std::any_of(plain.standard.begin(), plain.standard.end(),
                             [&](const StandardState& st) { return observes(*engine, st, goal); });
        bool b = std::any_of(coll.collecting.begin(), coll.collecting.end(), [&](const Configuration& c) {
          return entails_hidden(*engine, c.hidden, c.store, goal);
        });
        if (a != b) r.fail("depth " + std::to_string(depth) + " goal " + to_string(goal) + "\n" + text);
      }
    }
  }
  return r;
}

inline SuiteResult untimed_soundness_suite(std::uint64_t seed, int cases) {
  SuiteResult r;
  Rng rng(seed);
  for (int n = 0; n < cases; ++n) {
    std::string text = random_program_text(rng, false);
    Program program = parse_program(text);
    auto engine = make_engine(program);
    Machine machine(program);
    auto policy = n % 2 ? SchedulerPolicy::seeded(static_cast<std::uint64_t>(n)) : SchedulerPolicy::leftmost();
    Trace trace = machine.run(policy);
    if (trace.exhausted) {
      r.fail("budget exhausted\n" + text);
      continue;
    }
    MarkResult marked = mark_all(*engine, trace.last(), random_criteria(rng, trace.last().store));
    for (bool causal : {false, true}) {
      ++r.cases;
      SliceOptions options;
      options.causal = causal;
      SlicedTrace slice = slice_trace(*engine, trace, marked.marked, options);
      std::string problem = check_slice(*engine, trace, slice, causal);
      if (problem.empty() && slice.configs.back().store != marked.marked) problem = "final store is not the criterion";
      if (!problem.empty()) r.fail(problem + (causal ? " (causal)\n" : "\n") + text);
    }
  }
  return r;
}

inline SuiteResult timed_soundness_suite(std::uint64_t seed, int cases) {
  SuiteResult r;
  Rng rng(seed);
  for (int n = 0; n < cases; ++n) {
    std::string text = random_program_text(rng, true);
    Program program = parse_program(text);
    auto engine = make_engine(program);
    Machine machine(program);
    unsigned horizon = 1 + static_cast<unsigned>(rng.below(4));
    TimedTrace tt = run_time_units(machine, std::vector<Constraint>(horizon, Constraint::truth()), horizon,
                                   SchedulerPolicy::seeded(static_cast<std::uint64_t>(n)));
    unsigned unit = 1 + static_cast<unsigned>(rng.below(static_cast<int>(horizon)));
    const Trace& target = tt.units[unit - 1].internal;
    MarkResult marked = mark_all(*engine, target.last(), random_criteria(rng, target.last().store));
    for (bool causal : {false, true}) {
      ++r.cases;
      SliceOptions options;
      options.causal = causal;
      TimedSlice slice = slice_timed_trace(*engine, tt, unit, marked.marked, options);
      std::string problem;
      if (slice.units.size() != unit) problem = "unit count";
      for (unsigned t = 1; problem.empty() && t <= unit; ++t) {
        problem = check_slice(*engine, tt.units[t - 1].internal, slice.units[t - 1], causal);
        if (!problem.empty()) problem = "unit " + std::to_string(t) + ": " + problem;
      }
      if (problem.empty() && slice.units.back().configs.back().store != marked.marked) {
        problem = "final store is not the criterion";
      }
      if (!problem.empty()) r.fail(problem + (causal ? " (causal)\n" : "\n") + text);
    }
  }
  return r;
}

inline std::vector<Store> sorted(std::vector<Store> v) {
  std::sort(v.begin(), v.end());
  return v;
}

/// minimal_subsets against brute force, for entailment and inconsistency,
/// on token stores (with Horn rules) and interval stores of size up to 10.
inline SuiteResult minimality_suite(std::uint64_t seed, int cases) {
  SuiteResult r;
  Rng rng(seed);
  const std::vector<std::string> tokens = {"a", "b", "c", "d", "e", "f", "g", "h", "p(x)", "p(y)", "x=y", "q(y)"};
  const std::vector<std::string> vars = {"x", "y", "z"};
  for (int n = 0; n < cases; ++n) {
    bool interval = n % 3 == 2;
    std::shared_ptr<EntailmentEngine> engine;
    Store s;
    std::vector<Constraint> goals;
    std::size_t size = static_cast<std::size_t>(rng.below(11));
    if (!interval) {
      std::vector<HornRule> rules;
      int nrules = rng.below(5);
      for (int i = 0; i < nrules; ++i) {
        std::string head = rng.chance(25) ? "false" : rng.pick(kNullary);
        std::string prem = rng.pick(tokens);
        if (rng.chance(50)) prem += " /\\ " + rng.pick(tokens);
        rules.push_back(parse_rule(prem + " => " + head));
      }
      engine = std::make_shared<TokenSystem>(rules);
      while (s.size() < size) s.insert(parse_constraint(rng.pick(tokens)));
      for (int i = 0; i < 3; ++i) {
        std::string g = rng.pick(tokens);
        if (rng.chance(40)) g += " /\\ " + rng.pick(tokens);
        goals.push_back(parse_constraint(g));
      }
    } else {
      engine = std::make_shared<IntervalSystem>();
      const std::vector<std::string> ops = {"<", "<=", ">", ">=", "="};
      auto cmp = [&] {
        std::string lhs = rng.pick(vars);
        if (rng.chance(30)) lhs += "+" + rng.pick(vars);
        return lhs + rng.pick(ops) + std::to_string(rng.below(11) - 5);
      };
      int guard = 0;
      while (s.size() < size && guard++ < 100) s.insert(parse_constraint(cmp()));
      for (int i = 0; i < 3; ++i) goals.push_back(parse_constraint(cmp()));
    }
    for (const auto& goal : goals) {
      ++r.cases;
      auto pred = [&](const Store& sub) { return engine->entails(sub, goal); };
      auto got = minimal_subsets(s, pred, std::nullopt);
      if (got.capped || sorted(got.subsets) != sorted(brute_minimal(s, pred))) {
        r.fail("entails " + to_string(goal) + " over {" + to_string(s) + "}");
      }
      // the same goal as an inconsistency question
      auto incons = [&](const Store& sub) {
        Store with = sub;
        with.insert(goal);
        return !engine->consistent(with);
      };
      got = minimal_subsets(s, incons, std::nullopt);
      if (got.capped || sorted(got.subsets) != sorted(brute_minimal(s, incons))) {
        r.fail("inconsistent with " + to_string(goal) + " over {" + to_string(s) + "}");
      }
    }
    ++r.cases;
    auto bare = [&](const Store& sub) { return !engine->consistent(sub); };
    auto got = minimal_subsets(s, bare, std::nullopt);
    if (sorted(got.subsets) != sorted(brute_minimal(s, bare))) r.fail("inconsistent core of {" + to_string(s) + "}");
  }
  return r;
}

}  // namespace gen
