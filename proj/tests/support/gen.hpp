#pragma once
// Hand-rolled generators and checkers shared by the property suites and
// the acceptance binary. Programs are generated as source text so every
// case goes through the parser as well.

#include <fstream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "ccpslice/engine.hpp"
#include "ccpslice/marking.hpp"
#include "ccpslice/parser.hpp"
#include "ccpslice/slicer.hpp"
#include "ccpslice/timed.hpp"

namespace gen {

using namespace ccpslice;

inline std::string corpus_path(const std::string& name) { return std::string(CCPSLICE_CORPUS) + "/" + name; }

inline std::string slurp(const std::string& path) {
  std::ifstream in(path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline Program load(const std::string& name) { return parse_program(slurp(corpus_path(name))); }

struct Rng {
  std::mt19937_64 eng;
  explicit Rng(std::uint64_t seed) : eng(seed) {}
  int below(int n) { return static_cast<int>(eng() % static_cast<std::uint64_t>(n)); }
  bool chance(int percent) { return below(100) < percent; }
  template <class T>
  const T& pick(const std::vector<T>& v) {
    return v[static_cast<std::size_t>(below(static_cast<int>(v.size())))];
  }
};

inline const std::vector<std::string> kNullary = {"a", "b", "c", "d", "e"};

/// Every atom a generated program can observe: the nullary tokens plus
/// p(y), q(y) over the one global.
inline std::vector<Constraint> alphabet() {
  std::vector<Constraint> out;
  for (const auto& t : kNullary) out.push_back(parse_constraint(t));
  out.push_back(parse_constraint("p(y)"));
  out.push_back(parse_constraint("q(y)"));
  return out;
}

struct ProgramGen {
  Rng& rng;
  bool timed = false;
  int fresh = 0;
  bool has_def = false;

  std::string atom(const std::vector<std::string>& scope) {
    int r = rng.below(10);
    // a and b come up often so that asks actually fire
    if (r < 3) return rng.chance(50) ? "a" : "b";
    if (r < 6) return rng.pick(kNullary);
    if (r < 8) return "p(" + rng.pick(scope) + ")";
    if (r < 9) return "q(" + rng.pick(scope) + ")";
    if (scope.size() > 1) return rng.pick(scope) + " = " + rng.pick(scope);
    return rng.pick(kNullary);
  }

  std::string tell_constraint(const std::vector<std::string>& scope) {
    if (rng.chance(10)) return "exists w . p(w) /\\ q(w)";
    std::string c = atom(scope);
    if (rng.chance(25)) c += " /\\ " + atom(scope);
    return c;
  }

  std::string guard(const std::vector<std::string>& scope) {
    if (rng.chance(8)) return "true";
    std::string g = atom(scope);
    if (rng.chance(15)) g += " /\\ " + atom(scope);
    return g;
  }

  // One agent; never a bare parallel composition unless wrapped.
  std::string agent(int depth, const std::vector<std::string>& scope) {
    int options = timed ? 10 : 7;
    int r = depth <= 0 ? rng.below(2) : rng.below(options);
    if (depth > 0 && rng.chance(20)) r = 2;
    switch (r) {
      case 0:
      case 1:
        return "tell(" + tell_constraint(scope) + ")";
      case 2: {
        std::string s = "ask(" + guard(scope) + ", " + proc(depth - 1, scope) + ")";
        if (rng.chance(40)) s += " + ask(" + guard(scope) + ", " + proc(depth - 1, scope) + ")";
        return s;
      }
      case 3:
        return "(" + agent(depth - 1, scope) + " || " + agent(depth - 1, scope) + ")";
      case 4: {
        std::string x = "x" + std::to_string(++fresh);
        auto inner = scope;
        inner.push_back(x);
        return "local " + x + " in (" + proc(depth - 1, inner) + ")";
      }
      case 5:
        if (has_def) return "A(" + rng.pick(scope) + ")";
        return "tell(" + atom(scope) + ")";
      case 6:
        return rng.chance(50) ? "skip" : "tell(" + atom(scope) + ")";
      case 7:
        return "next^" + std::to_string(1 + rng.below(2)) + "(" + proc(depth - 1, scope) + ")";
      case 8:
        return "unless " + atom(scope) + " next (" + proc(depth - 1, scope) + ")";
      default:
        // bang bodies stay small so bang copies do not explode
        return "!(" + agent(0, scope) + ")";
    }
  }

  std::string proc(int depth, const std::vector<std::string>& scope) {
    std::string p = agent(depth, scope);
    if (depth > 0 && rng.chance(25)) p += " || " + agent(depth - 1, scope);
    return p;
  }

  std::string program() {
    std::ostringstream out;
    out << "system token\n";
    if (timed) out << "timed\n";
    int rules = rng.below(3);
    for (int i = 0; i < rules; ++i) {
      std::string head = rng.chance(15) ? "false" : rng.pick(kNullary);
      std::string premise = rng.pick(kNullary);
      if (rng.chance(30)) premise += " /\\ " + rng.pick(kNullary);
      if (rng.chance(20)) premise = "p(y)";
      out << "rule " << premise << " => " << head << "\n";
    }
    out << "var y\n";
    if (rng.chance(50)) {
      // recursion only when the call sits under next
      std::string body = agent(1, {"v", "y"});
      if (timed && rng.chance(50)) body += " || next(A(v))";
      out << "def A(v) = " << body << "\n";
      has_def = true;
    }
    int parts = 1 + rng.below(4);
    std::string entry;
    for (int i = 0; i < parts; ++i) {
      if (i) entry += " || ";
      entry += agent(2, {"y"});
    }
    out << "run " << entry << "\n";
    return out.str();
  }
};

inline std::string random_program_text(Rng& rng, bool timed) {
  ProgramGen g{rng, timed};
  return g.program();
}

/// Random criterion against a final store: a subset of its atoms or one of
/// the other three marking strategies.
inline std::vector<Criterion> random_criteria(Rng& rng, const Store& final_store) {
  std::vector<Criterion> out;
  int r = rng.below(10);
  if (r < 6 && !final_store.empty()) {
    Criterion c;
    c.kind = Criterion::Kind::Atoms;
    for (const auto& a : final_store) {
      if (rng.chance(40)) c.atoms.push_back(a);
    }
    if (c.atoms.empty()) c.atoms.push_back(*final_store.begin());
    out.push_back(c);
  } else if (r < 8) {
    Criterion c;
    c.kind = Criterion::Kind::Entails;
    c.goal = rng.pick(alphabet());
    out.push_back(c);
  } else if (r < 9) {
    Criterion c;
    c.kind = Criterion::Kind::Vars;
    c.vars.insert(VarName{"y", 0});
    out.push_back(c);
  } else {
    Criterion c;
    c.kind = Criterion::Kind::InconsistentWith;
    c.goal = parse_constraint(rng.pick(kNullary));
    out.push_back(c);
  }
  return out;
}

inline bool subset(const VarSet& a, const VarSet& b) {
  for (const auto& v : a) {
    if (!b.contains(v)) return false;
  }
  return true;
}

inline bool subset(const Store& a, const Store& b) {
  for (const auto& c : a) {
    if (!b.contains(c)) return false;
  }
  return true;
}

/// Empty when every sliced configuration approximates its original and, in
/// causal mode, every surviving SUM step's guard follows from the sliced
/// predecessor store. Otherwise a description of the first violation.
inline std::string check_slice(const EntailmentEngine& engine, const Trace& trace, const SlicedTrace& slice,
                               bool causal) {
  if (slice.configs.size() != trace.length()) return "config count differs";
  for (std::size_t l = 0; l < trace.length(); ++l) {
    const Configuration& c = trace.at(l);
    const SlicedConfig& s = slice.configs[l];
    std::string where = "config " + std::to_string(l) + ": ";
    if (!subset(s.hidden, c.hidden)) return where + "hidden set grew";
    if (!subset(s.store, c.store)) return where + "store grew";
    if (s.procs.size() != c.procs.size()) return where + "process count differs";
    for (std::size_t i = 0; i < c.procs.size(); ++i) {
      if (s.procs[i].id != c.procs[i].id) return where + "ids misaligned";
      if (!approximates(c.procs[i].proc, s.procs[i].proc)) {
        return where + to_string(s.procs[i].proc) + " does not approximate " + to_string(c.procs[i].proc);
      }
    }
  }
  if (!causal) return "";
  for (std::size_t l = 1; l < trace.length(); ++l) {
    const StepLabel& label = trace.steps[l - 1].label;
    if (label.rule != RuleTag::Sum) continue;
    const SlicedConfig& before = slice.configs[l - 1];
    const Configuration& orig = trace.at(l - 1);
    std::size_t pos = orig.find(label.id);
    if (pos == npos) return "step " + std::to_string(l) + ": id missing";
    if (before.procs[pos].proc.is_hole()) continue;
    const Sum* sum = orig.procs[pos].proc.as<Sum>();
    if (!sum || !label.branch) return "step " + std::to_string(l) + ": not a sum";
    const Constraint& g = sum->branches[*label.branch - 1].guard;
    if (!engine.entails(before.store, g)) {
      return "step " + std::to_string(l) + ": guard " + to_string(g) + " not entailed by sliced store {" +
             to_string(before.store) + "}";
    }
  }
  return "";
}

/// Brute force over all 2^|S| subsets.
inline std::vector<Store> brute_minimal(const Store& s, const std::function<bool(const Store&)>& pred) {
  std::vector<Constraint> items(s.begin(), s.end());
  std::vector<Store> hits;
  for (std::uint32_t mask = 0; mask < (1u << items.size()); ++mask) {
    Store sub;
    for (std::size_t i = 0; i < items.size(); ++i) {
      if (mask & (1u << i)) sub.insert(items[i]);
    }
    if (pred(sub)) hits.push_back(sub);
  }
  std::vector<Store> out;
  for (const auto& h : hits) {
    bool minimal = true;
    for (const auto& other : hits) {
      if (other.size() < h.size() && subset(other, h)) minimal = false;
    }
    if (minimal) out.push_back(h);
  }
  return out;
}

}  // namespace gen

#include "ccpslice/render.hpp"

namespace gen {

/// Printed non-`*` processes of a sliced configuration.
inline std::set<std::string> surviving(const ccpslice::SlicedConfig& c) {
  std::set<std::string> out;
  for (const auto& p : c.procs) {
    if (!p.proc.is_hole()) out.insert(ccpslice::to_string(ccpslice::collapse_holes(p.proc)));
  }
  return out;
}

/// Surviving sets per configuration with consecutive repeats merged.
inline std::vector<std::set<std::string>> surviving_runs(const ccpslice::SlicedTrace& s) {
  std::vector<std::set<std::string>> out;
  for (const auto& c : s.configs) {
    auto set = surviving(c);
    if (out.empty() || out.back() != set) out.push_back(set);
  }
  return out;
}

}  // namespace gen
