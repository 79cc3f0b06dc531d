#include "ccpslice/program.hpp"

#include <cstdio>
#include <functional>

namespace ccpslice {

std::string to_string(EngineKind kind) { return kind == EngineKind::Token ? "token" : "interval"; }

const ProcessDef* Program::find(const std::string& name) const {
  auto it = defs.find(name);
  return it == defs.end() ? nullptr : &it->second;
}

VarSet Program::visible_globals() const {
  VarSet out = globals;
  VarSet fv = free_vars(entry);
  out.insert(fv.begin(), fv.end());
  return out;
}

std::string to_string(const Program& program) {
  std::string out = "system " + to_string(program.engine) + "\n";
  if (program.timed) out += "timed\n";
  for (const auto& r : program.rules) out += "rule " + to_string(r) + "\n";
  if (!program.globals.empty()) out += "var " + to_string(program.globals, ", ") + "\n";
  for (const auto& name : program.def_order) {
    const ProcessDef& d = program.defs.at(name);
    out += "def " + d.name;
    if (!d.params.empty()) {
      out += "(";
      for (std::size_t i = 0; i < d.params.size(); ++i) out += (i ? ", " : "") + d.params[i].str();
      out += ")";
    }
    out += " = " + to_string(d.body) + "\n";
  }
  out += "run " + to_string(program.entry) + "\n";
  return out;
}

std::string program_hash(const Program& program) {
  std::uint64_t h = 1469598103934665603ULL;
  for (unsigned char ch : to_string(program)) {
    h ^= ch;
    h *= 1099511628211ULL;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

namespace {

void check_constraint(const Constraint& c, const Program& prog, SourcePos pos) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Comparison>) {
          if (prog.engine == EngineKind::Token) {
            throw StaticError(pos, "comparison " + to_string(c) + " needs the interval system");
          }
        } else if constexpr (std::is_same_v<T, HoleC>) {
          throw StaticError(pos, "'*' is only allowed in sliced terms");
        } else if constexpr (std::is_same_v<T, Conj>) {
          check_constraint(*n.left, prog, pos);
          check_constraint(*n.right, prog, pos);
        } else if constexpr (std::is_same_v<T, Exists>) {
          check_constraint(*n.body, prog, pos);
        }
      },
      c.node());
}

// Walks a process, checking atoms and calls; `unguarded_calls` receives the names of
// calls not sitting under next/unless.
void check_process(const Process& p, const Program& prog, SourcePos pos, bool guarded,
                   std::vector<std::string>& unguarded_calls) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, HoleP>) {
          throw StaticError(pos, "'*' is only allowed in sliced terms");
        } else if constexpr (std::is_same_v<T, Tell>) {
          check_constraint(n.c, prog, pos);
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& b : n.branches) {
            if (b.elided()) throw StaticError(pos, "'*' is only allowed in sliced terms");
            check_constraint(b.guard, prog, pos);
            check_process(*b.body, prog, pos, guarded, unguarded_calls);
          }
        } else if constexpr (std::is_same_v<T, Par>) {
          check_process(*n.left, prog, pos, guarded, unguarded_calls);
          check_process(*n.right, prog, pos, guarded, unguarded_calls);
        } else if constexpr (std::is_same_v<T, Local>) {
          check_process(*n.body, prog, pos, guarded, unguarded_calls);
        } else if constexpr (std::is_same_v<T, Call>) {
          const ProcessDef* def = prog.find(n.name);
          if (!def) throw StaticError(pos, "call to undefined process " + n.name);
          if (def->params.size() != n.args.size()) {
            throw StaticError(pos, "process " + n.name + " expects " + std::to_string(def->params.size()) +
                                       " argument(s), got " + std::to_string(n.args.size()));
          }
          if (!guarded) unguarded_calls.push_back(n.name);
        } else if constexpr (std::is_same_v<T, Next>) {
          if (!prog.timed) throw StaticError(pos, "next requires a timed program");
          check_process(*n.body, prog, pos, true, unguarded_calls);
        } else if constexpr (std::is_same_v<T, Unless>) {
          if (!prog.timed) throw StaticError(pos, "unless requires a timed program");
          check_constraint(n.guard, prog, pos);
          check_process(*n.body, prog, pos, true, unguarded_calls);
        } else if constexpr (std::is_same_v<T, Bang>) {
          if (!prog.timed) throw StaticError(pos, "! requires a timed program");
          check_process(*n.body, prog, pos, guarded, unguarded_calls);
        }
      },
      p.node());
}

}  // namespace

void check_program(const Program& prog) {
  for (const auto& r : prog.rules) {
    if (prog.engine != EngineKind::Token) throw StaticError({}, "rules need the token system");
    for (const auto& premise : r.premises) {
      if (!premise.is<Token>()) throw StaticError({}, "rule premise " + to_string(premise) + " is not a token");
    }
    if (!r.head.is<Token>() && !r.head.is<FalseC>()) {
      throw StaticError({}, "rule head " + to_string(r.head) + " is not a token");
    }
  }

  std::map<std::string, std::vector<std::string>> graph;
  for (const auto& name : prog.def_order) {
    const ProcessDef& d = prog.defs.at(name);
    VarSet params;
    for (const auto& x : d.params) {
      if (!params.insert(x).second) throw StaticError(d.pos, "repeated parameter " + x.str() + " in " + d.name);
    }
    for (const auto& v : free_vars(d.body)) {
      if (!params.contains(v) && !prog.globals.contains(v)) {
        throw StaticError(d.pos, "variable " + v.str() + " is free in the body of " + d.name +
                                     " but is neither a parameter nor declared with var");
      }
    }
    check_process(d.body, prog, d.pos, false, graph[d.name]);
  }
  std::vector<std::string> entry_calls;
  check_process(prog.entry, prog, prog.entry_pos, false, entry_calls);

  if (!prog.timed) return;
  // Depth-first search for a cycle of unguarded calls.
  std::map<std::string, int> colour;
  std::function<void(const std::string&)> visit = [&](const std::string& name) {
    colour[name] = 1;
    for (const auto& callee : graph[name]) {
      if (colour[callee] == 1) {
        const ProcessDef& d = prog.defs.at(name);
        throw StaticError(d.pos, "recursive call " + name + " -> " + callee + " is not guarded by next");
      }
      if (colour[callee] == 0) visit(callee);
    }
    colour[name] = 2;
  };
  for (const auto& name : prog.def_order) {
    if (colour[name] == 0) visit(name);
  }
}

std::shared_ptr<const EntailmentEngine> make_engine(const Program& program) {
  if (program.engine == EngineKind::Token) return std::make_shared<TokenSystem>(program.rules);
  return std::make_shared<IntervalSystem>();
}

}  // namespace ccpslice
