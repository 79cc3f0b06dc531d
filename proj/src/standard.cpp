#include "ccpslice/standard.hpp"

#include <algorithm>
#include <deque>
#include <set>

namespace ccpslice {

namespace {

VarSet state_vars(const StandardState& s, const VarSet& globals) {
  VarSet out = s.hidden;
  for (const auto& c : s.told) {
    VarSet fv = free_vars(c);
    out.insert(fv.begin(), fv.end());
  }
  for (const auto& p : s.agents) {
    VarSet fv = free_vars(p);
    out.insert(fv.begin(), fv.end());
  }
  out.insert(globals.begin(), globals.end());
  return out;
}

// d as atoms, with the binders of every told constraint renamed apart.
AtomDecomposition decompose_told(const StandardState& s) {
  VarSet avoid = state_vars(s, {});
  AtomDecomposition out;
  for (const auto& c : s.told) {
    AtomDecomposition part = atoms(c, avoid);
    avoid.insert(part.bound.begin(), part.bound.end());
    out.bound.insert(out.bound.end(), part.bound.begin(), part.bound.end());
    out.atoms.insert(part.atoms.begin(), part.atoms.end());
  }
  return out;
}

bool store_entails(const EntailmentEngine& engine, const StandardState& s, const VarSet& extra_hidden,
                   const Constraint& goal) {
  AtomDecomposition d = decompose_told(s);
  VarSet hidden(d.bound.begin(), d.bound.end());
  hidden.insert(extra_hidden.begin(), extra_hidden.end());
  return entails_hidden(engine, hidden, d.atoms, goal);
}

void add_agents(std::vector<Process>& agents, const Process& p) {
  for (auto& part : flatten_par(p)) agents.push_back(std::move(part));
}

StandardState canonical(StandardState s) {
  std::sort(s.agents.begin(), s.agents.end());
  s.told.erase(Constraint::truth());
  return s;
}

std::vector<StandardState> successors(const Program& prog, const EntailmentEngine& engine,
                                      const StandardState& s, const VarSet& globals) {
  std::vector<StandardState> out;
  for (std::size_t i = 0; i < s.agents.size(); ++i) {
    // Agents equal to an earlier one give the same successors.
    if (i > 0 && s.agents[i] == s.agents[i - 1]) continue;
    const Process& p = s.agents[i];
    StandardState rest = s;
    rest.agents.erase(rest.agents.begin() + static_cast<std::ptrdiff_t>(i));
    if (const auto* t = p.as<Tell>()) {
      StandardState n = rest;
      n.told.insert(t->c);
      out.push_back(canonical(std::move(n)));
    } else if (const auto* sum = p.as<Sum>()) {
      for (const auto& b : sum->branches) {
        if (!store_entails(engine, s, {}, b.guard)) continue;
        StandardState n = rest;
        add_agents(n.agents, *b.body);
        out.push_back(canonical(std::move(n)));
      }
    } else if (const auto* l = p.as<Local>()) {
      VarName x = fresh_var(l->var, state_vars(s, globals));
      StandardState n = rest;
      n.hidden.insert(x);
      add_agents(n.agents, x == l->var ? *l->body : subst(*l->body, VarMap{{l->var, x}}));
      out.push_back(canonical(std::move(n)));
    } else if (const auto* c = p.as<Call>()) {
      const ProcessDef* def = prog.find(c->name);
      VarMap sub;
      for (std::size_t a = 0; a < c->args.size(); ++a) sub[def->params[a]] = c->args[a];
      StandardState n = rest;
      add_agents(n.agents, subst(def->body, sub));
      out.push_back(canonical(std::move(n)));
    }
  }
  return out;
}

std::string collecting_key(const Configuration& cfg) {
  std::string key = to_string(cfg.hidden, ",") + "|" + to_string(cfg.store, ",") + "|";
  for (const auto& ip : cfg.procs) key += to_string(ip.proc) + ";";
  return key;
}

}  // namespace

bool observes(const EntailmentEngine& engine, const StandardState& state, const Constraint& goal) {
  return store_entails(engine, state, state.hidden, goal);
}

Exploration explore_standard(const Program& program, const EntailmentEngine& engine, std::size_t depth,
                             std::size_t state_cap) {
  if (program.timed) throw ContractViolation("the plain semantics covers untimed programs only");
  VarSet globals = program.visible_globals();
  Exploration out;
  StandardState start;
  add_agents(start.agents, program.entry);
  start = canonical(std::move(start));
  std::set<std::string> seen;
  auto key = [](const StandardState& s) {
    std::string k = to_string(s.hidden, ",") + "|" + to_string(s.told, ",") + "|";
    for (const auto& p : s.agents) k += to_string(p) + ";";
    return k;
  };
  std::vector<StandardState> frontier{start};
  seen.insert(key(start));
  out.standard.push_back(start);
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<StandardState> next;
    for (const auto& s : frontier) {
      for (auto& n : successors(program, engine, s, globals)) {
        if (!seen.insert(key(n)).second) continue;
        if (out.standard.size() >= state_cap) {
          out.capped = true;
          return out;
        }
        out.standard.push_back(n);
        next.push_back(std::move(n));
      }
    }
    frontier = std::move(next);
  }
  return out;
}

Exploration explore_collecting(const Machine& machine, std::size_t depth, std::size_t state_cap) {
  Exploration out;
  struct Node {
    Configuration cfg;
    unsigned next_id;
  };
  unsigned first = 1;
  Configuration init = machine.initial(machine.program().entry, first);
  std::set<std::string> seen{collecting_key(init)};
  std::vector<Node> frontier{{init, first}};
  out.collecting.push_back(init);
  for (std::size_t d = 0; d < depth && !frontier.empty(); ++d) {
    std::vector<Node> next;
    for (const auto& node : frontier) {
      for (const auto& en : machine.enabled(node.cfg)) {
        unsigned counter = node.next_id;
        Step s = machine.step(node.cfg, en.choice(), counter);
        if (!seen.insert(collecting_key(s.after)).second) continue;
        if (out.collecting.size() >= state_cap) {
          out.capped = true;
          return out;
        }
        out.collecting.push_back(s.after);
        next.push_back({std::move(s.after), counter});
      }
    }
    frontier = std::move(next);
  }
  return out;
}

bool run_standard(const Program& program, const Constraint& goal, std::size_t depth) {
  auto engine = make_engine(program);
  Exploration e = explore_standard(program, *engine, depth);
  return std::any_of(e.standard.begin(), e.standard.end(),
                     [&](const StandardState& s) { return observes(*engine, s, goal); });
}

}  // namespace ccpslice
