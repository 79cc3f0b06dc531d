#include "ccpslice/timed.hpp"

namespace ccpslice {

std::vector<Choice> TimedTrace::choices() const {
  std::vector<Choice> out;
  for (const auto& u : units) {
    auto c = u.internal.choices();
    out.insert(out.end(), c.begin(), c.end());
  }
  return out;
}

Continuation future(const Machine& machine, const Configuration& cfg, unsigned& next_id) {
  if (!machine.enabled(cfg).empty()) throw ContractViolation("F applied to a configuration that is not quiescent");
  Continuation out;
  for (const auto& ip : cfg.procs) {
    const Process& p = ip.proc;
    const Process* body = nullptr;
    if (const auto* n = p.as<Next>()) {
      body = &*n->body;
    } else if (const auto* u = p.as<Unless>()) {
      body = &*u->body;
    } else if (p.is<Sum>() || p.is<HoleP>()) {
      continue;
    } else {
      throw ContractViolation("F is undefined on " + to_string(p));
    }
    auto parts = flatten_par(*body);
    if (parts.size() == 1 && !body->is<Par>()) {
      out.procs.push_back({ip.id, parts.front()});
      continue;
    }
    for (std::size_t slot = 0; slot < parts.size(); ++slot) {
      unsigned id = next_id++;
      out.procs.push_back({id, parts[slot]});
      out.origins.push_back({id, ip.id, static_cast<unsigned>(slot)});
    }
  }
  return out;
}

TimedTrace run_time_units(const Machine& machine, const std::vector<Constraint>& inputs, unsigned horizon,
                          const SchedulerPolicy& policy, std::size_t budget) {
  if (!machine.program().timed) throw ContractViolation("time-units need a timed program");
  TimedTrace out;
  out.horizon = horizon;
  unsigned next_id = 1;
  std::size_t script_pos = 0;
  const VarSet globals = machine.program().visible_globals();
  for (unsigned t = 1; t <= horizon; ++t) {
    TimeUnit unit;
    if (t <= inputs.size()) unit.input = inputs[t - 1];
    Configuration start;
    if (t == 1) {
      start.procs = machine.index(machine.program().entry, next_id);
    } else {
      const TimeUnit& prev = out.units.back();
      start.hidden = prev.internal.last().hidden;
      start.procs = prev.continuation.procs;
      // Hidden variables of the previous unit scope the continuation; keep
      // them apart from whatever the new input mentions.
      VarSet input_vars = free_vars(unit.input);
      VarSet avoid = start.hidden;
      avoid.insert(input_vars.begin(), input_vars.end());
      avoid.insert(globals.begin(), globals.end());
      for (const auto& ip : start.procs) {
        VarSet fv = free_vars(ip.proc);
        avoid.insert(fv.begin(), fv.end());
      }
      VarMap renaming;
      for (const auto& x : start.hidden) {
        if (!input_vars.contains(x)) continue;
        VarName fresh = fresh_var(x, avoid);
        avoid.insert(fresh);
        renaming[x] = fresh;
      }
      if (!renaming.empty()) {
        VarSet hidden;
        for (const auto& x : start.hidden) hidden.insert(renaming.contains(x) ? renaming.at(x) : x);
        start.hidden = std::move(hidden);
        for (auto& ip : start.procs) ip.proc = subst(ip.proc, renaming);
      }
    }
    VarSet avoid = machine.context_vars(start);
    AtomDecomposition in = atoms(unit.input, avoid);
    start.hidden.insert(in.bound.begin(), in.bound.end());
    start.store = std::move(in.atoms);

    SchedulerPolicy unit_policy = policy;
    if (policy.kind() == SchedulerPolicy::Kind::Seeded) {
      unit_policy = SchedulerPolicy::seeded(policy.seed() + t - 1);
    } else if (policy.kind() == SchedulerPolicy::Kind::Scripted) {
      const auto& script = policy.script();
      unit_policy = SchedulerPolicy::scripted(
          std::vector<Choice>(script.begin() + static_cast<std::ptrdiff_t>(std::min(script_pos, script.size())),
                              script.end()));
    }
    unit.internal = machine.run(std::move(start), unit_policy, budget, next_id);
    script_pos += unit.internal.steps.size();
    if (unit.internal.exhausted) {
      throw BudgetExhausted("time-unit " + std::to_string(t) + " did not reach quiescence within " +
                            std::to_string(budget) + " steps");
    }
    unit.continuation = future(machine, unit.internal.last(), next_id);
    out.units.push_back(std::move(unit));
  }
  return out;
}

}  // namespace ccpslice
