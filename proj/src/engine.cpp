#include "ccpslice/engine.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <cstring>
#include <random>

namespace ccpslice {

std::string to_string(RuleTag tag) {
  switch (tag) {
    case RuleTag::Tell: return "TELL";
    case RuleTag::Sum: return "SUM";
    case RuleTag::Loc: return "LOC";
    case RuleTag::Call: return "CALL";
    case RuleTag::Unless: return "UNLESS";
    case RuleTag::Bang: return "BANG";
  }
  return "?";
}

RuleTag parse_rule_tag(const std::string& text) {
  for (RuleTag t : {RuleTag::Tell, RuleTag::Sum, RuleTag::Loc, RuleTag::Call, RuleTag::Unless, RuleTag::Bang}) {
    if (to_string(t) == text) return t;
  }
  throw std::invalid_argument("unknown rule tag " + text);
}

std::size_t Configuration::find(unsigned id) const {
  for (std::size_t i = 0; i < procs.size(); ++i) {
    if (procs[i].id == id) return i;
  }
  return npos;
}

unsigned Configuration::max_id() const {
  unsigned m = 0;
  for (const auto& p : procs) m = std::max(m, p.id);
  return m;
}

std::string SchedulerPolicy::describe() const {
  switch (kind_) {
    case Kind::Leftmost: return "leftmost";
    case Kind::Seeded: return "seed " + std::to_string(seed_);
    case Kind::Scripted: return "script";
  }
  return "?";
}

std::vector<Choice> Trace::choices() const {
  std::vector<Choice> out;
  for (const auto& s : steps) out.push_back({s.label.id, s.label.branch});
  return out;
}

unsigned Trace::max_id() const {
  unsigned m = initial.max_id();
  for (const auto& s : steps) m = std::max(m, s.after.max_id());
  return m;
}

std::size_t budget_from_env() {
  const char* env = std::getenv("CCPSLICE_BUDGET");
  if (!env) return kDefaultBudget;
  std::size_t value = 0;
  auto [ptr, ec] = std::from_chars(env, env + std::strlen(env), value);
  if (ec != std::errc() || *ptr != '\0' || value == 0) return kDefaultBudget;
  return value;
}

Machine::Machine(std::shared_ptr<const Program> program, std::shared_ptr<const EntailmentEngine> engine)
    : program_(std::move(program)), engine_(std::move(engine)), globals_(program_->visible_globals()) {}

Machine::Machine(const Program& program)
    : Machine(std::make_shared<const Program>(program), make_engine(program)) {}

std::vector<IndexedProcess> Machine::index(const Process& p, unsigned& next_id) const {
  std::vector<IndexedProcess> out;
  for (auto& part : flatten_par(p)) out.push_back({next_id++, std::move(part)});
  return out;
}

Configuration Machine::initial(const Process& entry, unsigned& next_id) const {
  Configuration cfg;
  cfg.procs = index(entry, next_id);
  return cfg;
}

VarSet Machine::context_vars(const Configuration& cfg) const {
  VarSet out = cfg.hidden;
  VarSet s = free_vars(cfg.store);
  out.insert(s.begin(), s.end());
  for (const auto& ip : cfg.procs) {
    VarSet p = free_vars(ip.proc);
    out.insert(p.begin(), p.end());
  }
  out.insert(globals_.begin(), globals_.end());
  return out;
}

std::vector<EnabledStep> Machine::enabled(const Configuration& cfg) const {
  std::vector<EnabledStep> out;
  std::unique_ptr<Saturation> sat;
  auto saturation = [&]() -> const Saturation& {
    if (!sat) sat = engine_->saturate(cfg.store);
    return *sat;
  };
  for (const auto& ip : cfg.procs) {
    const Process& p = ip.proc;
    if (p.is<Tell>()) {
      out.push_back({ip.id, RuleTag::Tell, std::nullopt});
    } else if (p.is<Local>()) {
      out.push_back({ip.id, RuleTag::Loc, std::nullopt});
    } else if (p.is<Call>()) {
      out.push_back({ip.id, RuleTag::Call, std::nullopt});
    } else if (p.is<Bang>()) {
      out.push_back({ip.id, RuleTag::Bang, std::nullopt});
    } else if (const auto* s = p.as<Sum>()) {
      for (std::size_t k = 0; k < s->branches.size(); ++k) {
        const Branch& b = s->branches[k];
        if (!b.elided() && saturation().entails(b.guard)) {
          out.push_back({ip.id, RuleTag::Sum, static_cast<unsigned>(k + 1)});
        }
      }
    } else if (const auto* u = p.as<Unless>()) {
      if (program_->timed && saturation().entails(u->guard)) out.push_back({ip.id, RuleTag::Unless, std::nullopt});
    }
  }
  return out;
}

Step Machine::step(const Configuration& cfg, const Choice& choice, unsigned& next_id) const {
  std::size_t pos = cfg.find(choice.id);
  if (pos == npos) throw ContractViolation("no process with id " + std::to_string(choice.id));
  const Process& p = cfg.procs[pos].proc;
  auto disabled = [&]() {
    std::string k = choice.branch ? "_" + std::to_string(*choice.branch) : "";
    return ContractViolation("step [" + std::to_string(choice.id) + "]" + k + " is not enabled on " +
                             to_string(p));
  };
  bool is_sum = p.is<Sum>();
  if (choice.branch.has_value() != is_sum) throw disabled();

  Step out;
  out.label.id = choice.id;
  out.label.branch = choice.branch;
  Configuration next = cfg;
  auto replace_with = [&](std::vector<IndexedProcess> created) {
    for (const auto& c : created) out.label.created.push_back(c.id);
    next.procs.erase(next.procs.begin() + static_cast<std::ptrdiff_t>(pos));
    next.procs.insert(next.procs.begin() + static_cast<std::ptrdiff_t>(pos), created.begin(), created.end());
  };

  if (const auto* t = p.as<Tell>()) {
    out.label.rule = RuleTag::Tell;
    AtomDecomposition dec = atoms(t->c, context_vars(cfg));
    for (const auto& a : dec.atoms) {
      if (!cfg.store.contains(a)) out.label.added.insert(a);
    }
    out.label.new_hidden.insert(dec.bound.begin(), dec.bound.end());
    next.hidden.insert(dec.bound.begin(), dec.bound.end());
    next.store.insert(dec.atoms.begin(), dec.atoms.end());
    replace_with({});
  } else if (const auto* s = p.as<Sum>()) {
    out.label.rule = RuleTag::Sum;
    unsigned k = *choice.branch;
    if (k < 1 || k > s->branches.size()) throw disabled();
    const Branch& b = s->branches[k - 1];
    if (b.elided() || !engine_->entails(cfg.store, b.guard)) throw disabled();
    replace_with(index(*b.body, next_id));
  } else if (const auto* l = p.as<Local>()) {
    out.label.rule = RuleTag::Loc;
    VarName fresh = fresh_var(l->var, context_vars(cfg));
    Process body = fresh == l->var ? *l->body : subst(*l->body, VarMap{{l->var, fresh}});
    out.label.new_hidden.insert(fresh);
    next.hidden.insert(fresh);
    replace_with(index(body, next_id));
  } else if (const auto* c = p.as<Call>()) {
    out.label.rule = RuleTag::Call;
    const ProcessDef* def = program_->find(c->name);
    if (!def || def->params.size() != c->args.size()) {
      throw ContractViolation("call " + to_string(p) + " does not resolve");
    }
    VarMap sub;
    for (std::size_t a = 0; a < c->args.size(); ++a) sub[def->params[a]] = c->args[a];
    replace_with(index(subst(def->body, sub), next_id));
  } else if (const auto* u = p.as<Unless>()) {
    out.label.rule = RuleTag::Unless;
    if (!program_->timed || !engine_->entails(cfg.store, u->guard)) throw disabled();
    replace_with({});
  } else if (const auto* bang = p.as<Bang>()) {
    out.label.rule = RuleTag::Bang;
    auto created = index(*bang->body, next_id);
    created.push_back({next_id++, Process::next(p)});
    replace_with(std::move(created));
  } else {
    throw disabled();
  }
  out.after = std::move(next);
  return out;
}

Trace Machine::run(Configuration init, const SchedulerPolicy& policy, std::size_t budget, unsigned& next_id) const {
  Trace trace;
  trace.initial = std::move(init);
  std::mt19937_64 rng(policy.seed());
  const Configuration* cfg = &trace.initial;
  for (std::size_t n = 0;; ++n) {
    Choice choice;
    if (policy.kind() == SchedulerPolicy::Kind::Scripted) {
      if (n == policy.script().size() || enabled(*cfg).empty()) break;
      if (n == budget) {
        trace.exhausted = true;
        break;
      }
      choice = policy.script()[n];
    } else {
      auto en = enabled(*cfg);
      if (en.empty()) break;
      if (n == budget) {
        trace.exhausted = true;
        break;
      }
      std::size_t pick = policy.kind() == SchedulerPolicy::Kind::Leftmost ? 0 : rng() % en.size();
      choice = en[pick].choice();
    }
    trace.steps.push_back(step(*cfg, choice, next_id));
    cfg = &trace.steps.back().after;
  }
  return trace;
}

Trace Machine::run(const SchedulerPolicy& policy, std::size_t budget) const {
  unsigned next_id = 1;
  return run(initial(program_->entry, next_id), policy, budget, next_id);
}

bool observables(const EntailmentEngine& engine, const Trace& trace, const Constraint& goal) {
  const Configuration& last = trace.last();
  return entails_hidden(engine, last.hidden, last.store, goal);
}

bool replay_check(const Machine& machine, const Trace& trace) {
  unsigned seen = trace.initial.max_id();
  const Configuration* prev = &trace.initial;
  for (const auto& s : trace.steps) {
    // Created ids are consecutive; start the counter where the recording did.
    unsigned counter = s.label.created.empty() ? seen + 1 : s.label.created.front();
    if (counter <= seen) return false;
    Step again;
    try {
      again = machine.step(*prev, {s.label.id, s.label.branch}, counter);
    } catch (const ContractViolation&) {
      return false;
    }
    if (!(again == s)) return false;
    seen = std::max(seen, s.after.max_id());
    prev = &s.after;
  }
  return true;
}

std::string to_string(const Configuration& cfg) {
  std::string procs;
  for (const auto& ip : cfg.procs) {
    if (!procs.empty()) procs += ", ";
    procs += to_string(ip.proc) + "[" + std::to_string(ip.id) + "]";
  }
  return "({" + to_string(cfg.hidden, ",") + "}; " + procs + "; " + to_string(cfg.store, ", ") + ")";
}

}  // namespace ccpslice
