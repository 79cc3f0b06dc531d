#include "ccpslice/slicer.hpp"

#include <algorithm>
#include <functional>

namespace ccpslice {

namespace {

// A sliced constraint taken apart: exists binders. (atoms /\ maybe *).
struct SlicedParts {
  std::vector<VarName> binders;
  Store atoms;
  bool hole = false;
};

void take_apart(const Constraint& c, SlicedParts& out) {
  if (const auto* e = c.as<Exists>()) {
    out.binders.push_back(e->var);
    take_apart(*e->body, out);
  } else if (const auto* cj = c.as<Conj>()) {
    take_apart(*cj->left, out);
    take_apart(*cj->right, out);
  } else if (c.is_hole()) {
    out.hole = true;
  } else if (!c.is<TrueC>()) {
    out.atoms.insert(c);
  }
}

Constraint assemble(const std::vector<VarName>& binders, const Store& kept, bool hole) {
  std::vector<Constraint> parts(kept.begin(), kept.end());
  if (hole || parts.empty()) parts.push_back(Constraint::hole());
  Constraint body = parts.size() == 1 ? parts.front() : Constraint::conj_all(parts);
  for (auto it = binders.rbegin(); it != binders.rend(); ++it) body = Constraint::exists(*it, body);
  return body;
}

// `*` or `exists x.. *`.
bool degenerate(const Constraint& c) {
  if (c.is_hole()) return true;
  if (const auto* e = c.as<Exists>()) return degenerate(*e->body);
  return false;
}

Process slot(const Replacements& theta, unsigned id) {
  auto it = theta.find(id);
  return it == theta.end() ? Process::hole() : it->second;
}

std::vector<Process> slots(const Replacements& theta, const std::vector<unsigned>& ids) {
  std::vector<Process> out;
  for (unsigned id : ids) out.push_back(slot(theta, id));
  return out;
}

SlicedConfig apply(const Configuration& cfg, const Replacements& theta, const Store& relevant) {
  SlicedConfig out;
  VarSet vars = free_vars(relevant);
  for (const auto& x : cfg.hidden) {
    if (vars.contains(x)) out.hidden.insert(x);
  }
  for (const auto& ip : cfg.procs) out.procs.push_back({ip.id, slot(theta, ip.id)});
  for (const auto& c : cfg.store) {
    if (relevant.contains(c)) out.store.insert(c);
  }
  return out;
}

Constraint merge_constraints(const Constraint& a, const Constraint& b) {
  if (a == b || b.is_hole()) return a;
  if (a.is_hole()) return b;
  SlicedParts pa, pb;
  take_apart(a, pa);
  take_apart(b, pb);
  std::vector<VarName> binders = pa.binders;
  for (const auto& y : pb.binders) {
    if (std::find(binders.begin(), binders.end(), y) == binders.end()) binders.push_back(y);
  }
  Store kept = pa.atoms;
  kept.insert(pb.atoms.begin(), pb.atoms.end());
  return assemble(binders, kept, pa.hole || pb.hole);
}


bool tell_approximates(const Constraint& original, const Constraint& sliced) {
  if (sliced.is_hole()) return true;
  SlicedParts parts;
  take_apart(sliced, parts);
  Store target;
  try {
    target = basic(original);
  } catch (const std::invalid_argument&) {
    return false;
  }
  VarSet original_bound = bound_vars(original);
  std::vector<VarName> targets(original_bound.begin(), original_bound.end());
  std::vector<VarName> binders;
  for (const auto& y : parts.binders) {
    VarSet fv = free_vars(parts.atoms);
    if (fv.contains(y)) binders.push_back(y);
  }
  // Search for a mapping of the sliced binders onto the original's binders.
  VarMap sigma;
  std::function<bool(std::size_t)> search = [&](std::size_t i) {
    if (i == binders.size()) {
      Store renamed = subst(parts.atoms, sigma);
      return std::includes(target.begin(), target.end(), renamed.begin(), renamed.end());
    }
    for (const auto& t : targets) {
      sigma[binders[i]] = t;
      if (search(i + 1)) return true;
    }
    sigma.erase(binders[i]);
    return false;
  };
  return search(0);
}

}  // namespace

Constraint slice_constraints(const VarSet& x_before, const VarSet& x_after, const Store& s_before,
                             const Store& s_after, const Store& marked) {
  std::vector<VarName> fresh;
  for (const auto& x : x_after) {
    if (!x_before.contains(x)) fresh.push_back(x);
  }
  Store kept;
  bool dropped = false;
  for (const auto& c : s_after) {
    if (s_before.contains(c)) continue;
    if (marked.contains(c)) {
      kept.insert(c);
    } else {
      dropped = true;
    }
  }
  return assemble(fresh, kept, dropped);
}

Process par_of(const std::vector<Process>& parts) {
  if (std::all_of(parts.begin(), parts.end(), [](const Process& p) { return p.is_hole(); })) return Process::hole();
  return Process::par_all(parts);
}

SliceStep slice_process(const Configuration& before, const Configuration& after, const StepLabel& label,
                        const Replacements& theta, const Store& marked) {
  std::size_t pos = before.find(label.id);
  if (pos == npos) throw ContractViolation("step label names process " + std::to_string(label.id) + " which is absent");
  const Process& p = before.procs[pos].proc;
  SliceStep out;
  const unsigned i = label.id;
  switch (label.rule) {
    case RuleTag::Tell: {
      if (!p.is<Tell>()) break;
      Constraint c = slice_constraints(before.hidden, after.hidden, before.store, after.store, marked);
      if (!degenerate(c)) out.theta[i] = Process::tell(std::move(c));
      return out;
    }
    case RuleTag::Sum: {
      const auto* s = p.as<Sum>();
      if (!s || !label.branch || *label.branch < 1 || *label.branch > s->branches.size()) break;
      Process body = par_of(slots(theta, label.created));
      if (body.is_hole()) return out;
      std::vector<Branch> branches;
      for (std::size_t l = 0; l < s->branches.size(); ++l) {
        if (l + 1 == *label.branch) {
          branches.push_back(make_branch(s->branches[l].guard, body));
        } else {
          branches.push_back(elided_branch());
        }
      }
      out.theta[i] = Process::sum(std::move(branches));
      out.guard = s->branches[*label.branch - 1].guard;
      return out;
    }
    case RuleTag::Loc: {
      if (!p.is<Local>() || label.new_hidden.size() != 1) break;
      Process body = par_of(slots(theta, label.created));
      if (!body.is_hole()) out.theta[i] = Process::local(*label.new_hidden.begin(), body);
      return out;
    }
    case RuleTag::Call: {
      if (!p.is<Call>()) break;
      if (!par_of(slots(theta, label.created)).is_hole()) out.theta[i] = p;
      return out;
    }
    case RuleTag::Unless: {
      if (!p.is<Unless>()) break;
      return out;
    }
    case RuleTag::Bang: {
      if (!p.is<Bang>() || label.created.empty()) break;
      std::vector<unsigned> copy_ids(label.created.begin(), label.created.end() - 1);
      Process copy = par_of(slots(theta, copy_ids));
      Process replica = slot(theta, label.created.back());
      Process later = Process::hole();
      if (const auto* n = replica.as<Next>()) {
        if (const auto* b = n->body->as<Bang>()) later = *b->body;
      }
      Process merged = merge_slices(copy, later);
      if (!merged.is_hole()) out.theta[i] = Process::bang(merged);
      return out;
    }
  }
  throw ContractViolation("step label " + to_string(label.rule) + " does not match process " + to_string(p));
}

SlicedTrace slice_trace(const EntailmentEngine& engine, const Trace& trace, const Store& marked,
                        const SliceOptions& options, const Replacements& seed) {
  const Configuration& last = trace.last();
  std::vector<std::string> missing;
  for (const auto& c : marked) {
    if (!last.store.contains(c)) missing.push_back(to_string(c));
  }
  if (!missing.empty()) {
    std::vector<std::string> available;
    for (const auto& c : last.store) available.push_back(to_string(c));
    std::string list;
    for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
    throw CriterionError("marked constraints not in the final store: " + list, available);
  }

  SlicedTrace out;
  out.criterion = marked;
  out.theta = seed;
  Store relevant = marked;
  const std::size_t n = trace.steps.size();
  out.configs.resize(n + 1);
  out.configs[n] = apply(last, out.theta, relevant);
  for (std::size_t l = n; l-- > 0;) {
    const Step& s = trace.steps[l];
    SliceStep r = slice_process(trace.at(l), s.after, s.label, out.theta, relevant);
    for (auto& [id, proc] : r.theta) out.theta[id] = std::move(proc);
    if (options.causal && !r.guard.is<TrueC>()) {
      Store support = minimal_support(engine, trace.at(l).store, r.guard, options.cap, out.capped);
      relevant.insert(support.begin(), support.end());
      out.retained_guards[l + 1] = r.guard;
    }
    out.configs[l] = apply(trace.at(l), out.theta, relevant);
  }
  for (const auto& s : trace.steps) out.labels.push_back(s.label);
  out.relevant = std::move(relevant);
  return out;
}

TimedSlice slice_timed_trace(const EntailmentEngine& engine, const TimedTrace& trace, unsigned unit,
                             const Store& marked, const SliceOptions& options) {
  if (unit < 1 || unit > trace.units.size()) {
    throw CriterionError("time-unit " + std::to_string(unit) + " is out of range 1.." +
                             std::to_string(trace.units.size()),
                         {});
  }
  TimedSlice out;
  out.unit = unit;
  out.units.resize(unit);
  out.units[unit - 1] = slice_trace(engine, trace.units[unit - 1].internal, marked, options);
  for (unsigned t = unit - 1; t >= 1; --t) {
    const TimeUnit& u = trace.units[t - 1];
    const Replacements& later = out.units[t].theta;
    std::map<unsigned, std::vector<std::pair<unsigned, unsigned>>> split;  // from -> (slot, id)
    for (const auto& o : u.continuation.origins) split[o.from].push_back({o.slot, o.id});
    std::set<unsigned> kept_ids;
    for (const auto& ip : u.continuation.procs) kept_ids.insert(ip.id);

    Replacements seed;
    for (const auto& ip : u.internal.last().procs) {
      const Process& p = ip.proc;
      if (!p.is<Next>() && !p.is<Unless>()) continue;  // unfired sums stay *
      Process cont = Process::hole();
      if (auto it = split.find(ip.id); it != split.end()) {
        auto parts = it->second;
        std::sort(parts.begin(), parts.end());
        std::vector<Process> slices;
        for (const auto& [slot_index, id] : parts) slices.push_back(slot(later, id));
        cont = par_of(slices);
      } else if (kept_ids.contains(ip.id)) {
        cont = slot(later, ip.id);
      }
      if (cont.is_hole()) continue;
      if (const auto* un = p.as<Unless>()) {
        seed[ip.id] = Process::unless(un->guard, cont);
      } else {
        seed[ip.id] = Process::next(cont);
      }
    }
    out.units[t - 1] = slice_trace(engine, u.internal, {}, options, seed);
  }
  return out;
}

Process merge_slices(const Process& a, const Process& b) {
  if (b.is_hole() || a == b) return a;
  if (a.is_hole()) return b;
  if (a.is<Par>() || b.is<Par>()) {
    auto fa = flatten_par(a);
    auto fb = flatten_par(b);
    if (fa.size() != fb.size()) return a;
    std::vector<Process> merged;
    for (std::size_t i = 0; i < fa.size(); ++i) merged.push_back(merge_slices(fa[i], fb[i]));
    return par_of(merged);
  }
  if (const auto* ta = a.as<Tell>()) {
    if (const auto* tb = b.as<Tell>()) return Process::tell(merge_constraints(ta->c, tb->c));
    return a;
  }
  if (const auto* sa = a.as<Sum>()) {
    const auto* sb = b.as<Sum>();
    if (!sb || sb->branches.size() != sa->branches.size()) return a;
    std::vector<Branch> branches;
    for (std::size_t l = 0; l < sa->branches.size(); ++l) {
      const Branch& x = sa->branches[l];
      const Branch& y = sb->branches[l];
      if (x.elided()) {
        branches.push_back(y);
      } else if (y.elided()) {
        branches.push_back(x);
      } else {
        branches.push_back(make_branch(x.guard, merge_slices(*x.body, *y.body)));
      }
    }
    return Process::sum(std::move(branches));
  }
  if (const auto* la = a.as<Local>()) {
    const auto* lb = b.as<Local>();
    if (!lb) return a;
    Process body_b = lb->var == la->var ? *lb->body : subst(*lb->body, VarMap{{lb->var, la->var}});
    return Process::local(la->var, merge_slices(*la->body, body_b));
  }
  if (const auto* na = a.as<Next>()) {
    if (const auto* nb = b.as<Next>()) return Process::next(merge_slices(*na->body, *nb->body));
    return a;
  }
  if (const auto* ua = a.as<Unless>()) {
    if (const auto* ub = b.as<Unless>()) return Process::unless(ua->guard, merge_slices(*ua->body, *ub->body));
    return a;
  }
  if (const auto* ba = a.as<Bang>()) {
    if (const auto* bb = b.as<Bang>()) return Process::bang(merge_slices(*ba->body, *bb->body));
    return a;
  }
  return a;
}

bool approximates(const Process& original, const Process& sliced) {
  if (sliced.is_hole()) return true;
  if (original.is<Par>() || sliced.is<Par>()) {
    auto fo = flatten_par(original);
    auto fs = flatten_par(sliced);
    if (fo.size() != fs.size()) return false;
    for (std::size_t i = 0; i < fo.size(); ++i) {
      if (!approximates(fo[i], fs[i])) return false;
    }
    return true;
  }
  return std::visit(
      [&](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Tell>) {
          const auto* s = sliced.as<Tell>();
          return s && tell_approximates(n.c, s->c);
        } else if constexpr (std::is_same_v<T, Sum>) {
          const auto* s = sliced.as<Sum>();
          if (!s || s->branches.size() != n.branches.size()) return false;
          for (std::size_t l = 0; l < n.branches.size(); ++l) {
            const Branch& b = s->branches[l];
            if (b.elided()) continue;
            if (!(b.guard == n.branches[l].guard) || !approximates(*n.branches[l].body, *b.body)) return false;
          }
          return true;
        } else if constexpr (std::is_same_v<T, Local>) {
          const auto* s = sliced.as<Local>();
          if (!s) return false;
          Process renamed = s->var == n.var ? *n.body : subst(*n.body, VarMap{{n.var, s->var}});
          return approximates(renamed, *s->body);
        } else if constexpr (std::is_same_v<T, Next>) {
          const auto* s = sliced.as<Next>();
          return s && approximates(*n.body, *s->body);
        } else if constexpr (std::is_same_v<T, Unless>) {
          const auto* s = sliced.as<Unless>();
          return s && s->guard == n.guard && approximates(*n.body, *s->body);
        } else if constexpr (std::is_same_v<T, Bang>) {
          const auto* s = sliced.as<Bang>();
          return s && approximates(*n.body, *s->body);
        } else {
          return original == sliced;
        }
      },
      original.node());
}

}  // namespace ccpslice
