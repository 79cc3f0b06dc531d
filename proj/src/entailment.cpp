#include "ccpslice/entailment.hpp"

#include <algorithm>
#include <deque>
#include <limits>
#include <map>
#include <numeric>
#include <optional>
#include <stdexcept>

namespace ccpslice {

std::string to_string(const HornRule& rule) {
  std::string out;
  for (const auto& p : rule.premises) {
    if (!out.empty()) out += " /\\ ";
    out += to_string(p);
  }
  if (out.empty()) out = "true";
  return out + " => " + to_string(rule.head);
}

bool Saturation::entails_exists(const std::vector<VarName>& /*vars*/, const Store& body) const {
  // The decomposition already renamed the bound variables apart from the
  // store, so requiring the body outright is a sound under-approximation.
  return std::all_of(body.begin(), body.end(), [&](const Constraint& a) { return entails_atom(a); });
}

bool Saturation::entails(const Constraint& goal) const {
  if (inconsistent()) return true;
  if (goal.is_hole()) throw std::invalid_argument("entails: sliced constraint as goal");
  if (goal.is_atomic()) return entails_atom(goal);
  if (const auto* cj = goal.as<Conj>()) return entails(*cj->left) && entails(*cj->right);
  auto decomposition = atoms(goal, store_vars_);
  if (decomposition.bound.empty()) {
    return std::all_of(decomposition.atoms.begin(), decomposition.atoms.end(),
                       [&](const Constraint& a) { return entails_atom(a); });
  }
  return entails_exists(decomposition.bound, decomposition.atoms);
}

bool EntailmentEngine::entails(const Store& store, const Constraint& goal) const {
  return saturate(store)->entails(goal);
}

bool EntailmentEngine::consistent(const Store& store) const { return !saturate(store)->inconsistent(); }

bool entails_hidden(const EntailmentEngine& engine, const VarSet& hidden, const Store& store, const Constraint& goal) {
  VarSet goal_vars = free_vars(goal);
  VarSet avoid = free_vars(store);
  avoid.insert(goal_vars.begin(), goal_vars.end());
  avoid.insert(hidden.begin(), hidden.end());
  VarMap renaming;
  for (const auto& v : hidden) {
    if (!goal_vars.contains(v)) continue;
    VarName renamed = fresh_var(v, avoid);
    avoid.insert(renamed);
    renaming[v] = renamed;
  }
  if (renaming.empty()) return engine.entails(store, goal);
  return engine.entails(subst(store, renaming), goal);
}

// ---------------------------------------------------------------------------
// Token system

namespace {

class UnionFind {
 public:
  VarName find(const VarName& v) const {
    auto it = parent_.find(v);
    if (it == parent_.end() || it->second == v) return v;
    return find(it->second);
  }
  void unite(const VarName& a, const VarName& b) {
    VarName ra = find(a);
    VarName rb = find(b);
    if (ra == rb) return;
    // The smaller name becomes the representative.
    if (rb < ra) std::swap(ra, rb);
    parent_[rb] = ra;
    parent_.try_emplace(ra, ra);
  }

 private:
  std::map<VarName, VarName> parent_;
};

class TokenSaturation final : public Saturation {
 public:
  TokenSaturation(const Store& store, const std::vector<HornRule>& rules) {
    store_vars_ = free_vars(store);
    for (const auto& c : store) {
      if (const auto* d = c.as<Diag>()) uf_.unite(d->x, d->y);
    }
    std::deque<Token> queue;
    auto add_fact = [&](const Token& t) {
      if (facts_.insert(t).second) queue.push_back(t);
    };
    for (const auto& c : store) {
      if (const auto* t = c.as<Token>()) {
        add_fact(canonical(*t));
      } else if (c.is<FalseC>()) {
        inconsistent_ = true;
      } else if (c.is<Comparison>()) {
        opaque_.insert(c);
      }
    }

    // Counter-based forward chaining to the least fixpoint.
    std::vector<std::size_t> missing(rules.size(), 0);
    std::map<Token, std::vector<std::size_t>> watchers;
    for (std::size_t r = 0; r < rules.size(); ++r) {
      std::set<Token> premises;
      for (const auto& p : rules[r].premises) {
        if (const auto* t = p.as<Token>()) premises.insert(canonical(*t));
      }
      missing[r] = premises.size();
      for (const auto& p : premises) watchers[p].push_back(r);
    }
    auto fire = [&](std::size_t r) {
      const auto& head = rules[r].head;
      if (head.is<FalseC>()) {
        inconsistent_ = true;
      } else if (const auto* t = head.as<Token>()) {
        add_fact(canonical(*t));
      }
    };
    for (std::size_t r = 0; r < rules.size(); ++r) {
      if (missing[r] == 0) fire(r);
    }
    while (!queue.empty()) {
      Token fact = queue.front();
      queue.pop_front();
      auto it = watchers.find(fact);
      if (it == watchers.end()) continue;
      for (std::size_t r : it->second) {
        if (--missing[r] == 0) fire(r);
      }
    }
  }

  bool inconsistent() const override { return inconsistent_; }

  bool entails_atom(const Constraint& atom) const override {
    if (inconsistent_) return true;
    if (atom.is<TrueC>()) return true;
    if (atom.is<FalseC>()) return false;
    if (const auto* t = atom.as<Token>()) return facts_.contains(canonical(*t));
    if (const auto* d = atom.as<Diag>()) return uf_.find(d->x) == uf_.find(d->y);
    return opaque_.contains(atom);
  }

  bool entails_exists(const std::vector<VarName>& vars, const Store& body) const override {
    VarSet bound(vars.begin(), vars.end());
    std::vector<Constraint> ordered(body.begin(), body.end());
    std::stable_partition(ordered.begin(), ordered.end(), [](const Constraint& c) { return c.is<Token>(); });
    std::map<VarName, VarName> binding;
    return solve(ordered, 0, bound, binding);
  }

 private:
  Token canonical(const Token& t) const {
    Token out{t.symbol, {}};
    for (const auto& a : t.args) out.args.push_back(uf_.find(a));
    return out;
  }

  // Backtracking search for witnesses of the bound variables.
  bool solve(const std::vector<Constraint>& goals, std::size_t index, const VarSet& bound,
             std::map<VarName, VarName>& binding) const {
    if (index == goals.size()) return true;
    const Constraint& goal = goals[index];
    if (const auto* t = goal.as<Token>()) {
      auto lo = facts_.lower_bound(Token{t->symbol, {}});
      for (auto it = lo; it != facts_.end() && it->symbol == t->symbol; ++it) {
        if (it->args.size() != t->args.size()) continue;
        auto saved = binding;
        bool ok = true;
        for (std::size_t a = 0; a < t->args.size() && ok; ++a) {
          const VarName& arg = t->args[a];
          if (bound.contains(arg)) {
            auto [pos, inserted] = binding.try_emplace(arg, it->args[a]);
            ok = inserted || pos->second == it->args[a];
          } else {
            ok = uf_.find(arg) == it->args[a];
          }
        }
        if (ok && solve(goals, index + 1, bound, binding)) return true;
        binding = std::move(saved);
      }
      return false;
    }
    if (const auto* d = goal.as<Diag>()) {
      auto value = [&](const VarName& v) -> std::optional<VarName> {
        if (!bound.contains(v)) return uf_.find(v);
        auto it = binding.find(v);
        if (it == binding.end()) return std::nullopt;
        return it->second;
      };
      auto vx = value(d->x);
      auto vy = value(d->y);
      if (vx && vy) return *vx == *vy && solve(goals, index + 1, bound, binding);
      auto saved = binding;
      if (!vx && !vy) {
        binding[d->x] = d->x;
        binding[d->y] = d->x;
      } else if (!vx) {
        binding[d->x] = *vy;
      } else {
        binding[d->y] = *vx;
      }
      if (solve(goals, index + 1, bound, binding)) return true;
      binding = std::move(saved);
      return false;
    }
    if (goal.is<TrueC>()) return solve(goals, index + 1, bound, binding);
    VarSet fv = free_vars(goal);
    bool mentions_bound = std::any_of(fv.begin(), fv.end(), [&](const VarName& v) { return bound.contains(v); });
    return !mentions_bound && entails_atom(goal) && solve(goals, index + 1, bound, binding);
  }

  UnionFind uf_;
  std::set<Token> facts_;
  Store opaque_;
  bool inconsistent_ = false;
};

}  // namespace

TokenSystem::TokenSystem(std::vector<HornRule> rules) : rules_(std::move(rules)) {}

std::unique_ptr<Saturation> TokenSystem::saturate(const Store& store) const {
  return std::make_unique<TokenSaturation>(store, rules_);
}

// ---------------------------------------------------------------------------
// Interval system

namespace {

using Wide = __int128;
constexpr std::int64_t kNegInf = std::numeric_limits<std::int64_t>::min();
constexpr std::int64_t kPosInf = std::numeric_limits<std::int64_t>::max();
constexpr Wide kClamp = Wide(1) << 62;

Wide floor_div(Wide a, Wide b) {
  Wide q = a / b;
  if ((a % b != 0) && ((a < 0) != (b < 0))) --q;
  return q;
}
Wide ceil_div(Wide a, Wide b) { return -floor_div(-a, b); }

// sum(coef_i * x_i) + constant <= 0
struct Inequality {
  std::vector<std::pair<std::size_t, std::int64_t>> coefs;
  std::int64_t constant = 0;
};

class BoundsProblem {
 public:
  std::size_t var(const VarName& v) {
    auto [it, inserted] = index_.try_emplace(v, lo_.size());
    if (inserted) {
      lo_.push_back(kNegInf);
      hi_.push_back(kPosInf);
    }
    return it->second;
  }

  Inequality inequality(const LinearExpr& e) {
    Inequality out;
    for (const auto& t : e.terms) out.coefs.emplace_back(var(t.var), t.coef);
    out.constant = e.constant;
    return out;
  }

  void add(Inequality ineq) { rows_.push_back(std::move(ineq)); }

  // Bounds propagation to fixpoint (or the round cap). Returns false when a
  // domain became empty.
  bool propagate() {
    if (empty_) return false;
    for (int round = 0; round < IntervalSystem::kMaxRounds; ++round) {
      bool changed = false;
      for (const auto& row : rows_) {
        if (!tighten(row, changed)) {
          empty_ = true;
          return false;
        }
      }
      if (!changed) break;
    }
    return true;
  }

  bool empty() const { return empty_; }

  // Largest value the left-hand side can take over the current box.
  std::optional<Wide> max_value(const Inequality& row) const {
    Wide total = row.constant;
    for (auto [v, a] : row.coefs) {
      std::int64_t bound = a > 0 ? hi_[v] : lo_[v];
      if (bound == kNegInf || bound == kPosInf) return std::nullopt;
      total += Wide(a) * bound;
    }
    return total;
  }

  const std::vector<Inequality>& rows() const { return rows_; }

 private:
  bool tighten(const Inequality& row, bool& changed) {
    // Minimum of each term over the box; an unbounded minimum is -inf.
    Wide finite_sum = row.constant;
    int unbounded = 0;
    std::size_t unbounded_at = 0;
    std::vector<std::optional<Wide>> mins;
    mins.reserve(row.coefs.size());
    for (std::size_t k = 0; k < row.coefs.size(); ++k) {
      auto [v, a] = row.coefs[k];
      std::int64_t bound = a > 0 ? lo_[v] : hi_[v];
      if (bound == kNegInf || bound == kPosInf) {
        mins.emplace_back(std::nullopt);
        ++unbounded;
        unbounded_at = k;
      } else {
        Wide m = Wide(a) * bound;
        mins.emplace_back(m);
        finite_sum += m;
      }
    }
    if (unbounded == 0 && finite_sum > 0) return false;
    if (unbounded > 1) return true;
    for (std::size_t k = 0; k < row.coefs.size(); ++k) {
      if (unbounded == 1 && k != unbounded_at) continue;
      auto [v, a] = row.coefs[k];
      Wide rest = unbounded == 1 ? finite_sum : finite_sum - *mins[k];
      // a * x <= -rest
      if (a > 0) {
        Wide ub = floor_div(-rest, a);
        if (ub < -kClamp) ub = -kClamp;
        if (ub < kClamp && (hi_[v] == kPosInf || ub < hi_[v])) {
          hi_[v] = static_cast<std::int64_t>(ub);
          changed = true;
        }
      } else {
        Wide lb = ceil_div(-rest, a);
        if (lb > kClamp) lb = kClamp;
        if (lb > -kClamp && (lo_[v] == kNegInf || lb > lo_[v])) {
          lo_[v] = static_cast<std::int64_t>(lb);
          changed = true;
        }
      }
      if (lo_[v] != kNegInf && hi_[v] != kPosInf && lo_[v] > hi_[v]) return false;
    }
    return true;
  }

  std::map<VarName, std::size_t> index_;
  std::vector<std::int64_t> lo_;
  std::vector<std::int64_t> hi_;
  std::vector<Inequality> rows_;
  bool empty_ = false;
};

// Both halves of a comparison or diagonal as `expr <= 0` rows.
std::vector<LinearExpr> halves(const Constraint& c) {
  if (const auto* d = c.as<Diag>()) {
    auto diff = LinearExpr::variable(d->x) - LinearExpr::variable(d->y);
    return {diff, diff.scaled(-1)};
  }
  const auto& cmp = *c.as<Comparison>();
  LinearExpr diff = cmp.lhs - cmp.rhs;
  auto one = LinearExpr::number(1);
  switch (cmp.op) {
    case CmpOp::Eq: return {diff, diff.scaled(-1)};
    case CmpOp::Lt: return {diff + one};
    case CmpOp::Le: return {diff};
    case CmpOp::Gt: return {diff.scaled(-1) + one};
    case CmpOp::Ge: return {diff.scaled(-1)};
  }
  return {};
}

// Normalised form `sum(b_i x_i) <= bound` with gcd(b) = 1, for syntactic matching.
std::pair<std::vector<LinearTerm>, Wide> normal_form(const LinearExpr& e) {
  std::int64_t g = 0;
  for (const auto& t : e.terms) g = std::gcd(g, t.coef < 0 ? -t.coef : t.coef);
  if (g == 0) return {{}, -Wide(e.constant)};
  std::vector<LinearTerm> terms;
  for (const auto& t : e.terms) terms.push_back({t.coef / g, t.var});
  return {terms, floor_div(-Wide(e.constant), g)};
}

class IntervalSaturation final : public Saturation {
 public:
  explicit IntervalSaturation(const Store& store) {
    store_vars_ = free_vars(store);
    for (const auto& c : store) {
      if (c.is<FalseC>()) {
        inconsistent_ = true;
      } else if (c.is<Comparison>() || c.is<Diag>()) {
        for (const auto& h : halves(c)) {
          problem_.add(problem_.inequality(h));
          auto [terms, bound] = normal_form(h);
          auto [it, inserted] = syntactic_.try_emplace(terms, bound);
          if (!inserted && bound < it->second) it->second = bound;
        }
      } else if (c.is<Token>()) {
        opaque_.insert(c);
      }
    }
    if (!inconsistent_ && !problem_.propagate()) inconsistent_ = true;
  }

  bool inconsistent() const override { return inconsistent_; }

  bool entails_atom(const Constraint& atom) const override {
    if (inconsistent_) return true;
    if (atom.is<TrueC>()) return true;
    if (atom.is<FalseC>()) return false;
    if (atom.is<Token>()) return opaque_.contains(atom);
    for (const auto& h : halves(atom)) {
      if (!entails_half(h)) return false;
    }
    return true;
  }

 private:
  bool entails_half(const LinearExpr& half) const {
    auto [terms, bound] = normal_form(half);
    if (terms.empty()) return bound >= 0;
    if (auto it = syntactic_.find(terms); it != syntactic_.end() && it->second <= bound) return true;
    BoundsProblem probe = problem_;
    auto row = probe.inequality(half);
    if (auto m = probe.max_value(row); m && *m <= 0) return true;
    // Refutation: the store plus the negated half has an empty box.
    probe.add(probe.inequality(half.scaled(-1) + LinearExpr::number(1)));
    return !probe.propagate();
  }

  BoundsProblem problem_;
  std::map<std::vector<LinearTerm>, Wide> syntactic_;
  Store opaque_;
  bool inconsistent_ = false;
};

}  // namespace

std::unique_ptr<Saturation> IntervalSystem::saturate(const Store& store) const {
  return std::make_unique<IntervalSaturation>(store);
}

}  // namespace ccpslice
