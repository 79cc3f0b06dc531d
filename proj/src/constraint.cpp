#include "ccpslice/constraint.hpp"

#include <algorithm>
#include <stdexcept>

namespace ccpslice {

std::string VarName::str() const {
  if (suffix == 0) return base;
  return base + "_" + std::to_string(suffix);
}

VarName fresh_var(const VarName& hint, const VarSet& avoid) {
  if (!avoid.contains(hint)) return hint;
  for (unsigned n = 1;; ++n) {
    VarName candidate{hint.base, n};
    if (!avoid.contains(candidate)) return candidate;
  }
}

namespace {

LinearExpr normalized(std::vector<LinearTerm> terms, std::int64_t constant) {
  std::sort(terms.begin(), terms.end(), [](const LinearTerm& a, const LinearTerm& b) { return a.var < b.var; });
  LinearExpr out;
  out.constant = constant;
  for (auto& t : terms) {
    if (!out.terms.empty() && out.terms.back().var == t.var) {
      out.terms.back().coef += t.coef;
    } else {
      out.terms.push_back(t);
    }
  }
  std::erase_if(out.terms, [](const LinearTerm& t) { return t.coef == 0; });
  return out;
}

VarName rename_var(const VarName& v, const VarMap& sub) {
  auto it = sub.find(v);
  return it == sub.end() ? v : it->second;
}

// Applies a variable renaming to an atomic constraint (no binders inside).
Constraint rename_atom(const Constraint& c, const VarMap& sub) {
  if (const auto* t = c.as<Token>()) {
    Token out{t->symbol, {}};
    for (const auto& a : t->args) out.args.push_back(rename_var(a, sub));
    return Constraint(std::move(out));
  }
  if (const auto* cmp = c.as<Comparison>()) {
    auto rename_expr = [&](const LinearExpr& e) {
      std::vector<LinearTerm> terms;
      for (const auto& t : e.terms) terms.push_back({t.coef, rename_var(t.var, sub)});
      return normalized(std::move(terms), e.constant);
    };
    return Constraint::compare(rename_expr(cmp->lhs), cmp->op, rename_expr(cmp->rhs));
  }
  if (const auto* d = c.as<Diag>()) {
    return Constraint::diag(rename_var(d->x, sub), rename_var(d->y, sub));
  }
  return c;
}

void collect_free(const Constraint& c, VarSet& out) {
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Token>) {
          out.insert(n.args.begin(), n.args.end());
        } else if constexpr (std::is_same_v<T, Comparison>) {
          for (const auto& t : n.lhs.terms) out.insert(t.var);
          for (const auto& t : n.rhs.terms) out.insert(t.var);
        } else if constexpr (std::is_same_v<T, Diag>) {
          out.insert(n.x);
          out.insert(n.y);
        } else if constexpr (std::is_same_v<T, Conj>) {
          collect_free(*n.left, out);
          collect_free(*n.right, out);
        } else if constexpr (std::is_same_v<T, Exists>) {
          VarSet inner = free_vars(*n.body);
          inner.erase(n.var);
          out.insert(inner.begin(), inner.end());
        }
      },
      c.node());
}

}  // namespace

LinearExpr LinearExpr::variable(VarName v, std::int64_t coef) { return normalized({{coef, std::move(v)}}, 0); }

LinearExpr LinearExpr::number(std::int64_t c) { return normalized({}, c); }

LinearExpr LinearExpr::operator+(const LinearExpr& other) const {
  auto terms = this->terms;
  terms.insert(terms.end(), other.terms.begin(), other.terms.end());
  return normalized(std::move(terms), constant + other.constant);
}

LinearExpr LinearExpr::operator-(const LinearExpr& other) const { return *this + other.scaled(-1); }

LinearExpr LinearExpr::scaled(std::int64_t factor) const {
  std::vector<LinearTerm> out;
  for (const auto& t : terms) out.push_back({t.coef * factor, t.var});
  return normalized(std::move(out), constant * factor);
}

std::string LinearExpr::str() const {
  std::string out;
  for (const auto& t : terms) {
    std::int64_t mag = t.coef < 0 ? -t.coef : t.coef;
    if (t.coef < 0) {
      out += "-";
    } else if (!out.empty()) {
      out += "+";
    }
    if (mag != 1) out += std::to_string(mag) + "*";
    out += t.var.str();
  }
  if (out.empty()) return std::to_string(constant);
  if (constant > 0) out += "+" + std::to_string(constant);
  if (constant < 0) out += std::to_string(constant);
  return out;
}

std::string to_string(CmpOp op) {
  switch (op) {
    case CmpOp::Eq: return "=";
    case CmpOp::Lt: return "<";
    case CmpOp::Le: return "<=";
    case CmpOp::Gt: return ">";
    case CmpOp::Ge: return ">=";
  }
  return "?";
}

Constraint Constraint::token(std::string symbol, std::vector<VarName> args) {
  return Constraint(Token{std::move(symbol), std::move(args)});
}

Constraint Constraint::diag(VarName x, VarName y) { return Constraint(Diag{std::move(x), std::move(y)}); }

Constraint Constraint::compare(LinearExpr lhs, CmpOp op, LinearExpr rhs) {
  if (op == CmpOp::Eq && lhs.is_single_var() && rhs.is_single_var()) {
    return diag(lhs.terms[0].var, rhs.terms[0].var);
  }
  return Constraint(Comparison{std::move(lhs), op, std::move(rhs)});
}

Constraint Constraint::conj(Constraint left, Constraint right) {
  return Constraint(Conj{Box<Constraint>(std::move(left)), Box<Constraint>(std::move(right))});
}

Constraint Constraint::exists(VarName var, Constraint body) {
  return Constraint(Exists{std::move(var), Box<Constraint>(std::move(body))});
}

Constraint Constraint::conj_all(const std::vector<Constraint>& parts) {
  if (parts.empty()) return truth();
  Constraint acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = conj(*it, acc);
  return acc;
}

bool Constraint::is_atomic() const {
  return is<TrueC>() || is<FalseC>() || is<Token>() || is<Comparison>() || is<Diag>();
}

std::string to_string(const Constraint& c) {
  return std::visit(
      [](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, TrueC>) {
          return "true";
        } else if constexpr (std::is_same_v<T, FalseC>) {
          return "false";
        } else if constexpr (std::is_same_v<T, HoleC>) {
          return "*";
        } else if constexpr (std::is_same_v<T, Token>) {
          if (n.args.empty()) return n.symbol;
          std::string out = n.symbol + "(";
          for (std::size_t i = 0; i < n.args.size(); ++i) {
            if (i) out += ",";
            out += n.args[i].str();
          }
          return out + ")";
        } else if constexpr (std::is_same_v<T, Comparison>) {
          return n.lhs.str() + to_string(n.op) + n.rhs.str();
        } else if constexpr (std::is_same_v<T, Diag>) {
          return n.x.str() + "=" + n.y.str();
        } else if constexpr (std::is_same_v<T, Conj>) {
          std::string left = to_string(*n.left);
          if (n.left->template is<Conj>() || n.left->template is<Exists>()) left = "(" + left + ")";
          return left + " /\\ " + to_string(*n.right);
        } else {
          return "exists " + n.var.str() + ". " + to_string(*n.body);
        }
      },
      c.node());
}

std::string to_string(const Store& store, const std::string& sep) {
  std::string out;
  for (const auto& c : store) {
    if (!out.empty()) out += sep;
    out += to_string(c);
  }
  return out;
}

std::string to_string(const VarSet& vars, const std::string& sep) {
  std::string out;
  for (const auto& v : vars) {
    if (!out.empty()) out += sep;
    out += v.str();
  }
  return out;
}

VarSet free_vars(const Constraint& c) {
  VarSet out;
  collect_free(c, out);
  return out;
}

VarSet bound_vars(const Constraint& c) {
  VarSet out;
  if (const auto* e = c.as<Exists>()) {
    out.insert(e->var);
    auto inner = bound_vars(*e->body);
    out.insert(inner.begin(), inner.end());
  } else if (const auto* cj = c.as<Conj>()) {
    out = bound_vars(*cj->left);
    auto right = bound_vars(*cj->right);
    out.insert(right.begin(), right.end());
  }
  return out;
}

VarSet free_vars(const Store& store) {
  VarSet out;
  for (const auto& c : store) collect_free(c, out);
  return out;
}

Store basic(const Constraint& c) {
  if (c.is_atomic()) return {c};
  if (const auto* e = c.as<Exists>()) return basic(*e->body);
  if (const auto* cj = c.as<Conj>()) {
    Store out = basic(*cj->left);
    Store right = basic(*cj->right);
    out.insert(right.begin(), right.end());
    out.erase(Constraint::truth());
    return out;
  }
  throw std::invalid_argument("basic: sliced constraint has no decomposition");
}

namespace {

void decompose(const Constraint& c, const VarMap& scope, VarSet& taken, AtomDecomposition& out) {
  if (const auto* e = c.as<Exists>()) {
    VarName renamed = fresh_var(e->var, taken);
    taken.insert(renamed);
    out.bound.push_back(renamed);
    VarMap inner = scope;
    inner[e->var] = renamed;
    decompose(*e->body, inner, taken, out);
  } else if (const auto* cj = c.as<Conj>()) {
    decompose(*cj->left, scope, taken, out);
    decompose(*cj->right, scope, taken, out);
  } else if (c.is_atomic()) {
    if (!c.is<TrueC>()) out.atoms.insert(rename_atom(c, scope));
  } else {
    throw std::invalid_argument("atoms: sliced constraint has no decomposition");
  }
}

}  // namespace

AtomDecomposition atoms(const Constraint& c, const VarSet& avoid) {
  VarSet taken = avoid;
  auto fv = free_vars(c);
  taken.insert(fv.begin(), fv.end());
  AtomDecomposition out;
  decompose(c, {}, taken, out);
  return out;
}

Constraint subst(const Constraint& c, const VarMap& sub) {
  if (sub.empty()) return c;
  if (c.is_atomic()) return rename_atom(c, sub);
  if (c.is_hole()) return c;
  if (const auto* cj = c.as<Conj>()) return Constraint::conj(subst(*cj->left, sub), subst(*cj->right, sub));
  const auto& e = *c.as<Exists>();
  VarMap inner = sub;
  inner.erase(e.var);
  VarSet body_fv = free_vars(*e.body);
  VarSet range;
  for (const auto& [from, to] : inner) {
    if (body_fv.contains(from)) range.insert(to);
  }
  if (!range.contains(e.var)) return Constraint::exists(e.var, subst(*e.body, inner));
  VarSet avoid = body_fv;
  for (const auto& [from, to] : inner) {
    avoid.insert(from);
    avoid.insert(to);
  }
  VarName renamed = fresh_var(e.var, avoid);
  inner[e.var] = renamed;
  return Constraint::exists(renamed, subst(*e.body, inner));
}

Store subst(const Store& store, const VarMap& sub) {
  Store out;
  for (const auto& c : store) out.insert(subst(c, sub));
  return out;
}

}  // namespace ccpslice
