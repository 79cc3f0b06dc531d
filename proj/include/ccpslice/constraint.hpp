#pragma once

#include <compare>
#include <cstdint>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "ccpslice/box.hpp"

namespace ccpslice {

/// A variable: a base identifier plus an optional freshness suffix
/// (printed `x_3`; suffix 0 means none).
struct VarName {
  std::string base;
  unsigned suffix = 0;

  VarName() = default;
  VarName(std::string b, unsigned s = 0) : base(std::move(b)), suffix(s) {}  // NOLINT(implicit)

  auto operator<=>(const VarName&) const = default;
  std::string str() const;
};

using VarSet = std::set<VarName>;
using VarMap = std::map<VarName, VarName>;

/// Returns `hint` itself when it is not in `avoid`, otherwise the base name
/// with the smallest suffix not in `avoid`.
VarName fresh_var(const VarName& hint, const VarSet& avoid);

struct LinearTerm {
  std::int64_t coef = 0;
  VarName var;
  auto operator<=>(const LinearTerm&) const = default;
};

/// sum(coef * var) + constant, kept with terms sorted by variable, merged,
/// and zero coefficients dropped.
struct LinearExpr {
  std::vector<LinearTerm> terms;
  std::int64_t constant = 0;

  auto operator<=>(const LinearExpr&) const = default;

  static LinearExpr variable(VarName v, std::int64_t coef = 1);
  static LinearExpr number(std::int64_t c);
  LinearExpr operator+(const LinearExpr& other) const;
  LinearExpr operator-(const LinearExpr& other) const;
  LinearExpr scaled(std::int64_t factor) const;
  bool is_single_var() const { return terms.size() == 1 && terms[0].coef == 1 && constant == 0; }
  std::string str() const;
};

enum class CmpOp { Eq, Lt, Le, Gt, Ge };
std::string to_string(CmpOp op);

struct TrueC {
  auto operator<=>(const TrueC&) const = default;
};
struct FalseC {
  auto operator<=>(const FalseC&) const = default;
};
/// The irrelevance marker of sliced constraints, printed `*`.
struct HoleC {
  auto operator<=>(const HoleC&) const = default;
};
struct Token {
  std::string symbol;
  std::vector<VarName> args;
  auto operator<=>(const Token&) const = default;
};
struct Comparison {
  LinearExpr lhs;
  CmpOp op = CmpOp::Eq;
  LinearExpr rhs;
  auto operator<=>(const Comparison&) const = default;
};
/// Diagonal element d_xy, i.e. the equality x = y.
struct Diag {
  VarName x;
  VarName y;
  auto operator<=>(const Diag&) const = default;
};

class Constraint;

struct Conj {
  Box<Constraint> left;
  Box<Constraint> right;
  auto operator<=>(const Conj&) const = default;
  bool operator==(const Conj&) const = default;
};
struct Exists {
  VarName var;
  Box<Constraint> body;
  auto operator<=>(const Exists&) const = default;
  bool operator==(const Exists&) const = default;
};

class Constraint {
 public:
  using Node = std::variant<TrueC, FalseC, Token, Comparison, Diag, Conj, Exists, HoleC>;

  Constraint() : node_(TrueC{}) {}
  Constraint(Node node) : node_(std::move(node)) {}  // NOLINT(implicit)

  static Constraint truth() { return Constraint(TrueC{}); }
  static Constraint falsity() { return Constraint(FalseC{}); }
  static Constraint hole() { return Constraint(HoleC{}); }
  static Constraint token(std::string symbol, std::vector<VarName> args = {});
  static Constraint diag(VarName x, VarName y);
  /// Builds `lhs op rhs`; a plain `x = y` between two variables becomes Diag.
  static Constraint compare(LinearExpr lhs, CmpOp op, LinearExpr rhs);
  static Constraint conj(Constraint left, Constraint right);
  static Constraint exists(VarName var, Constraint body);
  /// Right-nested conjunction; empty input gives `true`.
  static Constraint conj_all(const std::vector<Constraint>& parts);

  const Node& node() const { return node_; }
  template <class T>
  const T* as() const { return std::get_if<T>(&node_); }
  template <class T>
  bool is() const { return std::holds_alternative<T>(node_); }

  /// True, False, Token, Comparison or Diag.
  bool is_atomic() const;
  bool is_hole() const { return is<HoleC>(); }

  auto operator<=>(const Constraint&) const = default;
  bool operator==(const Constraint&) const = default;

 private:
  Node node_;
};

using Store = std::set<Constraint>;

std::string to_string(const Constraint& c);
std::string to_string(const Store& store, const std::string& sep = ", ");
std::string to_string(const VarSet& vars, const std::string& sep = ", ");

VarSet free_vars(const Constraint& c);
VarSet bound_vars(const Constraint& c);
VarSet free_vars(const Store& store);

/// Decomposition into store elements: atoms, t, f and diagonals are kept,
/// existential binders are stripped, conjunctions are unioned and a `true`
/// under a conjunction is dropped.
Store basic(const Constraint& c);

struct AtomDecomposition {
  std::vector<VarName> bound;  // renamed bound variables, in binder order
  Store atoms;
};

/// Renames every bound variable of `c` apart from `avoid` (and from each
/// other and from the free variables of `c`), then decomposes. `true` never
/// appears in the result.
AtomDecomposition atoms(const Constraint& c, const VarSet& avoid);

/// Simultaneous capture-avoiding substitution.
Constraint subst(const Constraint& c, const VarMap& sub);
Store subst(const Store& store, const VarMap& sub);

}  // namespace ccpslice
