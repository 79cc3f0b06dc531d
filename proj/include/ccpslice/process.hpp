#pragma once

#include <string>
#include <variant>
#include <vector>

#include "ccpslice/box.hpp"
#include "ccpslice/constraint.hpp"

namespace ccpslice {

class Process;

struct Skip {
  auto operator<=>(const Skip&) const = default;
};
/// The irrelevance marker of sliced processes, printed `*`.
struct HoleP {
  auto operator<=>(const HoleP&) const = default;
};
struct Tell {
  Constraint c;
  auto operator<=>(const Tell&) const = default;
  bool operator==(const Tell&) const = default;
};
/// One alternative `ask(guard, body)`. In a sliced sum an elided alternative
/// has a hole guard and a hole body.
struct Branch {
  Constraint guard;
  Box<Process> body;
  bool elided() const { return guard.is_hole(); }
  auto operator<=>(const Branch&) const = default;
  bool operator==(const Branch&) const = default;
};
struct Sum {
  std::vector<Branch> branches;
  auto operator<=>(const Sum&) const = default;
  bool operator==(const Sum&) const = default;
};
struct Par {
  Box<Process> left;
  Box<Process> right;
  auto operator<=>(const Par&) const = default;
  bool operator==(const Par&) const = default;
};
struct Local {
  VarName var;
  Box<Process> body;
  auto operator<=>(const Local&) const = default;
  bool operator==(const Local&) const = default;
};
struct Call {
  std::string name;
  std::vector<VarName> args;
  auto operator<=>(const Call&) const = default;
  bool operator==(const Call&) const = default;
};
struct Next {
  Box<Process> body;
  auto operator<=>(const Next&) const = default;
  bool operator==(const Next&) const = default;
};
/// `unless guard next body`: body runs in the next unit unless the guard is entailed now.
struct Unless {
  Constraint guard;
  Box<Process> body;
  auto operator<=>(const Unless&) const = default;
  bool operator==(const Unless&) const = default;
};
struct Bang {
  Box<Process> body;
  auto operator<=>(const Bang&) const = default;
  bool operator==(const Bang&) const = default;
};

class Process {
 public:
  using Node = std::variant<Skip, Tell, Sum, Par, Local, Call, Next, Unless, Bang, HoleP>;

  Process() : node_(Skip{}) {}
  Process(Node node) : node_(std::move(node)) {}  // NOLINT(implicit)

  static Process skip() { return Process(Skip{}); }
  static Process hole() { return Process(HoleP{}); }
  static Process tell(Constraint c) { return Process(Tell{std::move(c)}); }
  static Process ask(Constraint guard, Process body);
  static Process sum(std::vector<Branch> branches) { return Process(Sum{std::move(branches)}); }
  static Process par(Process left, Process right);
  /// Right-nested parallel composition; empty gives skip, one element itself.
  static Process par_all(const std::vector<Process>& parts);
  static Process local(VarName var, Process body);
  static Process call(std::string name, std::vector<VarName> args = {}) { return Process(Call{std::move(name), std::move(args)}); }
  static Process next(Process body, unsigned times = 1);
  static Process unless(Constraint guard, Process body);
  static Process bang(Process body);

  const Node& node() const { return node_; }
  template <class T>
  const T* as() const { return std::get_if<T>(&node_); }
  template <class T>
  bool is() const { return std::holds_alternative<T>(node_); }
  bool is_hole() const { return is<HoleP>(); }

  auto operator<=>(const Process&) const = default;
  bool operator==(const Process&) const = default;

 private:
  Node node_;
};

Branch make_branch(Constraint guard, Process body);
Branch elided_branch();

/// Canonical single-line printing; parse(to_string(p)) == p.
std::string to_string(const Process& p);

/// Components of nested parallel compositions, left to right, skips dropped.
std::vector<Process> flatten_par(const Process& p);

VarSet free_vars(const Process& p);

/// Simultaneous capture-avoiding substitution; local binders that would
/// capture a substituted-in variable are renamed with `fresh_var`.
Process subst(const Process& p, const VarMap& sub);

/// True when the process contains next/unless/bang anywhere.
bool uses_timed_constructs(const Process& p);

}  // namespace ccpslice
