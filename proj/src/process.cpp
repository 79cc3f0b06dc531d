#include "ccpslice/process.hpp"

namespace ccpslice {

Process Process::ask(Constraint guard, Process body) { return sum({make_branch(std::move(guard), std::move(body))}); }

Process Process::par(Process left, Process right) {
  return Process(Par{Box<Process>(std::move(left)), Box<Process>(std::move(right))});
}

Process Process::par_all(const std::vector<Process>& parts) {
  if (parts.empty()) return skip();
  Process acc = parts.back();
  for (auto it = parts.rbegin() + 1; it != parts.rend(); ++it) acc = par(*it, acc);
  return acc;
}

Process Process::local(VarName var, Process body) { return Process(Local{std::move(var), Box<Process>(std::move(body))}); }

Process Process::next(Process body, unsigned times) {
  for (unsigned i = 0; i < times; ++i) body = Process(Next{Box<Process>(std::move(body))});
  return body;
}

Process Process::unless(Constraint guard, Process body) {
  return Process(Unless{std::move(guard), Box<Process>(std::move(body))});
}

Process Process::bang(Process body) { return Process(Bang{Box<Process>(std::move(body))}); }

Branch make_branch(Constraint guard, Process body) { return Branch{std::move(guard), Box<Process>(std::move(body))}; }

Branch elided_branch() { return Branch{Constraint::hole(), Box<Process>(Process::hole())}; }

namespace {

bool needs_parens(const Process& p) {
  if (p.is<Par>()) return true;
  if (const auto* s = p.as<Sum>()) return s->branches.size() > 1;
  return false;
}

std::string prim(const Process& p) {
  std::string s = to_string(p);
  return needs_parens(p) ? "(" + s + ")" : s;
}

std::string var_list(const std::vector<VarName>& vars) {
  std::string out;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (i) out += ",";
    out += vars[i].str();
  }
  return out;
}

}  // namespace

std::string to_string(const Process& p) {
  return std::visit(
      [&](const auto& n) -> std::string {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Skip>) {
          return "skip";
        } else if constexpr (std::is_same_v<T, HoleP>) {
          return "*";
        } else if constexpr (std::is_same_v<T, Tell>) {
          return "tell(" + to_string(n.c) + ")";
        } else if constexpr (std::is_same_v<T, Sum>) {
          std::string out;
          for (const auto& b : n.branches) {
            if (!out.empty()) out += " + ";
            out += b.elided() ? "*" : "ask(" + to_string(b.guard) + ", " + to_string(*b.body) + ")";
          }
          return out;
        } else if constexpr (std::is_same_v<T, Par>) {
          std::string left = to_string(*n.left);
          if (n.left->template is<Par>()) left = "(" + left + ")";
          return left + " || " + to_string(*n.right);
        } else if constexpr (std::is_same_v<T, Local>) {
          return "local " + n.var.str() + " in " + prim(*n.body);
        } else if constexpr (std::is_same_v<T, Call>) {
          if (n.args.empty()) return n.name;
          return n.name + "(" + var_list(n.args) + ")";
        } else if constexpr (std::is_same_v<T, Next>) {
          unsigned depth = 1;
          const Process* inner = &*n.body;
          while (const auto* nx = inner->template as<Next>()) {
            ++depth;
            inner = &*nx->body;
          }
          std::string head = depth == 1 ? "next" : "next^" + std::to_string(depth);
          return head + "(" + to_string(*inner) + ")";
        } else if constexpr (std::is_same_v<T, Unless>) {
          return "unless " + to_string(n.guard) + " next " + prim(*n.body);
        } else {
          return "!" + prim(*n.body);
        }
      },
      p.node());
}

namespace {

void flatten_into(const Process& p, std::vector<Process>& out) {
  if (const auto* par = p.as<Par>()) {
    flatten_into(*par->left, out);
    flatten_into(*par->right, out);
  } else if (!p.is<Skip>()) {
    out.push_back(p);
  }
}

void collect_free(const Process& p, VarSet& out) {
  auto add = [&](const VarSet& s) { out.insert(s.begin(), s.end()); };
  std::visit(
      [&](const auto& n) {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Tell>) {
          add(free_vars(n.c));
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& b : n.branches) {
            if (b.elided()) continue;
            add(free_vars(b.guard));
            collect_free(*b.body, out);
          }
        } else if constexpr (std::is_same_v<T, Par>) {
          collect_free(*n.left, out);
          collect_free(*n.right, out);
        } else if constexpr (std::is_same_v<T, Local>) {
          VarSet inner;
          collect_free(*n.body, inner);
          inner.erase(n.var);
          add(inner);
        } else if constexpr (std::is_same_v<T, Call>) {
          out.insert(n.args.begin(), n.args.end());
        } else if constexpr (std::is_same_v<T, Next> || std::is_same_v<T, Bang>) {
          collect_free(*n.body, out);
        } else if constexpr (std::is_same_v<T, Unless>) {
          add(free_vars(n.guard));
          collect_free(*n.body, out);
        }
      },
      p.node());
}

VarName rename(const VarName& v, const VarMap& sub) {
  auto it = sub.find(v);
  return it == sub.end() ? v : it->second;
}

}  // namespace

std::vector<Process> flatten_par(const Process& p) {
  std::vector<Process> out;
  flatten_into(p, out);
  return out;
}

VarSet free_vars(const Process& p) {
  VarSet out;
  collect_free(p, out);
  return out;
}

Process subst(const Process& p, const VarMap& sub) {
  if (sub.empty()) return p;
  return std::visit(
      [&](const auto& n) -> Process {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Skip> || std::is_same_v<T, HoleP>) {
          return p;
        } else if constexpr (std::is_same_v<T, Tell>) {
          return Process::tell(subst(n.c, sub));
        } else if constexpr (std::is_same_v<T, Sum>) {
          std::vector<Branch> branches;
          for (const auto& b : n.branches) {
            if (b.elided()) {
              branches.push_back(b);
            } else {
              branches.push_back(make_branch(subst(b.guard, sub), subst(*b.body, sub)));
            }
          }
          return Process::sum(std::move(branches));
        } else if constexpr (std::is_same_v<T, Par>) {
          return Process::par(subst(*n.left, sub), subst(*n.right, sub));
        } else if constexpr (std::is_same_v<T, Local>) {
          VarMap inner = sub;
          inner.erase(n.var);
          VarSet body_fv = free_vars(*n.body);
          bool captures = false;
          for (const auto& [from, to] : inner) {
            if (body_fv.contains(from) && to == n.var) captures = true;
          }
          if (!captures) return Process::local(n.var, subst(*n.body, inner));
          VarSet avoid = body_fv;
          for (const auto& [from, to] : inner) {
            avoid.insert(from);
            avoid.insert(to);
          }
          VarName renamed = fresh_var(n.var, avoid);
          inner[n.var] = renamed;
          return Process::local(renamed, subst(*n.body, inner));
        } else if constexpr (std::is_same_v<T, Call>) {
          std::vector<VarName> args;
          for (const auto& a : n.args) args.push_back(rename(a, sub));
          return Process::call(n.name, std::move(args));
        } else if constexpr (std::is_same_v<T, Next>) {
          return Process(Next{Box<Process>(subst(*n.body, sub))});
        } else if constexpr (std::is_same_v<T, Unless>) {
          return Process::unless(subst(n.guard, sub), subst(*n.body, sub));
        } else {
          return Process::bang(subst(*n.body, sub));
        }
      },
      p.node());
}

bool uses_timed_constructs(const Process& p) {
  return std::visit(
      [](const auto& n) -> bool {
        using T = std::decay_t<decltype(n)>;
        if constexpr (std::is_same_v<T, Next> || std::is_same_v<T, Unless> || std::is_same_v<T, Bang>) {
          return true;
        } else if constexpr (std::is_same_v<T, Sum>) {
          for (const auto& b : n.branches) {
            if (uses_timed_constructs(*b.body)) return true;
          }
          return false;
        } else if constexpr (std::is_same_v<T, Par>) {
          return uses_timed_constructs(*n.left) || uses_timed_constructs(*n.right);
        } else if constexpr (std::is_same_v<T, Local>) {
          return uses_timed_constructs(*n.body);
        } else {
          return false;
        }
      },
      p.node());
}

}  // namespace ccpslice
