#include "ccpslice/marking.hpp"

#include <algorithm>
#include <cctype>

#include "ccpslice/parser.hpp"

namespace ccpslice {

namespace {

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

// Splits on commas outside parentheses.
std::vector<std::string_view> split_top(std::string_view s) {
  std::vector<std::string_view> out;
  int depth = 0;
  std::size_t start = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    if (s[i] == '(') ++depth;
    if (s[i] == ')') --depth;
    if (s[i] == ',' && depth == 0) {
      out.push_back(trim(s.substr(start, i - start)));
      start = i + 1;
    }
  }
  out.push_back(trim(s.substr(start)));
  return out;
}

std::vector<std::string> store_strings(const Store& s) {
  std::vector<std::string> out;
  for (const auto& c : s) out.push_back(to_string(c));
  return out;
}

}  // namespace

Criterion parse_criterion(std::string_view text) {
  text = trim(text);
  auto space = text.find_first_of(" \t");
  std::string_view head = text.substr(0, space);
  std::string_view rest = space == std::string_view::npos ? std::string_view{} : trim(text.substr(space));
  Criterion c;
  try {
    if (head == "atoms") {
      c.kind = Criterion::Kind::Atoms;
      if (!rest.empty()) {
        for (auto part : split_top(rest)) {
          Constraint a = parse_constraint(part);
          if (!a.is_atomic() || a.is<TrueC>()) {
            throw CriterionError("'" + std::string(part) + "' is not an atomic constraint", {});
          }
          c.atoms.push_back(std::move(a));
        }
      }
    } else if (head == "vars") {
      c.kind = Criterion::Kind::Vars;
      if (!rest.empty()) {
        for (auto part : split_top(rest)) c.vars.insert(parse_var_name(part));
      }
    } else if (head == "entails" || head == "inconsistent-with") {
      c.kind = head == "entails" ? Criterion::Kind::Entails : Criterion::Kind::InconsistentWith;
      if (rest.empty()) throw CriterionError(std::string(head) + " needs a constraint", {});
      c.goal = parse_constraint(rest);
    } else {
      throw CriterionError("unknown criterion '" + std::string(head) +
                               "' (expected atoms, vars, entails or inconsistent-with)",
                           {});
    }
  } catch (const SyntaxError& e) {
    throw CriterionError("bad criterion '" + std::string(text) + "': " + e.what(), {});
  }
  return c;
}

std::string to_string(const Criterion& c) {
  switch (c.kind) {
    case Criterion::Kind::Atoms: {
      std::string out = "atoms";
      for (std::size_t i = 0; i < c.atoms.size(); ++i) out += (i ? ", " : " ") + to_string(c.atoms[i]);
      return out;
    }
    case Criterion::Kind::Vars: return c.vars.empty() ? "vars" : "vars " + to_string(c.vars, ", ");
    case Criterion::Kind::Entails: return "entails " + to_string(c.goal);
    case Criterion::Kind::InconsistentWith: return "inconsistent-with " + to_string(c.goal);
  }
  return "?";
}

SubsetResult minimal_subsets(const Store& s, const std::function<bool(const Store&)>& pred,
                             std::optional<std::size_t> cap) {
  SubsetResult out;
  std::vector<Constraint> elems(s.begin(), s.end());
  const std::size_t n = elems.size();
  const std::size_t limit = cap ? std::min(*cap, n) : n;
  std::vector<std::vector<std::size_t>> found;

  auto covers = [&](const std::vector<std::size_t>& idx) {
    for (const auto& m : found) {
      if (std::includes(idx.begin(), idx.end(), m.begin(), m.end())) return true;
    }
    return false;
  };

  for (std::size_t k = 0; k <= limit; ++k) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
      if (!covers(idx)) {
        Store subset;
        for (std::size_t i : idx) subset.insert(elems[i]);
        if (pred(subset)) {
          found.push_back(idx);
          out.subsets.push_back(std::move(subset));
        }
      }
      // Next k-combination in lexicographic order.
      std::size_t i = k;
      while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
      if (i == 0) break;
      ++idx[i - 1];
      for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
    if (k == 0 && !found.empty()) break;  // the empty set satisfies pred; nothing else is minimal
  }
  if (limit < n && pred(s)) {
    // Some larger subset might still be minimal unless every one is covered.
    out.capped = true;
  }
  return out;
}

Store minimal_support(const EntailmentEngine& engine, const Store& s, const Constraint& goal,
                      std::optional<std::size_t> cap, bool& capped) {
  if (goal.is<TrueC>()) return {};
  auto res = minimal_subsets(s, [&](const Store& sub) { return engine.entails(sub, goal); }, cap);
  capped = capped || res.capped;
  Store out;
  for (const auto& sub : res.subsets) out.insert(sub.begin(), sub.end());
  return out;
}

MarkResult mark(const EntailmentEngine& engine, const Configuration& final_cfg, const Criterion& criterion,
                std::optional<std::size_t> cap) {
  const Store& s = final_cfg.store;
  MarkResult out;
  switch (criterion.kind) {
    case Criterion::Kind::Atoms: {
      std::vector<std::string> missing;
      for (const auto& a : criterion.atoms) {
        if (s.contains(a)) {
          out.marked.insert(a);
        } else {
          missing.push_back(to_string(a));
        }
      }
      if (!missing.empty()) {
        std::string list;
        for (const auto& m : missing) list += (list.empty() ? "" : ", ") + m;
        throw CriterionError("not in the final store: " + list, store_strings(s));
      }
      break;
    }
    case Criterion::Kind::Vars: {
      VarSet present = free_vars(s);
      for (const auto& v : criterion.vars) {
        if (!present.contains(v)) out.warnings.push_back("variable " + v.str() + " does not occur in the final store");
      }
      for (const auto& c : s) {
        VarSet fv = free_vars(c);
        if (std::any_of(fv.begin(), fv.end(), [&](const VarName& v) { return criterion.vars.contains(v); })) {
          out.marked.insert(c);
        }
      }
      break;
    }
    case Criterion::Kind::Entails: {
      if (!engine.entails(s, criterion.goal)) {
        out.warnings.push_back("the final store does not entail " + to_string(criterion.goal));
      }
      out.marked = minimal_support(engine, s, criterion.goal, cap, out.capped);
      break;
    }
    case Criterion::Kind::InconsistentWith: {
      AtomDecomposition extra = atoms(criterion.goal, free_vars(s));
      auto pred = [&](const Store& sub) {
        Store joined = sub;
        joined.insert(extra.atoms.begin(), extra.atoms.end());
        return !engine.consistent(joined);
      };
      if (!pred(s)) out.warnings.push_back("the final store is consistent with " + to_string(criterion.goal));
      auto res = minimal_subsets(s, pred, cap);
      out.capped = res.capped;
      for (const auto& sub : res.subsets) out.marked.insert(sub.begin(), sub.end());
      break;
    }
  }
  if (out.capped) {
    out.warnings.push_back("subset search stopped at size " + std::to_string(cap.value_or(0)) +
                           "; the marked set may be incomplete (use exact mode)");
  }
  return out;
}

MarkResult mark_all(const EntailmentEngine& engine, const Configuration& final_cfg,
                    const std::vector<Criterion>& criteria, std::optional<std::size_t> cap) {
  MarkResult out;
  for (const auto& c : criteria) {
    MarkResult one = mark(engine, final_cfg, c, cap);
    out.marked.insert(one.marked.begin(), one.marked.end());
    out.capped = out.capped || one.capped;
    out.warnings.insert(out.warnings.end(), one.warnings.begin(), one.warnings.end());
  }
  return out;
}

}  // namespace ccpslice
