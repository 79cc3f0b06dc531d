#pragma once

#include <functional>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ccpslice/engine.hpp"

namespace ccpslice {

/// Largest subset size tried by minimal_subsets unless exact mode is asked for.
inline constexpr std::size_t kDefaultSubsetCap = 6;

struct Criterion {
  enum class Kind { Atoms, Vars, Entails, InconsistentWith };
  Kind kind = Kind::Atoms;
  std::vector<Constraint> atoms;  // Atoms
  VarSet vars;                    // Vars
  Constraint goal;                // Entails, InconsistentWith
  bool operator==(const Criterion&) const = default;
};

/// `atoms d, b` | `vars z` | `entails g` | `inconsistent-with x>0`.
Criterion parse_criterion(std::string_view text);
std::string to_string(const Criterion& c);

struct SubsetResult {
  std::vector<Store> subsets;
  bool capped = false;  // sizes above the cap were skipped; the result may miss sets
};

/// All inclusion-minimal subsets of `s` satisfying the monotone predicate,
/// by increasing cardinality. `cap` = nullopt explores every size.
SubsetResult minimal_subsets(const Store& s, const std::function<bool(const Store&)>& pred,
                             std::optional<std::size_t> cap = kDefaultSubsetCap);

struct MarkResult {
  Store marked;
  bool capped = false;
  std::vector<std::string> warnings;
};

/// Throws CriterionError when selected atoms are not in the final store.
MarkResult mark(const EntailmentEngine& engine, const Configuration& final_cfg, const Criterion& criterion,
                std::optional<std::size_t> cap = kDefaultSubsetCap);
/// Union over several criteria.
MarkResult mark_all(const EntailmentEngine& engine, const Configuration& final_cfg,
                    const std::vector<Criterion>& criteria, std::optional<std::size_t> cap = kDefaultSubsetCap);

/// Union of the minimal subsets of `s` entailing `goal`; empty for true.
Store minimal_support(const EntailmentEngine& engine, const Store& s, const Constraint& goal,
                      std::optional<std::size_t> cap, bool& capped);

}  // namespace ccpslice
