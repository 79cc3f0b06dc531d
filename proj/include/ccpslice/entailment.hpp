#pragma once

#include <memory>
#include <string>
#include <vector>

#include "ccpslice/constraint.hpp"

namespace ccpslice {

/// Horn implication `premises => head` over token atoms; `head` may be `false`.
struct HornRule {
  std::vector<Constraint> premises;
  Constraint head;
  bool operator==(const HornRule&) const = default;
};

std::string to_string(const HornRule& rule);

/// The result of saturating one store; answers many goals against it.
class Saturation {
 public:
  virtual ~Saturation() = default;
  virtual bool inconsistent() const = 0;
  /// Entailment of a single atomic constraint (true/false/token/comparison/diag).
  virtual bool entails_atom(const Constraint& atom) const = 0;
  /// Entailment of `exists vars. conj(body)`. The default renames the bound
  /// variables apart and requires the body outright (sound, incomplete).
  virtual bool entails_exists(const std::vector<VarName>& vars, const Store& body) const;

  /// Any goal shape: conjunctions, existentials and atoms.
  bool entails(const Constraint& goal) const;

 protected:
  VarSet store_vars_;
};

/// Pluggable entailment/consistency. Instances are immutable after
/// construction and safe to share between threads.
class EntailmentEngine {
 public:
  virtual ~EntailmentEngine() = default;
  virtual std::string name() const = 0;
  virtual std::unique_ptr<Saturation> saturate(const Store& store) const = 0;

  bool entails(const Store& store, const Constraint& goal) const;
  bool consistent(const Store& store) const;
};

/// exists X.(conj S) |= c. Hidden variables that occur in the goal are
/// renamed apart inside the store first, so the goal's occurrences are free.
bool entails_hidden(const EntailmentEngine& engine, const VarSet& hidden, const Store& store, const Constraint& goal);

/// Token atoms closed under ground Horn rules, with diagonals handled by
/// union-find canonicalisation. Decidable and complete for this fragment.
class TokenSystem final : public EntailmentEngine {
 public:
  explicit TokenSystem(std::vector<HornRule> rules = {});
  std::string name() const override { return "token"; }
  std::unique_ptr<Saturation> saturate(const Store& store) const override;
  const std::vector<HornRule>& rules() const { return rules_; }

 private:
  std::vector<HornRule> rules_;
};

/// Integer linear comparisons decided by bounds propagation. Sound but not
/// complete: an entailment is only reported when the interval boxes (or a
/// syntactic match against a stored inequality) prove it.
class IntervalSystem final : public EntailmentEngine {
 public:
  /// Upper bound on propagation rounds; a store that keeps tightening past
  /// it is treated as consistent with the bounds reached so far.
  static constexpr int kMaxRounds = 256;

  std::string name() const override { return "interval"; }
  std::unique_ptr<Saturation> saturate(const Store& store) const override;
};

}  // namespace ccpslice
