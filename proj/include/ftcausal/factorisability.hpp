#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "ftcausal/rational.hpp"
#include "ftcausal/scenario.hpp"

namespace ftcausal {

inline constexpr std::size_t kDefaultStrategyCap = 1'000'000;
// Strategy count up to which infeasibility witnesses are normalised by a
// second LP.
inline constexpr std::size_t kDefaultWitnessNormaliseCap = 4096;

// Outcome index for every measurement of the scenario, in declaration
// order.
using DeterministicStrategy = std::vector<int>;

// |O|^|M|; throws ResourceError above `cap`.
std::size_t strategy_count(const Scenario& s, std::size_t cap = kDefaultStrategyCap);
// Strategy number `index` in mixed radix, first measurement most significant.
DeterministicStrategy strategy_at(const Scenario& s, std::size_t index);
std::vector<DeterministicStrategy> enumerate_strategies(const PaddedScenario& s,
                                                        std::size_t cap = kDefaultStrategyCap);

enum class BoundSense { kUpper, kLower };

// coefficient * P(outcomes | measurements); `measurements` must form a
// context and `outcomes` aligns with it.
struct FunctionalTerm {
  std::vector<int> measurements;
  std::vector<int> outcomes;
  Rational coefficient;

  bool operator==(const FunctionalTerm&) const = default;
};

// A linear functional of P(A|X). With kUpper the classical constraint is
// value <= bound, with kLower value >= bound. `bound` is always recomputed
// from the strategies, never taken from input.
struct InequalityFunctional {
  std::string name;
  BoundSense sense = BoundSense::kUpper;
  std::vector<FunctionalTerm> terms;
  Rational bound;

  bool operator==(const InequalityFunctional&) const = default;
};

// Checks every term against the scenario's contexts and outcomes.
void validate_functional(const Scenario& s, const InequalityFunctional& f);

// Value of the functional on one deterministic strategy.
Rational strategy_value(const InequalityFunctional& f, const DeterministicStrategy& lambda);

// Maximum (kUpper) or minimum (kLower) over all deterministic strategies.
Rational classical_bound(const Scenario& s, const InequalityFunctional& f,
                         std::size_t cap = kDefaultStrategyCap);

// Returns `f` with its bound recomputed.
InequalityFunctional with_classical_bound(const Scenario& s, InequalityFunctional f);

struct InequalityEvaluation {
  Rational value;
  Rational bound;
  bool violated = false;
};

InequalityEvaluation evaluate_inequality(const Phenomenon& p, const InequalityFunctional& f);

// CHSH (measurements a0 a1 b0 b1), Mermin-3 (a0 a1 b0 b1 c0 c1) and KCBS
// (m0..m4 in a 5-cycle), in correlator form with outcome index 0 read as
// +1. Only those whose measurements and contexts exist in `s` with two
// outcomes are returned, bounds computed.
std::vector<InequalityFunctional> builtin_functionals(const Scenario& s);
std::vector<std::string> builtin_functional_names();

struct WeightedStrategy {
  std::size_t index = 0;
  DeterministicStrategy strategy;
  Rational weight;
};

struct FeasibilityCertificate {
  bool feasible = false;
  std::size_t strategy_count = 0;
  // Support of the weights when feasible, ascending strategy index.
  std::vector<WeightedStrategy> weights;
  // When infeasible: a functional whose value on the phenomenon exceeds
  // its classical bound.
  std::optional<InequalityFunctional> witness;
  Rational witness_value;
  bool nd_checked = false;
};

struct FactorisabilityOptions {
  bool allow_disturbing = false;
  std::size_t strategy_cap = kDefaultStrategyCap;
  std::size_t normalise_cap = kDefaultWitnessNormaliseCap;
};

// Exact membership of P(A|X) in the convex hull of deterministic
// strategies. Throws DisturbanceError when ND fails unless
// allow_disturbing. The certificate is re-verified before returning.
FeasibilityCertificate is_factorisable(const Phenomenon& p, const FactorisabilityOptions& options = {});

// Substitution check of a certificate, independent of the solver.
bool certificate_verifies(const Phenomenon& p, const FeasibilityCertificate& cert);

}  // namespace ftcausal
