#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "ftcausal/dag.hpp"
#include "ftcausal/joint.hpp"
#include "ftcausal/rational.hpp"
#include "ftcausal/scenario.hpp"

namespace ftcausal {

inline constexpr std::size_t kDefaultJointCap = std::size_t{1} << 20;
inline constexpr int kDefaultDenominatorBound = 100;

// P(v | parents). Rows are indexed by the parents' joint value in mixed
// radix, first listed parent most significant; each row has one entry per
// value of v.
struct Cpt {
  std::vector<int> parents;
  std::vector<std::vector<Rational>> rows;

  bool operator==(const Cpt&) const = default;
};

class CausalModel {
 public:
  // One CPT per node; parent lists must equal the graph's parent sets (in
  // any order).
  CausalModel(Dag graph, std::vector<Cpt> cpts);

  const Dag& graph() const { return graph_; }
  const Cpt& cpt(int v) const { return cpts_.at(v); }
  const std::vector<Cpt>& cpts() const { return cpts_; }

  // Probability of one full assignment (a value per node).
  Rational probability(const std::vector<int>& assignment) const;

  bool operator==(const CausalModel&) const = default;

 private:
  Dag graph_;
  std::vector<Cpt> cpts_;
};

// Plain-text dump: nodes, edges, and every CPT row.
std::string describe(const CausalModel& m);

// Exact product of the CPTs over every joint state.
JointTable joint_distribution(const CausalModel& m, std::size_t cap = kDefaultJointCap);

// The graph with observed cardinalities taken from the scenario: X_i ranges
// over the slot values of slot i and A_i over the outcome set. Requires
// exactly one setting and one outcome node per slot.
Dag bind_to_scenario(const Dag& g, const PaddedScenario& s);

// P(A|X) of the model: latents summed out, conditioned on each context's
// settings. Settings with zero probability raise PreconditionError naming
// the context.
Phenomenon observable_phenomenon(const CausalModel& m, const PaddedScenario& s,
                                 std::size_t cap = kDefaultJointCap);

// Strictly positive CPTs whose entries have denominator `denominator`
// (parentless settings are uniform instead). Deterministic in `seed`.
CausalModel random_compatible_model(const Dag& g, std::uint64_t seed,
                                    int denominator = kDefaultDenominatorBound);

}  // namespace ftcausal
