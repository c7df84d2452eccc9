#pragma once

#include <cstdint>
#include <functional>
#include <optional>
#include <string>
#include <vector>

#include "ftcausal/causal_model.hpp"
#include "ftcausal/dag.hpp"
#include "ftcausal/factorisability.hpp"
#include "ftcausal/faithfulness.hpp"
#include "ftcausal/scenario.hpp"

namespace ftcausal {

struct LemmaOptions {
  int max_set_size = 2;
  // Also enumerate edges between two members of the same set.
  bool within_set_edges = true;
  std::size_t graph_cap = 50'000'000;
};

struct LemmaReport {
  LemmaOptions options;
  std::size_t shapes = 0;  // (|A|,|B|,|C|,|D|) combinations
  std::size_t graphs = 0;  // acyclic chained graphs examined
  std::size_t premise_true = 0;
  std::size_t premise_false = 0;
  std::vector<std::string> counterexamples;

  bool holds() const { return counterexamples.empty(); }
};

// Every acyclic graph on sets A, B, C, D of the given sizes whose edges run
// only between adjacent sets (A-B, B-C, C-D), plus within-set edges when
// enabled. Visits parent masks with nodes ordered A, B, C, D.
void for_each_chained_graph(int a, int b, int c, int d, bool within_set_edges,
                            const std::function<void(const std::vector<NodeSet>&)>& visit);

LemmaReport verify_lemma_chain(const LemmaOptions& options = {});

struct CandidateBudget {
  int max_latents = 2;
  int max_subset_size = 4;
  int latent_cardinality = kDefaultLatentCardinality;
  bool latents_over_outcomes_only = false;
  // Observable graphs with more edges are skipped; negative means no limit.
  int max_observable_edges = -1;
  std::size_t candidate_cap = 50'000'000;
};

// Labeled acyclic digraphs on 2n observable nodes (A1..An, X1..Xn) times
// latent patterns. A latent pattern is a set of distinct node subsets of
// size 2..max_subset_size, at most max_latents of them, each subset the
// children of one parentless latent; latents are numbered by ascending
// subset so each pattern is emitted once.
class CandidateClass {
 public:
  CandidateClass(const PaddedScenario& s, CandidateBudget budget);

  const PaddedScenario& scenario() const { return scenario_; }
  const CandidateBudget& budget() const { return budget_; }
  int observable_count() const { return 2 * scenario_.n(); }
  const std::vector<std::vector<NodeSet>>& latent_patterns() const { return patterns_; }
  // Number of acyclic observable graphs times number of latent patterns.
  std::size_t size() const;

  // Observable graphs as parent masks over nodes A1..An, X1..Xn.
  void for_each_observable_graph(const std::function<void(const std::vector<NodeSet>&)>& visit) const;
  // Full graph from an observable graph and a latent pattern.
  Dag build(const std::vector<NodeSet>& observable_parents, const std::vector<NodeSet>& pattern) const;
  // Every candidate, in a fixed order.
  void for_each(const std::function<void(const Dag&)>& visit) const;

 private:
  PaddedScenario scenario_;
  CandidateBudget budget_;
  std::vector<std::vector<NodeSet>> patterns_;
  mutable std::optional<std::size_t> observable_count_cache_;
};

CandidateClass enumerate_candidates(const PaddedScenario& s, const CandidateBudget& budget = {});

bool satisfies_nd_obligations(const PaddedScenario& s, const Dag& g);

// Survivors of the no-disturbance d-separation filter. Observable graphs
// failing an obligation are discarded before latents are attached, which
// is exact because adding edges never turns a d-connection into a
// d-separation.
std::vector<Dag> filter_no_disturbance_dsep(const CandidateClass& c);

struct Partition {
  NodeSet b_part = 0;
  NodeSet c_part = 0;
  NodeSet y_part = 0;
  NodeSet z_part = 0;
  NodeSet lambda_part = 0;  // latents with no setting descendant
  NodeSet omega_part = 0;   // latents with no outcome descendant
  NodeSet mixed_part = 0;   // latents with both
  // Members of c_part connected to more than one member of z_part.
  NodeSet multi_connected = 0;
};

// Two nodes are causally connected when one is an ancestor of the other
// or they share a latent ancestor.
bool causally_connected(const Dag& g, int u, int v);
Partition compute_partition(const Dag& g);

struct DerivedCheck {
  std::string label;  // "(8)", "(9)", "(10) A1", "(11) A1", ...
  DSepQuery query;
  bool vacuous = false;
  bool holds = true;
};

// (B _||_ Z | L), (A _||_ Y | Z L), (C_i _||_ C_\i | Z L B) and
// (C_i _||_ Z_\i | Z_i L) with L the lambda part and Z_i the setting in
// C_i's slot (when it lies in Z).
std::vector<DerivedCheck> verify_derived_dseps(const Dag& g, const Partition& part);

struct ExclusionCheck {
  bool no_cross_slot_edge = true;  // no A_i - X_j edge, j != i
  bool no_c_to_b_edge = true;
  bool no_c_c_edge = true;

  bool holds() const { return no_cross_slot_edge && no_c_to_b_edge && no_c_c_edge; }
};

ExclusionCheck check_exclusions(const Dag& g, const Partition& part);

struct TheoremOptions {
  int n = 2;
  int settings_per_party = 2;
  int outcomes = 2;
  CandidateBudget budget;
  int trials = 50;
  std::uint64_t seed = 1;
  int denominator = kDefaultDenominatorBound;
  // Survivors listed in the report.
  bool list_survivors = false;
};

struct TheoremReport {
  TheoremOptions options;
  std::size_t candidates = 0;
  std::size_t survivors = 0;
  std::size_t trials_run = 0;
  std::size_t nd_failures = 0;
  std::size_t factorisability_failures = 0;
  std::size_t derived_checks = 0;
  std::size_t derived_vacuous = 0;
  std::size_t derived_failures = 0;
  std::size_t exclusion_failures = 0;
  std::size_t multi_connection_survivors = 0;
  std::vector<std::string> counterexamples;
  std::vector<std::string> survivor_listing;

  bool holds() const {
    return nd_failures == 0 && factorisability_failures == 0 && derived_failures == 0 &&
           exclusion_failures == 0;
  }
};

// Bell scenario with parties a, b, c, ... each choosing among
// settings_per_party measurements (a0, a1, ...).
Scenario bell_scenario(int parties, int settings_per_party, int outcomes);

TheoremReport verify_theorem(const TheoremOptions& options);

enum class Verdict { kNoDisturbanceFails, kFineTuningRequired, kFactorisable };

struct CorollaryReport {
  Verdict verdict = Verdict::kFactorisable;
  NdReport nd;
  std::optional<FeasibilityCertificate> certificate;
  std::vector<std::pair<InequalityFunctional, InequalityEvaluation>> builtins;
  // When factorisable: the Bell DAG built from the weights, and a model
  // reproducing the phenomenon with the fewest edges this construction
  // finds (the product model when one exists, else the Bell DAG again).
  std::optional<CausalModel> bell_model;
  std::optional<FaithfulnessReport> bell_model_faithfulness;
  std::optional<CausalModel> model;
  std::optional<FaithfulnessReport> model_faithfulness;
};

// Deterministic-response model built from factorisable weights: a latent
// over the supporting strategies and A_i a function of (X_i, latent).
CausalModel bell_model_from_weights(const Phenomenon& p, const FeasibilityCertificate& cert);

// The latent-free product model when the phenomenon factorises per slot,
// otherwise bell_model_from_weights.
CausalModel model_from_certificate(const Phenomenon& p, const FeasibilityCertificate& cert);

CorollaryReport corollary_report(const Phenomenon& p);

}  // namespace ftcausal
