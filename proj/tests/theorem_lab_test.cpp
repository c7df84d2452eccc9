#include <gtest/gtest.h>

#include "ftcausal/faithfulness.hpp"
#include "ftcausal/theorem_lab.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace ftcausal {
namespace {

// Latent patterns: sets of at most `latents` distinct node subsets with
// 2..max_size members, out of `nodes` nodes.
std::size_t pattern_count(int nodes, int max_size, int latents) {
  std::size_t subsets = 0;
  for (int k = 2; k <= max_size; ++k) subsets += oracle::binomial(nodes, k);
  std::size_t total = 0;
  for (int l = 0; l <= latents; ++l) total += oracle::binomial(static_cast<int>(subsets), l);
  return total;
}

TEST(CandidateTest, CountsMatchIndependentCombinatorics) {
  EXPECT_EQ(oracle::labeled_dag_count(4), 543);
  EXPECT_EQ(oracle::labeled_dag_count(6), 3781503);
  const PaddedScenario s = pad_scenario(bell_scenario(2, 2, 2));
  const CandidateClass c = enumerate_candidates(s);
  EXPECT_EQ(c.latent_patterns().size(), pattern_count(4, 4, 2));
  EXPECT_EQ(c.latent_patterns().size(), 67u);
  EXPECT_EQ(c.size(), 543u * 67u);
  std::size_t observable = 0;
  c.for_each_observable_graph([&](const std::vector<NodeSet>&) { ++observable; });
  EXPECT_EQ(observable, 543u);

  CandidateBudget outcomes_only;
  outcomes_only.latents_over_outcomes_only = true;
  EXPECT_EQ(enumerate_candidates(s, outcomes_only).latent_patterns().size(), pattern_count(2, 2, 2));
}

TEST(CandidateTest, ThreePartyObservableGraphs) {
  const PaddedScenario s = pad_scenario(bell_scenario(3, 2, 2));
  CandidateBudget b;
  b.max_latents = 0;
  EXPECT_EQ(enumerate_candidates(s, b).size(), static_cast<std::size_t>(oracle::labeled_dag_count(6)));
}

TEST(CandidateTest, CapIsEnforced) {
  const PaddedScenario s = pad_scenario(bell_scenario(2, 2, 2));
  CandidateBudget b;
  b.candidate_cap = 1000;
  EXPECT_THROW(enumerate_candidates(s, b), ResourceError);
}

TEST(CandidateTest, LatentsHaveNoParentsAndCandidatesAreAcyclic) {
  const PaddedScenario s = pad_scenario(bell_scenario(2, 2, 2));
  CandidateBudget b;
  b.max_latents = 1;
  std::size_t seen = 0;
  enumerate_candidates(s, b).for_each([&](const Dag& g) {
    ++seen;
    for (int v : members(g.with_role(NodeRole::kLatent))) EXPECT_EQ(g.parents(v), 0u);
    EXPECT_EQ(g.topological_order().size(), static_cast<std::size_t>(g.size()));
  });
  EXPECT_EQ(seen, 543u * 12u);
}

// The pruned filter against obligations checked one candidate at a time
// with the moral-graph oracle.
TEST(FilterTest, MatchesUnprunedOracle) {
  const PaddedScenario s = pad_scenario(bell_scenario(2, 2, 2));
  const CandidateClass c = enumerate_candidates(s);
  std::size_t expected = 0;
  c.for_each([&](const Dag& g) {
    std::vector<NodeSet> parents;
    for (int v = 0; v < g.size(); ++v) parents.push_back(g.parents(v));
    const int a1 = *g.observable(NodeRole::kOutcome, 0), a2 = *g.observable(NodeRole::kOutcome, 1);
    const int x1 = *g.observable(NodeRole::kSetting, 0), x2 = *g.observable(NodeRole::kSetting, 1);
    const bool ok = oracle::dsep_moral(parents, node_bit(a1), node_bit(x2), node_bit(x1)) &&
                    oracle::dsep_moral(parents, node_bit(a2), node_bit(x1), node_bit(x2));
    EXPECT_EQ(satisfies_nd_obligations(s, g), ok);
    expected += ok;
  });
  const auto survivors = filter_no_disturbance_dsep(c);
  EXPECT_EQ(survivors.size(), expected);
  EXPECT_EQ(survivors.size(), 176u);
}

TEST(FilterTest, SurvivorsSatisfyEdgeExclusions) {
  const PaddedScenario s = pad_scenario(bell_scenario(2, 2, 2));
  for (const Dag& g : filter_no_disturbance_dsep(enumerate_candidates(s))) {
    const Partition part = compute_partition(g);
    const ExclusionCheck ex = check_exclusions(g, part);
    EXPECT_TRUE(ex.holds());
    for (int i = 0; i < 2; ++i) {
      const int a = *g.observable(NodeRole::kOutcome, i);
      const int x = *g.observable(NodeRole::kSetting, 1 - i);
      EXPECT_FALSE(g.has_edge(a, x) || g.has_edge(x, a));
    }
    for (const auto& c : verify_derived_dseps(g, part)) EXPECT_TRUE(c.holds) << c.label;
  }
}

TEST(PartitionTest, BellDag) {
  const Dag g = testutil::load_model("bell-dag").model.graph();
  const Partition p = compute_partition(g);
  EXPECT_EQ(p.c_part, g.ids_to_set({"A1", "A2"}));
  EXPECT_EQ(p.z_part, g.ids_to_set({"X1", "X2"}));
  EXPECT_EQ(p.b_part, 0u);
  EXPECT_EQ(p.y_part, 0u);
  EXPECT_EQ(p.lambda_part, g.ids_to_set({"L"}));
  EXPECT_EQ(p.multi_connected, 0u);
}

TEST(PartitionTest, OutcomeWithoutSettingConnectionIsInB) {
  const Dag g({{"A1", NodeRole::kOutcome, 0, 2}, {"A2", NodeRole::kOutcome, 1, 2},
               {"X1", NodeRole::kSetting, 0, 2}, {"X2", NodeRole::kSetting, 1, 2},
               {"L", NodeRole::kLatent, -1, 2}, {"W", NodeRole::kLatent, -1, 2}},
              {{"X1", "A1"}, {"L", "A1"}, {"L", "A2"}, {"W", "X2"}});
  EXPECT_TRUE(causally_connected(g, g.index_of("A1"), g.index_of("X1")));
  EXPECT_FALSE(causally_connected(g, g.index_of("A2"), g.index_of("X1")));
  const Partition p = compute_partition(g);
  EXPECT_EQ(p.b_part, g.ids_to_set({"A2"}));
  EXPECT_EQ(p.c_part, g.ids_to_set({"A1"}));
  EXPECT_EQ(p.z_part, g.ids_to_set({"X1"}));
  EXPECT_EQ(p.y_part, g.ids_to_set({"X2"}));
  EXPECT_EQ(p.omega_part, g.ids_to_set({"W"}));
  EXPECT_EQ(p.lambda_part, g.ids_to_set({"L"}));
}

TEST(LemmaTest, SingletonSetsAgainstOracle) {
  LemmaOptions o;
  o.max_set_size = 1;
  const LemmaReport r = verify_lemma_chain(o);
  // A - B - C - D path with each of three edges absent or oriented either way.
  EXPECT_EQ(r.graphs, 27u);
  std::size_t premise = 0;
  for (int e = 0; e < 27; ++e) {
    std::vector<NodeSet> parents(4, 0);
    int code = e;
    for (int k = 0; k < 3; ++k, code /= 3) {
      if (code % 3 == 1) parents[k + 1] |= node_bit(k);
      if (code % 3 == 2) parents[k] |= node_bit(k + 1);
    }
    premise += oracle::dsep_moral(parents, node_bit(0), node_bit(2), node_bit(1));
  }
  EXPECT_EQ(r.premise_true, premise);
  EXPECT_TRUE(r.holds());
}

TEST(LemmaTest, SizeTwoWithoutWithinSetEdges) {
  LemmaOptions o;
  o.within_set_edges = false;
  const LemmaReport r = verify_lemma_chain(o);
  EXPECT_EQ(r.shapes, 16u);
  EXPECT_EQ(r.graphs, 549040u);
  EXPECT_TRUE(r.holds());
}

TEST(LemmaTest, CapIsEnforced) {
  LemmaOptions o;
  o.graph_cap = 100;
  EXPECT_THROW(verify_lemma_chain(o), ResourceError);
}

TEST(TheoremTest, SmallSweepHolds) {
  TheoremOptions o;
  o.trials = 2;
  o.seed = 3;
  const TheoremReport r = verify_theorem(o);
  EXPECT_EQ(r.candidates, 36381u);
  EXPECT_EQ(r.survivors, 176u);
  EXPECT_EQ(r.trials_run, 352u);
  EXPECT_TRUE(r.holds());
  EXPECT_TRUE(r.counterexamples.empty());
}

TEST(TheoremTest, ThreePartyRestrictedBudget) {
  TheoremOptions o;
  o.n = 3;
  o.trials = 1;
  o.budget.max_latents = 1;
  o.budget.max_subset_size = 3;
  o.budget.latents_over_outcomes_only = true;
  o.budget.max_observable_edges = 2;
  const TheoremReport r = verify_theorem(o);
  EXPECT_GT(r.survivors, 0u);
  EXPECT_TRUE(r.holds());
}

TEST(CorollaryTest, CorpusVerdicts) {
  const auto pr = corollary_report(testutil::load_phenomenon("pr-box"));
  EXPECT_EQ(pr.verdict, Verdict::kFineTuningRequired);
  ASSERT_TRUE(pr.certificate && pr.certificate->witness);
  EXPECT_EQ(pr.certificate->witness_value, 4);
  EXPECT_EQ(pr.certificate->witness->bound, 2);

  const auto p = testutil::load_phenomenon("uniform-noise");
  const auto noise = corollary_report(p);
  EXPECT_EQ(noise.verdict, Verdict::kFactorisable);
  ASSERT_TRUE(noise.bell_model && noise.model);
  EXPECT_NO_THROW(check_reproduces(*noise.bell_model, p));
  EXPECT_NO_THROW(check_reproduces(*noise.model, p));
  EXPECT_TRUE(noise.model_faithfulness->faithful());

  const auto sig = corollary_report(testutil::load_phenomenon("signalling-box"));
  EXPECT_EQ(sig.verdict, Verdict::kNoDisturbanceFails);
  EXPECT_FALSE(sig.nd.holds());
  EXPECT_FALSE(sig.certificate.has_value());
}

TEST(CorollaryTest, ModelFromWeightsReproducesCorrelatedPhenomenon) {
  const auto p = testutil::load_phenomenon("bell-dag-phenomenon");
  const auto cert = is_factorisable(p);
  ASSERT_TRUE(cert.feasible);
  const CausalModel m = model_from_certificate(p, cert);
  EXPECT_NO_THROW(check_reproduces(m, p));
  EXPECT_EQ(m.graph().with_role(NodeRole::kLatent) != 0, true);
}

}  // namespace
}  // namespace ftcausal
