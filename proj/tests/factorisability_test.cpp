#include <gtest/gtest.h>

#include "ftcausal/factorisability.hpp"
#include "ftcausal/random.hpp"
#include "ftcausal/theorem_lab.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace ftcausal {
namespace {

// Correlator-form value of a +/-1 assignment, computed without the library:
// `terms` lists (sign, measurement ids).
int correlator_sum(const std::vector<std::pair<int, std::vector<int>>>& terms, std::uint32_t bits) {
  int total = 0;
  for (const auto& [sign, ms] : terms) {
    int prod = sign;
    for (int m : ms) prod *= ((bits >> m) & 1) ? -1 : 1;
    total += prod;
  }
  return total;
}

int brute_max(int measurements, const std::vector<std::pair<int, std::vector<int>>>& terms, bool max) {
  int best = max ? -1000 : 1000;
  for (std::uint32_t b = 0; b < (1u << measurements); ++b) {
    const int v = correlator_sum(terms, b);
    best = max ? std::max(best, v) : std::min(best, v);
  }
  return best;
}

const InequalityFunctional& find(const std::vector<InequalityFunctional>& fs, const std::string& name) {
  for (const auto& f : fs) {
    if (f.name == name) return f;
  }
  throw std::runtime_error("missing functional " + name);
}

TEST(StrategyTest, CountAndOrder) {
  const Scenario s = bell_scenario(2, 2, 2);
  EXPECT_EQ(strategy_count(s), 16u);
  EXPECT_EQ(strategy_at(s, 0), (DeterministicStrategy{0, 0, 0, 0}));
  EXPECT_EQ(strategy_at(s, 1), (DeterministicStrategy{0, 0, 0, 1}));
  EXPECT_EQ(strategy_at(s, 8), (DeterministicStrategy{1, 0, 0, 0}));
  EXPECT_THROW(strategy_count(s, 15), ResourceError);
  EXPECT_EQ(strategy_count(bell_scenario(3, 2, 2)), 64u);
}

TEST(FunctionalTest, BuiltinBoundsMatchBruteForce) {
  // a0 a1 b0 b1 = 0 1 2 3
  const int chsh = brute_max(4, {{1, {0, 2}}, {1, {0, 3}}, {1, {1, 2}}, {-1, {1, 3}}}, true);
  // a0 a1 b0 b1 c0 c1 = 0..5
  const int mermin = brute_max(6, {{1, {0, 2, 4}}, {-1, {0, 3, 5}}, {-1, {1, 2, 5}}, {-1, {1, 3, 4}}}, true);
  const int kcbs = brute_max(5, {{1, {0, 1}}, {1, {1, 2}}, {1, {2, 3}}, {1, {3, 4}}, {1, {4, 0}}}, false);
  EXPECT_EQ(chsh, 2);
  EXPECT_EQ(mermin, 2);
  EXPECT_EQ(kcbs, -3);
  EXPECT_EQ(find(builtin_functionals(bell_scenario(2, 2, 2)), "chsh").bound, chsh);
  EXPECT_EQ(find(builtin_functionals(bell_scenario(3, 2, 2)), "mermin3").bound, mermin);
  EXPECT_EQ(find(builtin_functionals(oracle::cycle_scenario(5)), "kcbs").bound, kcbs);
  EXPECT_TRUE(builtin_functionals(bell_scenario(2, 2, 3)).empty());
}

TEST(FunctionalTest, CorpusValues) {
  const auto pr = testutil::load_phenomenon("pr-box");
  const auto e = evaluate_inequality(pr, find(builtin_functionals(pr.scenario().base()), "chsh"));
  EXPECT_EQ(e.value, 4);
  EXPECT_TRUE(e.violated);
  const auto ts = testutil::load_phenomenon("tsirelson-rational");
  const auto et = evaluate_inequality(ts, find(builtin_functionals(ts.scenario().base()), "chsh"));
  EXPECT_EQ(et.value, Rational(27, 10));
  const auto ghz = testutil::load_phenomenon("ghz-mermin");
  EXPECT_EQ(evaluate_inequality(ghz, find(builtin_functionals(ghz.scenario().base()), "mermin3")).value, 4);
  const auto kcbs = testutil::load_phenomenon("kcbs-maximal");
  const auto ek = evaluate_inequality(kcbs, find(builtin_functionals(kcbs.scenario().base()), "kcbs"));
  EXPECT_EQ(ek.value, -5);
  EXPECT_EQ(ek.bound, -3);
  EXPECT_TRUE(ek.violated);
}

TEST(FunctionalTest, RejectsTermsOutsideContexts) {
  const Scenario s = bell_scenario(2, 2, 2);
  InequalityFunctional f{"bad", BoundSense::kUpper, {{{0, 1}, {0, 0}, 1}}, 0};  // a0 a1 not a context
  EXPECT_THROW(validate_functional(s, f), ValidationError);
}

TEST(FactorisabilityTest, CorpusVerdicts) {
  for (const char* name : {"pr-box", "tsirelson-rational", "ghz-mermin", "kcbs-maximal"}) {
    const auto p = testutil::load_phenomenon(name);
    const auto cert = is_factorisable(p);
    EXPECT_FALSE(cert.feasible) << name;
    ASSERT_TRUE(cert.witness.has_value());
    EXPECT_TRUE(cert.witness_value > cert.witness->bound) << name;
    EXPECT_TRUE(certificate_verifies(p, cert));
  }
  for (const char* name : {"uniform-noise", "bell-dag-phenomenon"}) {
    const auto p = testutil::load_phenomenon(name);
    const auto cert = is_factorisable(p);
    EXPECT_TRUE(cert.feasible) << name;
    Rational total = 0;
    for (const auto& w : cert.weights) total += w.weight;
    EXPECT_EQ(total, 1);
    EXPECT_TRUE(certificate_verifies(p, cert));
  }
}

TEST(FactorisabilityTest, PrBoxWitnessIsChshShaped) {
  const auto p = testutil::load_phenomenon("pr-box");
  const auto cert = is_factorisable(p);
  EXPECT_EQ(cert.witness_value, 4);
  EXPECT_EQ(cert.witness->bound, 2);
}

TEST(FactorisabilityTest, DisturbingInputNeedsOverride) {
  const auto p = testutil::load_phenomenon("signalling-box");
  EXPECT_THROW(is_factorisable(p), DisturbanceError);
  FactorisabilityOptions o;
  o.allow_disturbing = true;
  const auto cert = is_factorisable(p, o);
  EXPECT_FALSE(cert.nd_checked);
  EXPECT_FALSE(cert.feasible);
  EXPECT_TRUE(certificate_verifies(p, cert));
}

TEST(FactorisabilityTest, TamperedCertificateFailsVerification) {
  const auto p = testutil::load_phenomenon("uniform-noise");
  auto cert = is_factorisable(p);
  cert.weights.front().weight += Rational(1, 8);
  EXPECT_FALSE(certificate_verifies(p, cert));
  const auto pr = testutil::load_phenomenon("pr-box");
  auto bad = is_factorisable(pr);
  bad.witness->bound = 5;
  EXPECT_FALSE(certificate_verifies(pr, bad));
}

// Cycle scenarios against the correlator characterisation of the
// noncontextual polytope.
TEST(FactorisabilityTest, AgreesWithCycleOracle) {
  Rng rng(2024);
  int feasible = 0, infeasible = 0;
  for (int t = 0; t < 150; ++t) {
    const int n = 3 + static_cast<int>(rng.below(3));
    std::vector<Rational> a(n), e(n);
    bool ok = false;
    while (!ok) {
      for (auto& v : a) v = rng.below(3) ? Rational(0) : Rational(static_cast<int>(rng.below(5)) - 2) / 4;
      for (auto& v : e) v = Rational(static_cast<int>(rng.below(17)) - 8) / 8;
      ok = true;
      for (const auto& row : oracle::cycle_rows(a, e)) {
        for (const auto& q : row) ok = ok && q >= 0;
      }
    }
    const Phenomenon p = Phenomenon::from_context_rows(pad_scenario(oracle::cycle_scenario(n)),
                                                       oracle::cycle_rows(a, e));
    const bool expected = oracle::cycle_noncontextual(e);
    const auto cert = is_factorisable(p);
    EXPECT_EQ(cert.feasible, expected) << "n=" << n << " trial " << t;
    EXPECT_TRUE(certificate_verifies(p, cert));
    (expected ? feasible : infeasible)++;
  }
  EXPECT_GT(feasible, 20);
  EXPECT_GT(infeasible, 20);
}

}  // namespace
}  // namespace ftcausal
