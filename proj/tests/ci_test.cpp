#include <gtest/gtest.h>

#include "ftcausal/causal_model.hpp"
#include "ftcausal/ci.hpp"
#include "ftcausal/random.hpp"
#include "oracles.hpp"
#include "test_util.hpp"

namespace ftcausal {
namespace {

std::vector<std::string> names(int n) {
  std::vector<std::string> out;
  for (int i = 0; i < n; ++i) out.push_back("V" + std::to_string(i));
  return out;
}

// Random joint with small integer weights; zeros allowed unless positive.
JointTable random_joint(Rng& rng, int n, bool positive) {
  std::vector<int> cards;
  std::size_t size = 1;
  for (int i = 0; i < n; ++i) {
    cards.push_back(2 + static_cast<int>(rng.below(2)));
    size *= cards.back();
  }
  std::vector<Rational> p(size);
  Rational total = 0;
  for (auto& v : p) {
    v = positive ? 1 + static_cast<int>(rng.below(4)) : static_cast<int>(rng.below(3));
    total += v;
  }
  if (total == 0) p[0] = total = 1;
  for (auto& v : p) v /= total;
  return JointTable(names(n), cards, p);
}

TEST(CiStatementTest, CanonicalOrientation) {
  const CIStatement s = CIStatement::canonical(0b100, 0b011, 0);
  EXPECT_EQ(s.x, 0b011u);
  EXPECT_EQ(s.y, 0b100u);
  EXPECT_EQ(CIStatement::canonical(0b011, 0b100, 0b1000), CIStatement::canonical(0b100, 0b011, 0b1000));
}

TEST(CiSetTest, InsertDeduplicatesAndValidates) {
  CISet set(names(3));
  EXPECT_TRUE(set.insert(set.parse("V0 , V1 | V2")));
  EXPECT_FALSE(set.insert(set.parse("V1 , V0 | V2")));
  EXPECT_THROW(set.insert({0b1, 0b1, 0}), ValidationError);
  EXPECT_THROW(set.insert({0b1, 0b1000, 0}), ValidationError);
  EXPECT_EQ(set.format(set.statement(0)), "V0 , V1 | V2");
}

TEST(CiTest, IndependentVariablesAndChain) {
  // V0 -> V1 -> V2 with noisy copies.
  std::vector<Rational> p;
  const Rational q0[2] = {Rational(1, 3), Rational(2, 3)};
  const Rational stay(3, 4), flip(1, 4);
  for (int a = 0; a < 2; ++a)
    for (int b = 0; b < 2; ++b)
      for (int c = 0; c < 2; ++c) p.push_back(q0[a] * (a == b ? stay : flip) * (b == c ? stay : flip));
  const JointTable t(names(3), {2, 2, 2}, p);
  EXPECT_TRUE(ci_holds(t, {0b001, 0b100, 0b010}));
  EXPECT_FALSE(ci_holds(t, {0b001, 0b100, 0}));
  EXPECT_FALSE(ci_holds(t, {0b001, 0b010, 0b100}));
}

TEST(CiTest, EnumerationMatchesDivisionOracle) {
  Rng rng(5);
  for (int t = 0; t < 60; ++t) {
    const int n = 2 + static_cast<int>(rng.below(3));
    const JointTable joint = random_joint(rng, n, rng.coin());
    const CISet found = enumerate_ci(joint);
    const VarSet all = joint.all();
    std::size_t expected = 0;
    for (VarSet x = 1; x <= all; ++x) {
      for (VarSet y = 1; y <= all; ++y) {
        if (x & y) continue;
        for (VarSet z = 0; z <= all; ++z) {
          if ((z & (x | y)) || (z & ~all)) continue;
          if ((x & ~all) || (y & ~all)) continue;
          const CIStatement s = CIStatement::canonical(x, y, z);
          if (s.x != x) continue;  // count each unordered pair once
          const bool holds = oracle::ci_by_division(joint, x, y, z);
          expected += holds;
          EXPECT_EQ(found.contains(s), holds);
        }
      }
    }
    EXPECT_EQ(found.size(), expected);
  }
}

TEST(CiTest, EnumerationRespectsVariableCap) {
  Rng rng(1);
  const JointTable joint = random_joint(rng, 4, true);
  EXPECT_THROW(enumerate_ci(joint, 3), ResourceError);
}

TEST(GraphoidTest, ClosureDerivesTextbookConsequences) {
  CISet seed(names(4));
  seed.insert(seed.parse("V0 , V1 V2 | V3"));
  const CISet closed = graphoid_closure(seed, AxiomSelection::semigraphoid());
  EXPECT_TRUE(closed.contains(closed.parse("V0 , V1 | V3")));      // decomposition
  EXPECT_TRUE(closed.contains(closed.parse("V0 , V1 | V2 V3")));   // weak union
  EXPECT_TRUE(closed.contains(closed.parse("V0 , V2 | V1 V3")));
  EXPECT_FALSE(closed.contains(closed.parse("V0 , V3 |")));

  CISet pair(names(3));
  pair.insert(pair.parse("V0 , V1 |"));
  pair.insert(pair.parse("V0 , V2 | V1"));
  const CISet contracted = graphoid_closure(pair, AxiomSelection::semigraphoid());
  EXPECT_TRUE(contracted.contains(contracted.parse("V0 , V1 V2 |")));  // contraction

  CISet inter(names(3));
  inter.insert(inter.parse("V0 , V1 | V2"));
  inter.insert(inter.parse("V0 , V2 | V1"));
  EXPECT_FALSE(graphoid_closure(inter, AxiomSelection::semigraphoid())
                   .contains(inter.parse("V0 , V1 V2 |")));
  EXPECT_TRUE(graphoid_closure(inter, AxiomSelection::graphoid()).contains(inter.parse("V0 , V1 V2 |")));
}

TEST(GraphoidTest, EveryDerivationReplays) {
  CISet seed(names(5));
  seed.insert(seed.parse("V0 , V1 V2 | V3"));
  seed.insert(seed.parse("V0 , V4 | V1 V2 V3"));
  seed.insert(seed.parse("V1 , V2 | V0"));
  const CISet closed = graphoid_closure(seed, AxiomSelection::graphoid());
  EXPECT_GT(closed.size(), seed.size());
  for (std::size_t i = 0; i < closed.size(); ++i) {
    EXPECT_TRUE(derivation_replays(closed, i)) << closed.format(closed.statement(i));
    for (auto p : closed.derivation(i).premises) EXPECT_LT(p, i);
  }
}

TEST(GraphoidTest, ClosureOfEnumeratedCiAddsNothing) {
  Rng rng(21);
  for (int t = 0; t < 40; ++t) {
    const int n = 2 + static_cast<int>(rng.below(3));
    const JointTable any = random_joint(rng, n, false);
    const CISet ci = enumerate_ci(any);
    EXPECT_TRUE(graphoid_closure(ci, AxiomSelection::semigraphoid()).same_statements(ci));
    const JointTable positive = random_joint(rng, n, true);
    const CISet pci = enumerate_ci(positive);
    EXPECT_TRUE(graphoid_closure(pci, AxiomSelection::graphoid()).same_statements(pci));
  }
}

// Intersection fails without positivity: V0 = V1 = V2 copies.
TEST(GraphoidTest, IntersectionUnsoundWithoutPositivity) {
  const JointTable copies(names(3), {2, 2, 2},
                          {Rational(1, 2), 0, 0, 0, 0, 0, 0, Rational(1, 2)});
  const CISet ci = enumerate_ci(copies);
  EXPECT_TRUE(ci.contains(ci.parse("V0 , V1 | V2")));
  EXPECT_TRUE(ci.contains(ci.parse("V0 , V2 | V1")));
  EXPECT_FALSE(ci.contains(ci.parse("V0 , V1 V2 |")));
  EXPECT_FALSE(graphoid_closure(ci, AxiomSelection::graphoid()).same_statements(ci));
}

TEST(CiTextTest, ListingRoundTrips) {
  CISet seed(names(4));
  seed.insert(seed.parse("V0 , V1 V2 | V3"));
  const CISet closed = graphoid_closure(seed, AxiomSelection::semigraphoid());
  const CISet back = parse_ci_text(to_text(closed), names(4));
  ASSERT_EQ(back.size(), closed.size());
  for (std::size_t i = 0; i < closed.size(); ++i) {
    EXPECT_EQ(back.statement(i), closed.statement(i));
    EXPECT_EQ(back.derivation(i), closed.derivation(i));
  }
}

TEST(NdCiTest, NdStatementsHoldOnNdPhenomena) {
  const Phenomenon p = testutil::load_phenomenon("pr-box");
  const CISet nd = nd_as_ci(p);
  EXPECT_EQ(nd.size(), 2u);
  const JointTable joint = observed_joint(p);
  for (const auto& s : nd.statements()) EXPECT_TRUE(oracle::ci_by_division(joint, s.x, s.y, s.z));
  EXPECT_THROW(nd_as_ci(testutil::load_phenomenon("signalling-box")), DisturbanceError);
  EXPECT_EQ(nd_statements(3).size(), 6u);
}

}  // namespace
}  // namespace ftcausal
