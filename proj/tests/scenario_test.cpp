#include <gtest/gtest.h>

#include "ftcausal/scenario.hpp"
#include "ftcausal/theorem_lab.hpp"
#include "test_util.hpp"

namespace ftcausal {
namespace {

TEST(ScenarioTest, RejectsMalformedScenarios) {
  EXPECT_THROW(Scenario({"a", "a"}, {"0", "1"}, {{"a"}}), ValidationError);
  EXPECT_THROW(Scenario({"a"}, {"0", "1"}, {{"b"}}), ValidationError);
  EXPECT_THROW(Scenario({"a", "b"}, {}, {{"a", "b"}}), ValidationError);
  EXPECT_THROW(Scenario({"#x"}, {"0"}, {{"#x"}}), ValidationError);
}

TEST(ScenarioTest, BellPaddingPutsPartiesInSlots) {
  const PaddedScenario s = pad_scenario(bell_scenario(2, 2, 2));
  EXPECT_EQ(s.n(), 2);
  EXPECT_EQ(s.row_size(), 4u);
  EXPECT_TRUE(s.measurements_have_fixed_slots());
  for (int c = 0; c < s.num_contexts(); ++c) {
    const auto slots = s.slots(c);
    EXPECT_EQ(s.base().measurements()[slots[0]][0], 'a');
    EXPECT_EQ(s.base().measurements()[slots[1]][0], 'b');
  }
}

TEST(ScenarioTest, PaddingFillsShortContextsWithTrivialMeasurement) {
  const Scenario base({"a", "b", "c"}, {"0", "1"}, {{"a", "b"}, {"c"}});
  const PaddedScenario s = pad_scenario(base);
  EXPECT_EQ(s.n(), 2);
  int trivial = 0;
  for (int c = 0; c < s.num_contexts(); ++c) {
    for (int m : s.slots(c)) trivial += m == kTrivialMeasurement;
  }
  EXPECT_EQ(trivial, 1);
}

TEST(ScenarioTest, ContextRowsRoundTripThroughPadding) {
  const Phenomenon p = testutil::load_phenomenon("tsirelson-rational");
  std::vector<std::vector<Rational>> rows;
  for (int c = 0; c < p.scenario().num_contexts(); ++c) rows.push_back(p.context_row(c));
  EXPECT_EQ(Phenomenon::from_context_rows(p.scenario(), rows), p);
}

TEST(ScenarioTest, PhenomenonRowsMustBeDistributions) {
  const PaddedScenario s = pad_scenario(bell_scenario(2, 2, 2));
  std::vector<std::vector<Rational>> rows(4, std::vector<Rational>(4, Rational(1, 4)));
  rows[2][0] = Rational(1, 2);
  EXPECT_THROW(Phenomenon(s, rows), ValidationError);
  rows[2][0] = Rational(-1, 4);
  rows[2][1] = Rational(3, 4);
  EXPECT_THROW(Phenomenon(s, rows), ValidationError);
}

TEST(NoDisturbanceTest, PrBoxMarginalsAreAllOneHalf) {
  const Phenomenon p = testutil::load_phenomenon("pr-box");
  // Oracle: sum the rows by hand.
  for (int c = 0; c < p.scenario().num_contexts(); ++c) {
    const auto& row = p.row(c);
    EXPECT_EQ(row[0] + row[1], Rational(1, 2));
    EXPECT_EQ(row[0] + row[2], Rational(1, 2));
  }
  EXPECT_TRUE(check_no_disturbance(p).holds());
}

TEST(NoDisturbanceTest, SignallingBoxViolationOnFirstSlot) {
  const Phenomenon p = testutil::load_phenomenon("signalling-box");
  const NdReport nd = check_no_disturbance(p);
  ASSERT_FALSE(nd.holds());
  bool found = false;
  for (const auto& v : nd.violations) {
    EXPECT_NE(v.lhs, v.rhs);
    if (v.gamma == IndexSubset::from_one_based({1})) {
      const auto& ms = p.scenario().base().measurements();
      if (ms[v.measurements[0]] == "a0" && v.outcomes[0] == 0) {
        found = true;
        EXPECT_EQ(v.lhs + v.rhs, 1);
      }
    }
    // Bob's marginals are uniform in every context.
    EXPECT_EQ(v.measurements.size(), 1u);
    EXPECT_EQ(p.scenario().base().measurements()[v.measurements[0]][0], 'a');
  }
  EXPECT_TRUE(found);
}

TEST(NoDisturbanceTest, CorpusPhenomenaThatShouldBeNd) {
  for (const char* name : {"pr-box", "tsirelson-rational", "ghz-mermin", "kcbs-maximal",
                           "uniform-noise", "bell-dag-phenomenon"}) {
    EXPECT_TRUE(check_no_disturbance(testutil::load_phenomenon(name)).holds()) << name;
  }
}

TEST(NoDisturbanceTest, DetectsDisturbanceInContextualityScenario) {
  const Scenario base({"a", "b", "c"}, {"0", "1"}, {{"a", "b"}, {"a", "c"}});
  const PaddedScenario s = pad_scenario(base);
  const std::vector<std::vector<Rational>> rows = {
      {Rational(1, 2), 0, 0, Rational(1, 2)},
      {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}};
  EXPECT_TRUE(check_no_disturbance(Phenomenon::from_context_rows(s, rows)).holds());
  const std::vector<std::vector<Rational>> bad = {
      {1, 0, 0, 0}, {Rational(1, 4), Rational(1, 4), Rational(1, 4), Rational(1, 4)}};
  const NdReport nd = check_no_disturbance(Phenomenon::from_context_rows(s, bad));
  EXPECT_EQ(nd.violations.size(), 2u);
}

}  // namespace
}  // namespace ftcausal
