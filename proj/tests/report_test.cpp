#include <gtest/gtest.h>

#include "ftcausal/report.hpp"
#include "test_util.hpp"

namespace ftcausal {
namespace {

TEST(ReportTest, Sha256KnownVectors) {
  EXPECT_EQ(sha256_hex(""), "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  EXPECT_EQ(sha256_hex("abc"), "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST(ReportTest, SummaryBlockIsFenced) {
  Report r("demo");
  r.input("doc", "abc");
  r.param("seed", "7");
  r.line("body");
  r.summary("holds", "yes");
  const std::string s = r.str();
  const auto begin = s.find("#BEGIN SUMMARY\n");
  const auto end = s.find("#END SUMMARY\n");
  ASSERT_NE(begin, std::string::npos);
  ASSERT_NE(end, std::string::npos);
  const std::string block = s.substr(begin, end - begin);
  EXPECT_NE(block.find("command=demo\n"), std::string::npos);
  EXPECT_NE(block.find("version=" + std::string(version()) + "\n"), std::string::npos);
  EXPECT_NE(block.find("input.doc.sha256=ba7816bf"), std::string::npos);
  EXPECT_NE(block.find("seed=7\n"), std::string::npos);
  EXPECT_NE(block.find("holds=yes\n"), std::string::npos);
  EXPECT_EQ(s.substr(end), "#END SUMMARY\n");
}

TEST(ReportTest, TheoremReportIsDeterministic) {
  TheoremOptions o;
  o.trials = 1;
  o.seed = 7;
  auto render = [&] {
    Report r("verify-theorem");
    r.param("seed", std::to_string(o.seed));
    add_theorem(r, verify_theorem(o));
    return r.str();
  };
  EXPECT_EQ(render(), render());
}

TEST(ReportTest, CorollaryMentionsWitness) {
  const Phenomenon p = testutil::load_phenomenon("pr-box");
  Report r("corollary");
  add_corollary(r, p, corollary_report(p));
  const std::string s = r.str();
  EXPECT_NE(s.find("verdict=fine-tuning-required"), std::string::npos);
  EXPECT_NE(s.find("chsh_value=4/1"), std::string::npos);
  EXPECT_NE(s.find("chsh_bound=2/1"), std::string::npos);
}

}  // namespace
}  // namespace ftcausal
