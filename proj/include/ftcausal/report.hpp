#pragma once

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftcausal/causal_model.hpp"
#include "ftcausal/factorisability.hpp"
#include "ftcausal/faithfulness.hpp"
#include "ftcausal/scenario.hpp"
#include "ftcausal/theorem_lab.hpp"

namespace ftcausal {

std::string_view version();
std::string sha256_hex(std::string_view data);

// Plain-text report: a header naming the command, version, inputs and
// parameters, a free-form body, and a key=value summary fenced by
// "#BEGIN SUMMARY" / "#END SUMMARY". No timings, so identical runs give
// identical bytes.
class Report {
 public:
  explicit Report(std::string command);

  // Records the sha256 of an input document's bytes.
  void input(const std::string& name, std::string_view content);
  void param(const std::string& key, const std::string& value);
  void line(const std::string& text = "");
  void text(const std::string& block);  // appended verbatim, newline added if missing
  void summary(const std::string& key, const std::string& value);

  std::string str() const;

 private:
  std::string command_;
  std::vector<std::pair<std::string, std::string>> header_;
  std::vector<std::pair<std::string, std::string>> summary_;
  std::string body_;
};

std::string format_strategy(const Scenario& s, const DeterministicStrategy& lambda);
std::string format_functional(const Scenario& s, const InequalityFunctional& f);

void add_nd(Report& r, const PaddedScenario& s, const NdReport& nd);
void add_certificate(Report& r, const Phenomenon& p, const FeasibilityCertificate& cert);
void add_builtins(Report& r, const Phenomenon& p);
void add_faithfulness(Report& r, const CausalModel& m, int n, const FaithfulnessReport& f,
                      const std::string& key_prefix = "");
void add_lemma(Report& r, const LemmaReport& lemma);
void add_theorem(Report& r, const TheoremReport& t);
void add_corollary(Report& r, const Phenomenon& p, const CorollaryReport& c);

}  // namespace ftcausal
