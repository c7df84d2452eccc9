#include "ftcausal/report.hpp"

#include <openssl/evp.h>

#include <cstdio>

#include "ftcausal/ci.hpp"

#ifndef FTCAUSAL_VERSION
#define FTCAUSAL_VERSION "0.0.0"
#endif

namespace ftcausal {
namespace {

std::string yes_no(bool b) { return b ? "yes" : "no"; }
std::string num(std::size_t v) { return std::to_string(v); }

std::string verdict_name(Verdict v) {
  switch (v) {
    case Verdict::kNoDisturbanceFails:
      return "nd-fails";
    case Verdict::kFineTuningRequired:
      return "fine-tuning-required";
    case Verdict::kFactorisable:
      return "factorisable";
  }
  return "";
}

}  // namespace

std::string_view version() { return FTCAUSAL_VERSION; }

std::string sha256_hex(std::string_view data) {
  unsigned char digest[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), digest, &len, EVP_sha256(), nullptr) != 1) {
    throw Error("sha256 failed");
  }
  std::string out;
  char buf[3];
  for (unsigned int i = 0; i < len; ++i) {
    std::snprintf(buf, sizeof buf, "%02x", digest[i]);
    out += buf;
  }
  return out;
}

Report::Report(std::string command) : command_(std::move(command)) {}

void Report::input(const std::string& name, std::string_view content) {
  header_.emplace_back("input." + name + ".sha256", sha256_hex(content));
}

void Report::param(const std::string& key, const std::string& value) {
  header_.emplace_back(key, value);
}

void Report::line(const std::string& text) {
  body_ += text;
  body_ += '\n';
}

void Report::text(const std::string& block) {
  body_ += block;
  if (!block.empty() && block.back() != '\n') body_ += '\n';
}

void Report::summary(const std::string& key, const std::string& value) {
  summary_.emplace_back(key, value);
}

std::string Report::str() const {
  std::string out = "# ftcausal " + std::string(version()) + " " + command_ + "\n";
  for (const auto& [k, v] : header_) out += "# " + k + " = " + v + "\n";
  out += "\n" + body_ + "\n#BEGIN SUMMARY\n";
  out += "command=" + command_ + "\n";
  out += "version=" + std::string(version()) + "\n";
  for (const auto& [k, v] : header_) out += k + "=" + v + "\n";
  for (const auto& [k, v] : summary_) out += k + "=" + v + "\n";
  out += "#END SUMMARY\n";
  return out;
}

std::string format_strategy(const Scenario& s, const DeterministicStrategy& lambda) {
  std::string out;
  for (std::size_t m = 0; m < lambda.size(); ++m) {
    if (m) out += ' ';
    out += s.measurements()[m] + "=" + s.outcomes()[lambda[m]];
  }
  return out;
}

std::string format_functional(const Scenario& s, const InequalityFunctional& f) {
  std::string out;
  for (const auto& t : f.terms) {
    std::string outs, ms;
    for (std::size_t k = 0; k < t.measurements.size(); ++k) {
      if (k) {
        outs += ' ';
        ms += ' ';
      }
      outs += s.outcomes()[t.outcomes[k]];
      ms += s.measurements()[t.measurements[k]];
    }
    const std::string c = to_display_string(t.coefficient);
    out += "  " + std::string(t.coefficient >= 0 ? "+" : "") + c + " P(" + outs + " | " + ms + ")\n";
  }
  out += "  " + std::string(f.sense == BoundSense::kUpper ? "<= " : ">= ") +
         to_display_string(f.bound) + "\n";
  return out;
}

void add_nd(Report& r, const PaddedScenario& s, const NdReport& nd) {
  r.line("no-disturbance: " + std::string(nd.holds() ? "holds" : "violated"));
  for (const auto& v : nd.violations) r.line("  " + describe(s, v));
  r.summary("nd_holds", yes_no(nd.holds()));
  r.summary("nd_violations", num(nd.violations.size()));
}

void add_certificate(Report& r, const Phenomenon& p, const FeasibilityCertificate& cert) {
  const Scenario& s = p.scenario().base();
  r.line("factorisable: " + yes_no(cert.feasible));
  r.line("deterministic strategies: " + num(cert.strategy_count));
  if (!cert.nd_checked) r.line("note: no-disturbance not required (polytope membership only)");
  if (cert.feasible) {
    r.line("weights (" + num(cert.weights.size()) + " strategies in support):");
    for (const auto& w : cert.weights) {
      r.line("  #" + num(w.index) + " [" + format_strategy(s, w.strategy) + "] " +
             to_display_string(w.weight));
    }
  } else if (cert.witness) {
    r.line("witness " + cert.witness->name + ":");
    r.text(format_functional(s, *cert.witness));
    r.line("witness value " + to_display_string(cert.witness_value) + " violates bound " +
           to_display_string(cert.witness->bound));
    r.summary("witness_value", to_fraction_string(cert.witness_value));
    r.summary("witness_bound", to_fraction_string(cert.witness->bound));
  }
  r.summary("factorisable", yes_no(cert.feasible));
  r.summary("strategies", num(cert.strategy_count));
  if (cert.feasible) r.summary("support", num(cert.weights.size()));
}

void add_builtins(Report& r, const Phenomenon& p) {
  for (const auto& f : builtin_functionals(p.scenario().base())) {
    const auto e = evaluate_inequality(p, f);
    r.line(f.name + ": value " + to_display_string(e.value) +
           (f.sense == BoundSense::kUpper ? ", classical maximum " : ", classical minimum ") +
           to_display_string(e.bound) + (e.violated ? " (violated)" : " (satisfied)"));
    r.summary(f.name + "_value", to_fraction_string(e.value));
    r.summary(f.name + "_bound", to_fraction_string(e.bound));
    r.summary(f.name + "_violated", yes_no(e.violated));
  }
}

void add_faithfulness(Report& r, const CausalModel& m, int n, const FaithfulnessReport& f,
                      const std::string& key_prefix) {
  const CISet names(observed_universe(n));
  const Dag& g = m.graph();
  r.line("reproduces phenomenon: yes");
  r.line("observed CI statements checked: " + num(f.checked_count) +
         (f.uniform_settings ? " (uniform context weights)" : ""));
  r.line("faithful: " + yes_no(f.faithful()));
  for (const auto& w : f.witnesses) {
    r.line("  witness (" + names.format(w.statement) + ") holds but is d-connected: " +
           format_path(g, w.path));
  }
  r.summary(key_prefix + "faithful", yes_no(f.faithful()));
  r.summary(key_prefix + "ci_checked", num(f.checked_count));
  r.summary(key_prefix + "witnesses", num(f.witnesses.size()));
}

void add_lemma(Report& r, const LemmaReport& lemma) {
  r.line("chained graphs A - B - C - D, set sizes 1.." + std::to_string(lemma.options.max_set_size) +
         (lemma.options.within_set_edges ? ", within-set edges" : ", no within-set edges"));
  r.line("shapes: " + num(lemma.shapes));
  r.line("graphs: " + num(lemma.graphs));
  r.line("premise (A _||_ C | B) true: " + num(lemma.premise_true));
  r.line("premise false: " + num(lemma.premise_false));
  r.line("counterexamples: " + num(lemma.counterexamples.size()));
  for (const auto& c : lemma.counterexamples) r.text(c);
  r.summary("shapes", num(lemma.shapes));
  r.summary("graphs", num(lemma.graphs));
  r.summary("premise_true", num(lemma.premise_true));
  r.summary("counterexamples", num(lemma.counterexamples.size()));
  r.summary("holds", yes_no(lemma.holds()));
}

void add_theorem(Report& r, const TheoremReport& t) {
  const auto& b = t.options.budget;
  r.line("bell scenario: " + std::to_string(t.options.n) + " parties, " +
         std::to_string(t.options.settings_per_party) + " settings, " +
         std::to_string(t.options.outcomes) + " outcomes");
  r.line("budget: up to " + std::to_string(b.max_latents) + " latents of cardinality " +
         std::to_string(b.latent_cardinality) + ", children subsets of size 2.." +
         std::to_string(b.max_subset_size) +
         (b.latents_over_outcomes_only ? " over outcomes only" : "") +
         (b.max_observable_edges >= 0
              ? ", observable graphs with at most " + std::to_string(b.max_observable_edges) + " edges"
              : ""));
  r.line("this is a bounded sweep; no claim is made beyond the budget");
  r.line("candidates: " + num(t.candidates));
  r.line("survivors of the no-disturbance d-separation filter: " + num(t.survivors));
  r.line("random models: " + num(t.trials_run));
  r.line("no-disturbance failures: " + num(t.nd_failures));
  r.line("factorisability failures: " + num(t.factorisability_failures));
  r.line("derived d-separations checked: " + num(t.derived_checks) + " (" +
         num(t.derived_vacuous) + " vacuous), failures: " + num(t.derived_failures));
  r.line("edge exclusion failures: " + num(t.exclusion_failures));
  r.line("survivors with a multiply connected outcome: " + num(t.multi_connection_survivors));
  for (const auto& c : t.counterexamples) r.text(c);
  if (!t.survivor_listing.empty()) {
    r.line();
    r.line("survivors:");
    for (const auto& s : t.survivor_listing) r.text(s);
  }
  r.summary("candidates", num(t.candidates));
  r.summary("survivors", num(t.survivors));
  r.summary("trials_run", num(t.trials_run));
  r.summary("nd_failures", num(t.nd_failures));
  r.summary("factorisability_failures", num(t.factorisability_failures));
  r.summary("derived_checks", num(t.derived_checks));
  r.summary("derived_failures", num(t.derived_failures));
  r.summary("exclusion_failures", num(t.exclusion_failures));
  r.summary("multi_connection_survivors", num(t.multi_connection_survivors));
  r.summary("counterexamples", num(t.counterexamples.size()));
  r.summary("holds", yes_no(t.holds()));
}

void add_corollary(Report& r, const Phenomenon& p, const CorollaryReport& c) {
  add_nd(r, p.scenario(), c.nd);
  if (c.certificate) add_certificate(r, p, *c.certificate);
  if (!c.builtins.empty()) add_builtins(r, p);
  r.line();
  switch (c.verdict) {
    case Verdict::kNoDisturbanceFails:
      r.line("verdict: no-disturbance fails, the theorem does not apply");
      break;
    case Verdict::kFineTuningRequired:
      r.line("verdict: fine-tuning required; no faithful classical causal model exists");
      r.line("the witness above is a violated Bell-KS inequality");
      break;
    case Verdict::kFactorisable: {
      const int n = p.scenario().n();
      r.line("verdict: factorisable; the theorem's premise fails");
      r.line();
      r.line("Bell DAG from the weights (latent L over the support):");
      r.text(describe(*c.bell_model));
      add_faithfulness(r, *c.bell_model, n, *c.bell_model_faithfulness, "bell_model_");
      if (!(*c.model == *c.bell_model)) {
        r.line();
        r.line("product model (no latent needed):");
        r.text(describe(*c.model));
        add_faithfulness(r, *c.model, n, *c.model_faithfulness, "product_model_");
      }
      r.line();
      r.line(c.model_faithfulness->faithful()
                 ? "a faithful classical causal model exists (shown above)"
                 : "the constructed models reproduce the phenomenon but are not faithful");
      r.summary("faithful_model_found", c.model_faithfulness->faithful() ? "yes" : "no");
      break;
    }
  }
  r.summary("verdict", verdict_name(c.verdict));
}

}  // namespace ftcausal
