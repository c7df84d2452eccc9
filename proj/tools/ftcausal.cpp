// ftcausal command-line tool.
//
// Exit codes: 0 property holds, 1 property fails (certificate printed),
// 2 input error, 3 precondition error.

#include <cstdio>
#include <iostream>
#include <string>

#include "CLI11.hpp"
#include "ftcausal/ci.hpp"
#include "ftcausal/document.hpp"
#include "ftcausal/faithfulness.hpp"
#include "ftcausal/report.hpp"
#include "ftcausal/theorem_lab.hpp"

namespace ftcausal {
namespace {

constexpr int kHolds = 0;
constexpr int kFails = 1;
constexpr int kInputError = 2;
constexpr int kPreconditionError = 3;

template <typename T>
std::pair<std::string, T> load_as(const std::string& path, DocumentKind kind) {
  std::string bytes = read_file(path);
  try {
    return {bytes, parse_as<T>(bytes, kind)};
  } catch (const ParseError& e) {
    throw ParseError(path + ":" + e.location(), e.detail());
  }
}

// Written in one call so a report is never half-emitted.
int emit(const Report& r, int code) {
  const std::string s = r.str();
  std::fwrite(s.data(), 1, s.size(), stdout);
  std::fflush(stdout);
  return code;
}

int cmd_check_nd(const std::string& file) {
  auto [bytes, p] = load_as<Phenomenon>(file, DocumentKind::kPhenomenon);
  Report r("check-nd");
  r.input("phenomenon", bytes);
  const NdReport nd = check_no_disturbance(p);
  add_nd(r, p.scenario(), nd);
  return emit(r, nd.holds() ? kHolds : kFails);
}

int cmd_factorisable(const std::string& file, bool allow_disturbing, std::size_t cap) {
  auto [bytes, p] = load_as<Phenomenon>(file, DocumentKind::kPhenomenon);
  Report r("factorisable");
  r.input("phenomenon", bytes);
  r.param("allow_disturbing", allow_disturbing ? "yes" : "no");
  r.param("strategy_cap", std::to_string(cap));
  FactorisabilityOptions options;
  options.allow_disturbing = allow_disturbing;
  options.strategy_cap = cap;
  FeasibilityCertificate cert;
  try {
    cert = is_factorisable(p, options);
  } catch (const DisturbanceError& e) {
    add_nd(r, p.scenario(), e.report());
    r.line("factorisability requires no-disturbance; rerun with --allow-disturbing for bare polytope membership");
    return emit(r, kPreconditionError);
  }
  add_certificate(r, p, cert);
  add_builtins(r, p);
  return emit(r, cert.feasible ? kHolds : kFails);
}

int cmd_dsep(const std::string& file, const std::string& query) {
  auto [bytes, g] = load_as<Dag>(file, DocumentKind::kGraph);
  const DSepQuery q = parse_dsep_query(g, query);
  Report r("dsep");
  r.input("graph", bytes);
  r.param("query", format_dsep_query(g, q));
  const bool sep = d_separated(g, q);
  r.line(sep ? "true" : "false");
  if (!sep) {
    if (auto path = d_connecting_path(g, q)) r.line("d-connecting path: " + format_path(g, *path));
  }
  r.summary("d_separated", sep ? "true" : "false");
  return emit(r, kHolds);
}

int cmd_faithful(const std::string& model_file, const std::string& phenomenon_file) {
  auto [model_bytes, md] = load_as<ModelDocument>(model_file, DocumentKind::kModel);
  auto [p_bytes, p] = load_as<Phenomenon>(phenomenon_file, DocumentKind::kPhenomenon);
  Report r("faithful");
  r.input("model", model_bytes);
  r.input("phenomenon", p_bytes);
  if (!(md.scenario == p.scenario())) {
    throw ReproductionError("the model and the phenomenon are over different scenarios");
  }
  const FaithfulnessReport f = check_faithfulness(md.model, p);
  add_faithfulness(r, md.model, p.scenario().n(), f);
  return emit(r, f.faithful() ? kHolds : kFails);
}

int cmd_corollary(const std::string& file) {
  auto [bytes, p] = load_as<Phenomenon>(file, DocumentKind::kPhenomenon);
  Report r("corollary");
  r.input("phenomenon", bytes);
  add_corollary(r, p, corollary_report(p));
  return emit(r, kHolds);
}

int cmd_verify_lemma(const LemmaOptions& options) {
  Report r("verify-lemma");
  r.param("max_set_size", std::to_string(options.max_set_size));
  r.param("within_set_edges", options.within_set_edges ? "yes" : "no");
  r.param("graph_cap", std::to_string(options.graph_cap));
  const LemmaReport lemma = verify_lemma_chain(options);
  add_lemma(r, lemma);
  return emit(r, lemma.holds() ? kHolds : kFails);
}

int cmd_verify_theorem(const TheoremOptions& o) {
  Report r("verify-theorem");
  r.param("n", std::to_string(o.n));
  r.param("settings", std::to_string(o.settings_per_party));
  r.param("outcomes", std::to_string(o.outcomes));
  r.param("trials", std::to_string(o.trials));
  r.param("seed", std::to_string(o.seed));
  r.param("denominator", std::to_string(o.denominator));
  r.param("max_latents", std::to_string(o.budget.max_latents));
  r.param("max_subset_size", std::to_string(o.budget.max_subset_size));
  r.param("latent_cardinality", std::to_string(o.budget.latent_cardinality));
  r.param("latents_outcomes_only", o.budget.latents_over_outcomes_only ? "yes" : "no");
  r.param("max_observable_edges", std::to_string(o.budget.max_observable_edges));
  r.param("candidate_cap", std::to_string(o.budget.candidate_cap));
  const TheoremReport t = verify_theorem(o);
  add_theorem(r, t);
  return emit(r, t.holds() ? kHolds : kFails);
}

template <typename F>
int guarded(F&& run) {
  try {
    return run();
  } catch (const PreconditionError& e) {
    std::cerr << "precondition error: " << e.what() << "\n";
    return kPreconditionError;
  } catch (const ParseError& e) {
    std::cerr << "parse error at " << e.what() << "\n";
    return kInputError;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kInputError;
  }
}

}  // namespace
}  // namespace ftcausal

int main(int argc, char** argv) {
  using namespace ftcausal;
  CLI::App app{"Exact causal-model analysis of contextuality and nonlocality"};
  app.set_version_flag("--version", std::string(version()));
  app.require_subcommand(1);

  std::string file, file2, query;
  std::function<int()> action;

  auto* nd = app.add_subcommand("check-nd", "Check no-disturbance of a phenomenon");
  nd->add_option("phenomenon", file, "Phenomenon document")->required();
  nd->callback([&] { action = [&] { return cmd_check_nd(file); }; });

  bool allow_disturbing = false;
  std::size_t strategy_cap = kDefaultStrategyCap;
  auto* fact = app.add_subcommand("factorisable", "Exact factorisability (LP) with certificate");
  fact->add_option("phenomenon", file, "Phenomenon document")->required();
  fact->add_flag("--allow-disturbing", allow_disturbing,
                 "Run the LP even when no-disturbance fails (polytope membership only)");
  fact->add_option("--strategy-cap", strategy_cap, "Maximum number of deterministic strategies");
  fact->callback([&] {
    action = [&] { return cmd_factorisable(file, allow_disturbing, strategy_cap); };
  });

  auto* dsep = app.add_subcommand("dsep", "Decide a d-separation query \"X,Y|Z\"");
  dsep->add_option("graph", file, "Graph document")->required();
  dsep->add_option("query", query, "Query, e.g. \"A1,X2|X1\"")->required();
  dsep->callback([&] { action = [&] { return cmd_dsep(file, query); }; });

  auto* faithful = app.add_subcommand("faithful", "Check a model for fine-tuning against a phenomenon");
  faithful->add_option("model", file, "Model document")->required();
  faithful->add_option("phenomenon", file2, "Phenomenon document")->required();
  faithful->callback([&] { action = [&] { return cmd_faithful(file, file2); }; });

  LemmaOptions lemma;
  TheoremOptions theorem;
  bool run_lemma = false, run_theorem = false, no_within = false;
  std::size_t cap = 0;
  auto* verify = app.add_subcommand("verify", "Bounded verification sweeps");
  auto* lemma_flag = verify->add_flag("--lemma", run_lemma, "Exhaustive chained-graph sweep");
  auto* theorem_flag = verify->add_flag("--theorem", run_theorem, "Candidate-graph sweep with random models");
  lemma_flag->excludes(theorem_flag);
  verify->add_option("--max-set-size", lemma.max_set_size, "Lemma: largest set size")
      ->check(CLI::Range(1, 4));
  verify->add_flag("--no-within-set-edges", no_within, "Lemma: only edges between adjacent sets");
  verify->add_option("--n", theorem.n, "Theorem: number of parties")->check(CLI::Range(1, 3));
  verify->add_option("--settings", theorem.settings_per_party, "Theorem: settings per party")
      ->check(CLI::Range(1, 4));
  verify->add_option("--outcomes", theorem.outcomes, "Theorem: outcomes per measurement")
      ->check(CLI::Range(2, 4));
  verify->add_option("--trials", theorem.trials, "Theorem: random models per survivor")
      ->check(CLI::NonNegativeNumber);
  verify->add_option("--seed", theorem.seed, "Theorem: random seed");
  verify->add_option("--denominator", theorem.denominator, "Theorem: CPT entry denominator")
      ->check(CLI::Range(2, 1000000));
  verify->add_option("--max-latents", theorem.budget.max_latents, "Theorem: latent count budget")
      ->check(CLI::Range(0, 8));
  verify->add_option("--max-subset-size", theorem.budget.max_subset_size,
                     "Theorem: largest latent child set")
      ->check(CLI::Range(2, 6));
  verify->add_option("--latent-card", theorem.budget.latent_cardinality, "Theorem: latent cardinality")
      ->check(CLI::Range(1, 16));
  verify->add_flag("--latents-outcomes-only", theorem.budget.latents_over_outcomes_only,
                   "Theorem: latents only over outcome nodes");
  verify->add_option("--max-observable-edges", theorem.budget.max_observable_edges,
                     "Theorem: skip observable graphs with more edges");
  verify->add_flag("--list-survivors", theorem.list_survivors, "Theorem: list every survivor");
  verify->add_option("--cap", cap, "Enumeration cap (graphs for --lemma, candidates for --theorem)");
  verify->callback([&] {
    if (!run_lemma && !run_theorem) throw CLI::RequiredError("--lemma or --theorem");
    lemma.within_set_edges = !no_within;
    if (run_lemma) {
      if (cap) lemma.graph_cap = cap;
      action = [&] { return cmd_verify_lemma(lemma); };
    } else {
      if (cap) theorem.budget.candidate_cap = cap;
      action = [&] { return cmd_verify_theorem(theorem); };
    }
  });

  auto* cor = app.add_subcommand("corollary", "ND + factorisability verdict on fine-tuning");
  cor->add_option("phenomenon", file, "Phenomenon document")->required();
  cor->callback([&] { action = [&] { return cmd_corollary(file); }; });

  try {
    app.parse(argc, argv);
  } catch (const CLI::Success& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kInputError;
  }
  return guarded(action);
}
