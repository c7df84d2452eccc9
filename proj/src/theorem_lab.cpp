#include "ftcausal/theorem_lab.hpp"

#include <bit>
#include <sstream>

#include "ftcausal/random.hpp"

namespace ftcausal {
namespace {

bool acyclic(const std::vector<NodeSet>& parents) {
  const int n = static_cast<int>(parents.size());
  NodeSet remaining = n == 64 ? ~NodeSet{0} : (NodeSet{1} << n) - 1;
  while (remaining) {
    NodeSet sources = 0;
    for (NodeSet r = remaining; r; r &= r - 1) {
      const int v = std::countr_zero(r);
      if (!(parents[v] & remaining)) sources |= node_bit(v);
    }
    if (!sources) return false;
    remaining &= ~sources;
  }
  return true;
}

// Calls visit(parents) for every acyclic orientation assignment (absent,
// u->v, v->u) of the given node pairs.
void for_each_orientation(int nodes, const std::vector<std::pair<int, int>>& pairs,
                          const std::function<void(const std::vector<NodeSet>&)>& visit) {
  std::vector<int> state(pairs.size(), 0);
  std::vector<NodeSet> parents(nodes, 0);
  for (;;) {
    if (acyclic(parents)) visit(parents);
    std::size_t k = 0;
    for (; k < pairs.size(); ++k) {
      const auto [u, v] = pairs[k];
      if (state[k] == 0) {
        state[k] = 1;
        parents[v] |= node_bit(u);
        break;
      }
      if (state[k] == 1) {
        state[k] = 2;
        parents[v] &= ~node_bit(u);
        parents[u] |= node_bit(v);
        break;
      }
      state[k] = 0;
      parents[u] &= ~node_bit(v);
    }
    if (k == pairs.size()) return;
  }
}

std::string set_label(const std::vector<std::string>& names, NodeSet set) {
  std::string out;
  for (int v : members(set)) {
    if (!out.empty()) out += ' ';
    out += names[v];
  }
  return out.empty() ? "-" : out;
}

std::string edge_list(const std::vector<std::string>& names, const std::vector<NodeSet>& parents) {
  std::string out;
  for (std::size_t v = 0; v < parents.size(); ++v) {
    for (int u : members(parents[v])) {
      if (!out.empty()) out += ", ";
      out += names[u] + "->" + names[v];
    }
  }
  return out.empty() ? "(no edges)" : out;
}

std::string graph_label(const Dag& g) {
  std::string out;
  for (const auto& [u, v] : g.edges()) {
    if (!out.empty()) out += ", ";
    out += g.node(u).id + "->" + g.node(v).id;
  }
  return out.empty() ? "(no edges)" : out;
}

// Obligation (x, y, z) masks over the observable numbering A1..An, X1..Xn,
// which coincides with the node numbering of candidate graphs.
std::vector<std::array<NodeSet, 3>> obligation_masks(int n) {
  std::vector<std::array<NodeSet, 3>> out;
  const CISet statements = nd_statements(n);
  for (const auto& s : statements.statements()) out.push_back({s.x, s.y, s.z});
  return out;
}

bool passes(const std::vector<NodeSet>& parents, const std::vector<std::array<NodeSet, 3>>& obligations) {
  for (const auto& [x, y, z] : obligations) {
    if (!d_separated(parents, x, y, z)) return false;
  }
  return true;
}

}  // namespace

void for_each_chained_graph(int a, int b, int c, int d, bool within_set_edges,
                            const std::function<void(const std::vector<NodeSet>&)>& visit) {
  const int sizes[4] = {a, b, c, d};
  int start[5] = {0};
  for (int k = 0; k < 4; ++k) start[k + 1] = start[k] + sizes[k];
  std::vector<std::pair<int, int>> pairs;
  for (int k = 0; k < 4; ++k) {
    if (within_set_edges) {
      for (int u = start[k]; u < start[k + 1]; ++u) {
        for (int v = u + 1; v < start[k + 1]; ++v) pairs.emplace_back(u, v);
      }
    }
    if (k == 3) continue;
    for (int u = start[k]; u < start[k + 1]; ++u) {
      for (int v = start[k + 1]; v < start[k + 2]; ++v) pairs.emplace_back(u, v);
    }
  }
  for_each_orientation(start[4], pairs, visit);
}

LemmaReport verify_lemma_chain(const LemmaOptions& options) {
  if (options.max_set_size < 1) throw ValidationError("max set size must be at least 1");
  LemmaReport report;
  report.options = options;
  const int m = options.max_set_size;
  for (int a = 1; a <= m; ++a) {
    for (int b = 1; b <= m; ++b) {
      for (int c = 1; c <= m; ++c) {
        for (int d = 1; d <= m; ++d) {
          ++report.shapes;
          const int total = a + b + c + d;
          if (total > kMaxDagNodes) throw ResourceError("chained graph exceeds the node limit");
          auto mask = [](int from, int count) { return ((NodeSet{1} << count) - 1) << from; };
          const NodeSet sa = mask(0, a), sb = mask(a, b), sc = mask(a + b, c),
                        sd = mask(a + b + c, d);
          std::vector<std::string> names;
          for (int k = 0; k < total; ++k) {
            const char set = k < a ? 'A' : k < a + b ? 'B' : k < a + b + c ? 'C' : 'D';
            const int offset = set == 'A' ? 0 : set == 'B' ? a : set == 'C' ? a + b : a + b + c;
            names.push_back(std::string(1, set) + std::to_string(k - offset + 1));
          }
          for_each_chained_graph(a, b, c, d, options.within_set_edges,
                                 [&](const std::vector<NodeSet>& parents) {
            if (++report.graphs > options.graph_cap) {
              throw ResourceError("chained graph sweep exceeds the cap of " +
                                  std::to_string(options.graph_cap) + " graphs");
            }
            if (!d_separated(parents, sa, sc, sb)) {
              ++report.premise_false;
              return;
            }
            ++report.premise_true;
            const bool first = d_separated(parents, sa, sc | sd, sb);
            const bool second = d_separated(parents, sa, sd, sb | sc);
            if (first && second) return;
            report.counterexamples.push_back(
                "sizes " + std::to_string(a) + "," + std::to_string(b) + "," +
                std::to_string(c) + "," + std::to_string(d) + ": " + edge_list(names, parents) +
                (first ? "" : " [A,CD|B fails]") + (second ? "" : " [A,D|BC fails]"));
          });
        }
      }
    }
  }
  return report;
}

CandidateClass::CandidateClass(const PaddedScenario& s, CandidateBudget budget)
    : scenario_(s), budget_(budget) {
  const int n = s.n();
  if (2 * n > 6) {
    throw ResourceError("observable graph enumeration is limited to n <= 3 (3^15 orientations)");
  }
  if (budget_.max_latents < 0 || budget_.max_subset_size < 0) {
    throw ValidationError("latent budget must be non-negative");
  }
  if (budget_.latent_cardinality < 1) throw ValidationError("latent cardinality must be positive");
  if (2 * n + budget_.max_latents > kMaxDagNodes) {
    throw ResourceError("candidate graphs exceed the node limit");
  }
  const NodeSet pool = budget_.latents_over_outcomes_only ? (NodeSet{1} << n) - 1
                                                          : (NodeSet{1} << (2 * n)) - 1;
  std::vector<NodeSet> subsets;
  for (NodeSet s = 1; s <= pool; ++s) {
    if ((s & ~pool) == 0 && std::popcount(s) >= 2 && std::popcount(s) <= budget_.max_subset_size) {
      subsets.push_back(s);
    }
  }
  // Combinations of distinct subsets in ascending order, by size.
  std::vector<NodeSet> current;
  std::function<void(std::size_t, int)> choose = [&](std::size_t from, int left) {
    if (left == 0) {
      patterns_.push_back(current);
      return;
    }
    for (std::size_t i = from; i < subsets.size(); ++i) {
      current.push_back(subsets[i]);
      choose(i + 1, left - 1);
      current.pop_back();
    }
  };
  for (int k = 0; k <= budget_.max_latents; ++k) choose(0, k);
}

void CandidateClass::for_each_observable_graph(
    const std::function<void(const std::vector<NodeSet>&)>& visit) const {
  const int nodes = observable_count();
  std::vector<std::pair<int, int>> pairs;
  for (int u = 0; u < nodes; ++u) {
    for (int v = u + 1; v < nodes; ++v) pairs.emplace_back(u, v);
  }
  const int limit = budget_.max_observable_edges;
  if (limit < 0) {
    for_each_orientation(nodes, pairs, visit);
    return;
  }
  for_each_orientation(nodes, pairs, [&](const std::vector<NodeSet>& parents) {
    int edges = 0;
    for (NodeSet p : parents) edges += std::popcount(p);
    if (edges <= limit) visit(parents);
  });
}

std::size_t CandidateClass::size() const {
  if (!observable_count_cache_) {
    std::size_t count = 0;
    for_each_observable_graph([&](const std::vector<NodeSet>&) { ++count; });
    observable_count_cache_ = count;
  }
  return *observable_count_cache_ * patterns_.size();
}

Dag CandidateClass::build(const std::vector<NodeSet>& observable_parents,
                          const std::vector<NodeSet>& pattern) const {
  const int n = scenario_.n();
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({"A" + std::to_string(i + 1), NodeRole::kOutcome, i,
                     static_cast<int>(scenario_.outcome_count())});
  }
  for (int i = 0; i < n; ++i) {
    nodes.push_back({"X" + std::to_string(i + 1), NodeRole::kSetting, i,
                     static_cast<int>(scenario_.slot_values(i).size())});
  }
  std::vector<NodeSet> parents = observable_parents;
  for (std::size_t k = 0; k < pattern.size(); ++k) {
    const int latent = 2 * n + static_cast<int>(k);
    nodes.push_back({"L" + std::to_string(k + 1), NodeRole::kLatent, -1, budget_.latent_cardinality});
    parents.push_back(0);
    for (int v : members(pattern[k])) parents[v] |= node_bit(latent);
  }
  return Dag(std::move(nodes), std::move(parents));
}

void CandidateClass::for_each(const std::function<void(const Dag&)>& visit) const {
  for_each_observable_graph([&](const std::vector<NodeSet>& parents) {
    for (const auto& pattern : patterns_) visit(build(parents, pattern));
  });
}

CandidateClass enumerate_candidates(const PaddedScenario& s, const CandidateBudget& budget) {
  CandidateClass c(s, budget);
  if (c.latent_patterns().size() > budget.candidate_cap ||
      c.size() > budget.candidate_cap) {
    throw ResourceError("candidate class has more than " + std::to_string(budget.candidate_cap) +
                        " graphs");
  }
  return c;
}

bool satisfies_nd_obligations(const PaddedScenario& s, const Dag& g) {
  for (const auto& q : nd_dsep_obligations(s, g)) {
    if (!d_separated(g, q)) return false;
  }
  return true;
}

std::vector<Dag> filter_no_disturbance_dsep(const CandidateClass& c) {
  const int n = c.scenario().n();
  const auto obligations = obligation_masks(n);
  std::vector<Dag> out;
  c.for_each_observable_graph([&](const std::vector<NodeSet>& observable) {
    if (!passes(observable, obligations)) return;
    for (const auto& pattern : c.latent_patterns()) {
      std::vector<NodeSet> parents = observable;
      for (std::size_t k = 0; k < pattern.size(); ++k) {
        parents.push_back(0);
        for (int v : members(pattern[k])) parents[v] |= node_bit(2 * n + static_cast<int>(k));
      }
      if (passes(parents, obligations)) out.push_back(c.build(observable, pattern));
    }
  });
  return out;
}

bool causally_connected(const Dag& g, int u, int v) {
  const NodeSet au = g.ancestors_of(node_bit(u));
  const NodeSet av = g.ancestors_of(node_bit(v));
  if ((au & node_bit(v)) || (av & node_bit(u))) return true;
  return (au & av & g.with_role(NodeRole::kLatent)) != 0;
}

Partition compute_partition(const Dag& g) {
  Partition part;
  const NodeSet outcomes = g.with_role(NodeRole::kOutcome);
  const NodeSet settings = g.with_role(NodeRole::kSetting);
  for (int a : members(outcomes)) {
    for (int x : members(settings)) {
      if (causally_connected(g, a, x)) {
        part.c_part |= node_bit(a);
        part.z_part |= node_bit(x);
      }
    }
  }
  part.b_part = outcomes & ~part.c_part;
  part.y_part = settings & ~part.z_part;
  for (int l : members(g.with_role(NodeRole::kLatent))) {
    const NodeSet d = g.descendants(l);
    const bool reaches_x = d & settings;
    const bool reaches_a = d & outcomes;
    if (!reaches_x) {
      part.lambda_part |= node_bit(l);
    } else if (!reaches_a) {
      part.omega_part |= node_bit(l);
    } else {
      part.mixed_part |= node_bit(l);
    }
  }
  for (int c : members(part.c_part)) {
    int links = 0;
    for (int z : members(part.z_part)) links += causally_connected(g, c, z);
    if (links > 1) part.multi_connected |= node_bit(c);
  }
  return part;
}

std::vector<DerivedCheck> verify_derived_dseps(const Dag& g, const Partition& part) {
  std::vector<DerivedCheck> out;
  auto check = [&](std::string label, NodeSet x, NodeSet y, NodeSet z) {
    DerivedCheck d{std::move(label), {x, y, z}, !x || !y, true};
    if (!d.vacuous) d.holds = d_separated(g, d.query);
    out.push_back(std::move(d));
  };
  const NodeSet lambda = part.lambda_part;
  const NodeSet outcomes = part.b_part | part.c_part;
  check("(8)", part.b_part, part.z_part, lambda);
  check("(9)", outcomes, part.y_part, part.z_part | lambda);
  for (int c : members(part.c_part)) {
    check("(10) " + g.node(c).id, node_bit(c), part.c_part & ~node_bit(c),
          part.z_part | lambda | part.b_part);
  }
  for (int c : members(part.c_part)) {
    NodeSet zi = 0;
    if (auto x = g.observable(NodeRole::kSetting, g.node(c).slot)) zi = node_bit(*x) & part.z_part;
    check("(11) " + g.node(c).id, node_bit(c), part.z_part & ~zi, zi | lambda);
  }
  return out;
}

ExclusionCheck check_exclusions(const Dag& g, const Partition& part) {
  ExclusionCheck out;
  for (const auto& [u, v] : g.edges()) {
    const Node& a = g.node(u);
    const Node& b = g.node(v);
    const bool observable_pair = a.role != NodeRole::kLatent && b.role != NodeRole::kLatent;
    if (observable_pair && a.role != b.role && a.slot != b.slot) out.no_cross_slot_edge = false;
    if ((part.c_part & node_bit(u)) && (part.b_part & node_bit(v))) out.no_c_to_b_edge = false;
    if ((part.c_part & node_bit(u)) && (part.c_part & node_bit(v))) out.no_c_c_edge = false;
  }
  return out;
}

Scenario bell_scenario(int parties, int settings_per_party, int outcomes) {
  if (parties < 1 || parties > 26 || settings_per_party < 1 || outcomes < 1) {
    throw ValidationError("invalid Bell scenario dimensions");
  }
  std::vector<std::string> measurements, labels;
  std::vector<std::vector<std::string>> partition(parties);
  for (int p = 0; p < parties; ++p) {
    for (int s = 0; s < settings_per_party; ++s) {
      const std::string id = std::string(1, static_cast<char>('a' + p)) + std::to_string(s);
      measurements.push_back(id);
      partition[p].push_back(id);
    }
  }
  for (int o = 0; o < outcomes; ++o) labels.push_back(std::to_string(o));
  std::vector<std::vector<std::string>> contexts;
  std::vector<int> choice(parties, 0);
  for (;;) {
    std::vector<std::string> ctx;
    for (int p = 0; p < parties; ++p) ctx.push_back(partition[p][choice[p]]);
    contexts.push_back(std::move(ctx));
    int p = parties - 1;
    for (; p >= 0; --p) {
      if (++choice[p] < settings_per_party) break;
      choice[p] = 0;
    }
    if (p < 0) break;
  }
  return Scenario(measurements, labels, contexts, partition);
}

TheoremReport verify_theorem(const TheoremOptions& options) {
  if (options.trials < 0) throw ValidationError("trial count must be non-negative");
  TheoremReport report;
  report.options = options;
  const PaddedScenario s = pad_scenario(bell_scenario(options.n, options.settings_per_party,
                                                      options.outcomes));
  const CandidateClass candidates = enumerate_candidates(s, options.budget);
  report.candidates = candidates.size();
  const std::vector<Dag> survivors = filter_no_disturbance_dsep(candidates);
  report.survivors = survivors.size();
  FactorisabilityOptions lp_options;
  lp_options.allow_disturbing = true;
  for (std::size_t k = 0; k < survivors.size(); ++k) {
    const Dag& g = survivors[k];
    const Partition part = compute_partition(g);
    if (part.multi_connected) ++report.multi_connection_survivors;
    for (const auto& d : verify_derived_dseps(g, part)) {
      ++report.derived_checks;
      if (d.vacuous) ++report.derived_vacuous;
      if (!d.holds) {
        ++report.derived_failures;
        report.counterexamples.push_back("survivor " + std::to_string(k + 1) + " [" +
                                         graph_label(g) + "]: " + d.label + " " +
                                         format_dsep_query(g, d.query) + " fails");
      }
    }
    const ExclusionCheck ex = check_exclusions(g, part);
    if (!ex.holds()) {
      ++report.exclusion_failures;
      report.counterexamples.push_back("survivor " + std::to_string(k + 1) + " [" +
                                       graph_label(g) + "]: edge exclusion fails");
    }
    if (options.list_survivors) {
      std::vector<std::string> names;
      for (const auto& node : g.nodes()) names.push_back(node.id);
      report.survivor_listing.push_back(
          std::to_string(k + 1) + ": " + graph_label(g) + " | B=" + set_label(names, part.b_part) +
          " C=" + set_label(names, part.c_part) + " Y=" + set_label(names, part.y_part) +
          " Z=" + set_label(names, part.z_part) + " Lambda=" + set_label(names, part.lambda_part) +
          " Omega=" + set_label(names, part.omega_part) +
          " mixed=" + set_label(names, part.mixed_part));
    }
    const std::uint64_t survivor_seed = derive_seed(options.seed, k);
    for (int t = 0; t < options.trials; ++t) {
      const std::uint64_t seed = derive_seed(survivor_seed, static_cast<std::uint64_t>(t));
      const CausalModel m = random_compatible_model(g, seed, options.denominator);
      const Phenomenon p = observable_phenomenon(m, s);
      ++report.trials_run;
      const std::string where = "survivor " + std::to_string(k + 1) + " [" + graph_label(g) +
                                "] trial " + std::to_string(t + 1) + " seed " +
                                std::to_string(seed);
      if (!check_no_disturbance(p).holds()) {
        ++report.nd_failures;
        report.counterexamples.push_back(where + ": no-disturbance fails\n" + describe(m));
        continue;
      }
      if (!is_factorisable(p, lp_options).feasible) {
        ++report.factorisability_failures;
        report.counterexamples.push_back(where + ": not factorisable\n" + describe(m));
      }
    }
  }
  return report;
}

namespace {

// P(A_i = o | measurement in slot i) when the phenomenon is a product of
// per-slot responses; nullopt otherwise.
std::optional<std::vector<std::vector<std::vector<Rational>>>> product_responses(const Phenomenon& p) {
  const PaddedScenario& s = p.scenario();
  const int n = s.n();
  const std::size_t o = s.outcome_count();
  std::vector<std::vector<std::vector<Rational>>> resp(n);
  for (int i = 0; i < n; ++i) {
    resp[i].assign(s.slot_values(i).size(), std::vector<Rational>(o, Rational(0)));
  }
  for (int c = 0; c < s.num_contexts(); ++c) {
    const auto slots = s.slots(c);
    std::vector<std::vector<Rational>> marg(n);
    for (int i = 0; i < n; ++i) {
      marg[i] = marginal(p, IndexSubset(1u << i), c);
      resp[i][s.setting_value_index(i, slots[i])] = marg[i];
    }
    for (std::size_t k = 0; k < s.row_size(); ++k) {
      const auto tuple = s.decode_outcomes(k);
      Rational prod = 1;
      for (int i = 0; i < n && prod != 0; ++i) prod *= marg[i][tuple[i]];
      if (prod != p.row(c)[k]) return std::nullopt;
    }
  }
  return resp;
}

}  // namespace

namespace {

std::pair<std::vector<Node>, std::vector<Cpt>> observed_skeleton(const PaddedScenario& s) {
  const int n = s.n();
  const int o = static_cast<int>(s.outcome_count());
  std::vector<Node> nodes;
  for (int i = 0; i < n; ++i) {
    nodes.push_back({"A" + std::to_string(i + 1), NodeRole::kOutcome, i, o});
  }
  for (int i = 0; i < n; ++i) {
    nodes.push_back({"X" + std::to_string(i + 1), NodeRole::kSetting, i,
                     static_cast<int>(s.slot_values(i).size())});
  }
  std::vector<Cpt> cpts(2 * n);
  for (int i = 0; i < n; ++i) {
    const int k = static_cast<int>(s.slot_values(i).size());
    cpts[n + i].rows.assign(1, std::vector<Rational>(k, Rational(1, k)));
  }
  return {std::move(nodes), std::move(cpts)};
}

}  // namespace

CausalModel bell_model_from_weights(const Phenomenon& p, const FeasibilityCertificate& cert) {
  if (!cert.feasible) throw PreconditionError("no model from an infeasible certificate");
  const PaddedScenario& s = p.scenario();
  const int n = s.n();
  const int o = static_cast<int>(s.outcome_count());
  auto [nodes, cpts] = observed_skeleton(s);
  const int support = static_cast<int>(cert.weights.size());
  nodes.push_back({"L", NodeRole::kLatent, -1, support});
  std::vector<NodeSet> parents(2 * n + 1, 0);
  Cpt latent;
  latent.rows.emplace_back();
  for (const auto& w : cert.weights) latent.rows[0].push_back(w.weight);
  for (int i = 0; i < n; ++i) {
    parents[i] = node_bit(n + i) | node_bit(2 * n);
    Cpt cpt{{n + i, 2 * n}, {}};
    for (int m : s.slot_values(i)) {
      for (const auto& w : cert.weights) {
        std::vector<Rational> row(o, Rational(0));
        row[m == kTrivialMeasurement ? 0 : w.strategy[m]] = 1;
        cpt.rows.push_back(std::move(row));
      }
    }
    cpts[i] = std::move(cpt);
  }
  cpts.push_back(std::move(latent));
  return CausalModel(Dag(std::move(nodes), std::move(parents)), std::move(cpts));
}

CausalModel model_from_certificate(const Phenomenon& p, const FeasibilityCertificate& cert) {
  if (!cert.feasible) throw PreconditionError("no model from an infeasible certificate");
  const PaddedScenario& s = p.scenario();
  const int n = s.n();
  auto resp = product_responses(p);
  if (!resp) return bell_model_from_weights(p, cert);
  auto [nodes, cpts] = observed_skeleton(s);
  std::vector<NodeSet> parents(2 * n, 0);
  for (int i = 0; i < n; ++i) {
    const auto& r = (*resp)[i];
    bool varies = false;
    for (const auto& row : r) varies = varies || row != r.front();
    if (varies) {
      parents[i] = node_bit(n + i);
      cpts[i] = {{n + i}, r};
    } else {
      cpts[i] = {{}, {r.front()}};
    }
  }
  return CausalModel(Dag(std::move(nodes), std::move(parents)), std::move(cpts));
}

CorollaryReport corollary_report(const Phenomenon& p) {
  CorollaryReport report;
  report.nd = check_no_disturbance(p);
  if (!report.nd.holds()) {
    report.verdict = Verdict::kNoDisturbanceFails;
    return report;
  }
  report.certificate = is_factorisable(p);
  for (auto& f : builtin_functionals(p.scenario().base())) {
    auto eval = evaluate_inequality(p, f);
    report.builtins.emplace_back(std::move(f), std::move(eval));
  }
  if (!report.certificate->feasible) {
    report.verdict = Verdict::kFineTuningRequired;
    return report;
  }
  report.verdict = Verdict::kFactorisable;
  report.bell_model = bell_model_from_weights(p, *report.certificate);
  report.bell_model_faithfulness = check_faithfulness(*report.bell_model, p);
  report.model = model_from_certificate(p, *report.certificate);
  report.model_faithfulness = check_faithfulness(*report.model, p);
  return report;
}

}  // namespace ftcausal
