#include "ftcausal/causal_model.hpp"

#include <algorithm>
#include <set>

#include "ftcausal/random.hpp"

namespace ftcausal {
namespace {

std::size_t row_count(const Dag& g, const std::vector<int>& parents) {
  std::size_t rows = 1;
  for (int p : parents) rows *= static_cast<std::size_t>(g.node(p).cardinality);
  return rows;
}

std::size_t state_count(const Dag& g, std::size_t cap) {
  std::size_t total = 1;
  for (const auto& node : g.nodes()) {
    total *= static_cast<std::size_t>(node.cardinality);
    if (total > cap) {
      throw ResourceError("joint state space exceeds the cap of " + std::to_string(cap) +
                          " entries");
    }
  }
  return total;
}

// Walks every full assignment in mixed radix (node 0 most significant) and
// calls visit(assignment, probability) for the non-zero ones.
template <typename Visit>
void for_each_state(const CausalModel& m, std::size_t cap, Visit visit) {
  const Dag& g = m.graph();
  const int n = g.size();
  const std::size_t total = state_count(g, cap);
  std::vector<int> value(n, 0);
  for (std::size_t flat = 0; flat < total; ++flat) {
    Rational p = 1;
    for (int v = 0; v < n && p != 0; ++v) {
      const Cpt& cpt = m.cpt(v);
      std::size_t row = 0;
      for (int q : cpt.parents) row = row * g.node(q).cardinality + value[q];
      p *= cpt.rows[row][value[v]];
    }
    if (p != 0) visit(value, p);
    for (int v = n - 1; v >= 0; --v) {
      if (++value[v] < g.node(v).cardinality) break;
      value[v] = 0;
    }
  }
}

}  // namespace

CausalModel::CausalModel(Dag graph, std::vector<Cpt> cpts)
    : graph_(std::move(graph)), cpts_(std::move(cpts)) {
  if (cpts_.size() != static_cast<std::size_t>(graph_.size())) {
    throw ValidationError("model needs exactly one CPT per node");
  }
  for (int v = 0; v < graph_.size(); ++v) {
    const Cpt& cpt = cpts_[v];
    const std::string& id = graph_.node(v).id;
    NodeSet listed = 0;
    for (int p : cpt.parents) {
      if (p < 0 || p >= graph_.size() || (listed & node_bit(p))) {
        throw ValidationError("CPT of '" + id + "' lists an invalid or repeated parent");
      }
      listed |= node_bit(p);
    }
    if (listed != graph_.parents(v)) {
      throw ValidationError("CPT parents of '" + id + "' do not match the graph");
    }
    if (cpt.rows.size() != row_count(graph_, cpt.parents)) {
      throw ValidationError("CPT of '" + id + "' has " + std::to_string(cpt.rows.size()) +
                            " rows, expected " +
                            std::to_string(row_count(graph_, cpt.parents)));
    }
    for (std::size_t r = 0; r < cpt.rows.size(); ++r) {
      const auto& row = cpt.rows[r];
      if (row.size() != static_cast<std::size_t>(graph_.node(v).cardinality)) {
        throw ValidationError("CPT row " + std::to_string(r) + " of '" + id +
                              "' has the wrong length");
      }
      Rational total = 0;
      for (const auto& x : row) {
        if (x < 0) throw ValidationError("CPT of '" + id + "' has a negative entry");
        total += x;
      }
      if (total != 1) {
        throw ValidationError("CPT row " + std::to_string(r) + " of '" + id + "' sums to " +
                              to_display_string(total));
      }
    }
  }
}

Rational CausalModel::probability(const std::vector<int>& assignment) const {
  if (assignment.size() != cpts_.size()) throw ValidationError("assignment size mismatch");
  Rational p = 1;
  for (int v = 0; v < graph_.size(); ++v) {
    if (assignment[v] < 0 || assignment[v] >= graph_.node(v).cardinality) {
      throw ValidationError("assignment value out of range");
    }
    std::size_t row = 0;
    for (int q : cpts_[v].parents) row = row * graph_.node(q).cardinality + assignment[q];
    p *= cpts_[v].rows[row][assignment[v]];
  }
  return p;
}

std::string describe(const CausalModel& m) {
  const Dag& g = m.graph();
  std::string out;
  for (const auto& node : g.nodes()) {
    out += "node " + node.id + " " + std::string(role_name(node.role)) + " card " +
           std::to_string(node.cardinality) + "\n";
  }
  for (const auto& [u, v] : g.edges()) out += "edge " + g.node(u).id + " -> " + g.node(v).id + "\n";
  for (int v = 0; v < g.size(); ++v) {
    const Cpt& cpt = m.cpt(v);
    out += "cpt " + g.node(v).id + " |";
    for (int q : cpt.parents) out += " " + g.node(q).id;
    out += "\n";
    for (const auto& row : cpt.rows) {
      out += " ";
      for (const auto& x : row) out += " " + to_fraction_string(x);
      out += "\n";
    }
  }
  return out;
}

JointTable joint_distribution(const CausalModel& m, std::size_t cap) {
  const Dag& g = m.graph();
  const std::size_t total = state_count(g, cap);
  std::vector<std::string> names;
  std::vector<int> cards;
  for (const auto& node : g.nodes()) {
    names.push_back(node.id);
    cards.push_back(node.cardinality);
  }
  std::vector<Rational> probs(total, Rational(0));
  std::size_t flat = 0;
  // for_each_state skips zeros, so recompute the flat index from values.
  for_each_state(m, cap, [&](const std::vector<int>& value, const Rational& p) {
    flat = 0;
    for (int v = 0; v < g.size(); ++v) flat = flat * cards[v] + value[v];
    probs[flat] = p;
  });
  return JointTable(std::move(names), std::move(cards), std::move(probs));
}

Dag bind_to_scenario(const Dag& g, const PaddedScenario& s) {
  std::vector<int> cards;
  std::vector<int> settings(s.n(), 0), outcomes(s.n(), 0);
  for (const auto& node : g.nodes()) {
    if (node.role == NodeRole::kLatent) {
      cards.push_back(node.cardinality);
      continue;
    }
    if (node.slot >= s.n()) {
      throw ValidationError("node '" + node.id + "' uses slot " + std::to_string(node.slot + 1) +
                            " but the scenario has " + std::to_string(s.n()));
    }
    if (node.role == NodeRole::kSetting) {
      ++settings[node.slot];
      cards.push_back(static_cast<int>(s.slot_values(node.slot).size()));
    } else {
      ++outcomes[node.slot];
      cards.push_back(static_cast<int>(s.outcome_count()));
    }
  }
  for (int i = 0; i < s.n(); ++i) {
    if (settings[i] != 1 || outcomes[i] != 1) {
      throw ValidationError("slot " + std::to_string(i + 1) +
                            " needs exactly one setting and one outcome node");
    }
  }
  return g.with_cardinalities(cards);
}

Phenomenon observable_phenomenon(const CausalModel& m, const PaddedScenario& s, std::size_t cap) {
  const Dag& g = m.graph();
  const Dag bound = bind_to_scenario(g, s);
  if (!(bound == g)) {
    throw ValidationError("model cardinalities do not match the scenario");
  }
  const int n = s.n();
  std::vector<int> setting_node(n), outcome_node(n);
  for (int i = 0; i < n; ++i) {
    setting_node[i] = *g.observable(NodeRole::kSetting, i);
    outcome_node[i] = *g.observable(NodeRole::kOutcome, i);
  }
  std::size_t settings_size = 1;
  for (int i = 0; i < n; ++i) settings_size *= s.slot_values(i).size();
  const std::size_t row_size = s.row_size();
  std::vector<Rational> table(settings_size * row_size, Rational(0));
  for_each_state(m, cap, [&](const std::vector<int>& value, const Rational& p) {
    std::size_t x = 0, a = 0;
    for (int i = 0; i < n; ++i) {
      x = x * s.slot_values(i).size() + value[setting_node[i]];
      a = a * s.outcome_count() + value[outcome_node[i]];
    }
    table[x * row_size + a] += p;
  });
  std::vector<std::vector<Rational>> rows;
  for (int c = 0; c < s.num_contexts(); ++c) {
    const auto slots = s.slots(c);
    std::size_t x = 0;
    for (int i = 0; i < n; ++i) {
      x = x * s.slot_values(i).size() + s.setting_value_index(i, slots[i]);
    }
    Rational px = 0;
    for (std::size_t a = 0; a < row_size; ++a) px += table[x * row_size + a];
    if (px == 0) {
      std::string label;
      for (int mi : s.base().contexts()[c]) {
        if (!label.empty()) label += ',';
        label += s.base().measurements()[mi];
      }
      throw PreconditionError("settings of context {" + label +
                              "} have probability zero; P(A|X) is undefined there");
    }
    std::vector<Rational> row(row_size);
    for (std::size_t a = 0; a < row_size; ++a) row[a] = table[x * row_size + a] / px;
    rows.push_back(std::move(row));
  }
  return Phenomenon(s, std::move(rows));
}

CausalModel random_compatible_model(const Dag& g, std::uint64_t seed, int denominator) {
  if (denominator < 1) throw ValidationError("denominator bound must be positive");
  Rng rng(seed);
  std::vector<Cpt> cpts;
  for (int v = 0; v < g.size(); ++v) {
    const Node& node = g.node(v);
    const int k = node.cardinality;
    Cpt cpt;
    cpt.parents = members(g.parents(v));
    const std::size_t rows = row_count(g, cpt.parents);
    if (node.role == NodeRole::kSetting && cpt.parents.empty()) {
      cpt.rows.assign(1, std::vector<Rational>(k, Rational(1, k)));
      cpts.push_back(std::move(cpt));
      continue;
    }
    if (k > denominator) {
      throw ValidationError("cardinality of '" + node.id + "' exceeds the denominator bound");
    }
    for (std::size_t r = 0; r < rows; ++r) {
      // k-1 distinct cut points in 1..denominator-1 split the denominator
      // into k positive parts.
      std::set<int> cuts;
      while (static_cast<int>(cuts.size()) < k - 1) {
        cuts.insert(1 + static_cast<int>(rng.below(denominator - 1)));
      }
      std::vector<Rational> row;
      int prev = 0;
      for (int c : cuts) {
        row.emplace_back(c - prev, denominator);
        prev = c;
      }
      row.emplace_back(denominator - prev, denominator);
      for (auto& x : row) x.canonicalize();
      cpt.rows.push_back(std::move(row));
    }
    cpts.push_back(std::move(cpt));
  }
  return CausalModel(g, std::move(cpts));
}

}  // namespace ftcausal
