#include "ftcausal/faithfulness.hpp"

#include <bit>

namespace ftcausal {

NodeSet observed_nodes(const Dag& g, int n, VarSet vars) {
  NodeSet out = 0;
  for (VarSet rest = vars; rest; rest &= rest - 1) {
    const int v = std::countr_zero(rest);
    if (v >= 2 * n) throw ValidationError("observed variable index out of range");
    const NodeRole role = v < n ? NodeRole::kOutcome : NodeRole::kSetting;
    const auto node = g.observable(role, v % n);
    if (!node) {
      throw ValidationError("graph has no " + std::string(role_name(role)) + " node in slot " +
                            std::to_string(v % n + 1));
    }
    out |= node_bit(*node);
  }
  return out;
}

DSepQuery to_dsep_query(const Dag& g, int n, const CIStatement& s) {
  return {observed_nodes(g, n, s.x), observed_nodes(g, n, s.y), observed_nodes(g, n, s.z)};
}

void check_reproduces(const CausalModel& m, const Phenomenon& p) {
  const PaddedScenario& s = p.scenario();
  const Phenomenon q = observable_phenomenon(m, s);
  for (int c = 0; c < s.num_contexts(); ++c) {
    const auto& want = p.row(c);
    const auto& got = q.row(c);
    for (std::size_t k = 0; k < want.size(); ++k) {
      if (want[k] == got[k]) continue;
      std::string context, outcomes;
      const auto tuple = s.decode_outcomes(k);
      const auto slots = s.slots(c);
      for (int i = 0; i < s.n(); ++i) {
        if (i) {
          context += ',';
          outcomes += ',';
        }
        context += s.measurement_label(slots[i]);
        outcomes += slots[i] == kTrivialMeasurement ? std::string("-")
                                                    : s.base().outcomes()[tuple[i]];
      }
      throw ReproductionError("model does not reproduce the phenomenon: context (" + context +
                              "), outcomes (" + outcomes + "): model gives " +
                              to_fraction_string(got[k]) + ", phenomenon has " +
                              to_fraction_string(want[k]));
    }
  }
}

FaithfulnessReport check_faithfulness_against(const Dag& g, int n, const CISet& statements) {
  FaithfulnessReport report;
  for (const auto& s : statements.statements()) {
    ++report.checked_count;
    const DSepQuery q = to_dsep_query(g, n, s);
    if (d_separated(g, q)) continue;
    report.witnesses.push_back({s, q, d_connecting_path(g, q).value()});
  }
  return report;
}

FaithfulnessReport check_faithfulness(const CausalModel& m, const Phenomenon& p) {
  check_reproduces(m, p);
  const CISet observed = enumerate_ci(observed_joint(p));
  FaithfulnessReport report = check_faithfulness_against(m.graph(), p.scenario().n(), observed);
  report.uniform_settings = !p.context_weights().has_value();
  return report;
}

std::vector<DSepQuery> nd_dsep_obligations(const PaddedScenario& s, const Dag& g) {
  std::vector<DSepQuery> out;
  const CISet statements = nd_statements(s.n());
  for (const auto& st : statements.statements()) out.push_back(to_dsep_query(g, s.n(), st));
  return out;
}

}  // namespace ftcausal
