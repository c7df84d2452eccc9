#pragma once

#include <string>
#include <vector>

#include "ftcausal/causal_model.hpp"
#include "ftcausal/ci.hpp"
#include "ftcausal/dag.hpp"
#include "ftcausal/scenario.hpp"

namespace ftcausal {

// A CI statement of the phenomenon whose sets are d-connected in the graph.
struct FineTuningWitness {
  CIStatement statement;  // over observed_universe(n)
  DSepQuery query;        // the same sets as graph nodes
  std::vector<int> path;  // shortest d-connecting path, graph node indices
};

struct FaithfulnessReport {
  std::vector<FineTuningWitness> witnesses;
  std::size_t checked_count = 0;
  bool uniform_settings = false;  // CI enumeration used uniform context weights

  bool faithful() const { return witnesses.empty(); }
};

// Graph nodes of a set of observed variables (A1..An, X1..Xn numbering).
NodeSet observed_nodes(const Dag& g, int n, VarSet vars);
DSepQuery to_dsep_query(const Dag& g, int n, const CIStatement& s);

// Throws ReproductionError naming the first differing entry unless the
// model's observable phenomenon equals p exactly.
void check_reproduces(const CausalModel& m, const Phenomenon& p);

// Reproduction check, then every CI statement over the observed variables
// that holds in p is tested for d-separation in the model's graph.
FaithfulnessReport check_faithfulness(const CausalModel& m, const Phenomenon& p);

// The d-separation half alone, over a given statement set.
FaithfulnessReport check_faithfulness_against(const Dag& g, int n, const CISet& statements);

// (A_g _||_ X_\g | X_g)_d for every non-empty proper slot subset g.
std::vector<DSepQuery> nd_dsep_obligations(const PaddedScenario& s, const Dag& g);

}  // namespace ftcausal
