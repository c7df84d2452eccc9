#pragma once

// Test-side reference computations. None of these call into the library
// code they are used to check.

#include <cstdint>
#include <map>
#include <queue>
#include <vector>

#include "ftcausal/dag.hpp"
#include "ftcausal/joint.hpp"
#include "ftcausal/random.hpp"
#include "ftcausal/rational.hpp"
#include "ftcausal/scenario.hpp"

namespace oracle {

using ftcausal::NodeSet;
using ftcausal::Rational;

inline std::uint64_t binomial(int n, int k) {
  std::uint64_t r = 1;
  for (int i = 1; i <= k; ++i) r = r * (n - k + i) / i;
  return r;
}

// Labeled DAGs on n nodes by the alternating-sum recurrence over the set
// of sources.
inline std::int64_t labeled_dag_count(int n) {
  std::vector<std::int64_t> a(n + 1, 0);
  a[0] = 1;
  for (int m = 1; m <= n; ++m) {
    for (int k = 1; k <= m; ++k) {
      const std::int64_t sign = (k % 2) ? 1 : -1;
      a[m] += sign * static_cast<std::int64_t>(binomial(m, k)) *
              (std::int64_t{1} << (k * (m - k))) * a[m - k];
    }
  }
  return a[n];
}

// d-separation via the moral graph of the ancestral set of X u Y u Z.
inline bool dsep_moral(const std::vector<NodeSet>& parents, NodeSet x, NodeSet y, NodeSet z) {
  const int n = static_cast<int>(parents.size());
  NodeSet anc = x | y | z;
  for (bool grew = true; grew;) {
    grew = false;
    for (int v = 0; v < n; ++v) {
      if (((anc >> v) & 1) && (parents[v] & ~anc)) {
        anc |= parents[v];
        grew = true;
      }
    }
  }
  std::vector<NodeSet> adj(n, 0);
  for (int v = 0; v < n; ++v) {
    if (!((anc >> v) & 1)) continue;
    for (int p = 0; p < n; ++p) {
      if (!((parents[v] >> p) & 1)) continue;
      adj[v] |= NodeSet{1} << p;
      adj[p] |= NodeSet{1} << v;
      for (int q = 0; q < n; ++q) {
        if (q != p && ((parents[v] >> q) & 1)) adj[p] |= NodeSet{1} << q;
      }
    }
  }
  NodeSet seen = x;
  std::queue<int> todo;
  for (int v = 0; v < n; ++v) {
    if ((x >> v) & 1) todo.push(v);
  }
  while (!todo.empty()) {
    const int v = todo.front();
    todo.pop();
    if ((y >> v) & 1) return false;
    for (int w = 0; w < n; ++w) {
      const NodeSet b = NodeSet{1} << w;
      if ((adj[v] & b) && !(seen & b) && !(z & b) && (anc & b)) {
        seen |= b;
        todo.push(w);
      }
    }
  }
  return true;
}

// Random DAG: a random permutation as topological order and each forward
// pair joined with probability 1/2.
inline std::vector<NodeSet> random_dag(ftcausal::Rng& rng, int n) {
  std::vector<int> order(n);
  for (int i = 0; i < n; ++i) order[i] = i;
  for (int i = n - 1; i > 0; --i) std::swap(order[i], order[rng.below(i + 1)]);
  std::vector<NodeSet> parents(n, 0);
  for (int i = 0; i < n; ++i) {
    for (int j = i + 1; j < n; ++j) {
      if (rng.coin()) parents[order[j]] |= NodeSet{1} << order[i];
    }
  }
  return parents;
}

// P(xyz) = P(xz) P(yz) / P(z) for every value, with marginals summed
// directly from the full table.
inline bool ci_by_division(const ftcausal::JointTable& t, std::uint64_t x, std::uint64_t y,
                           std::uint64_t z) {
  const auto& cards = t.cardinalities();
  const int n = static_cast<int>(cards.size());
  using Key = std::vector<int>;
  std::map<Key, Rational> pxyz, pxz, pyz, pz;
  auto project = [&](const Key& full, std::uint64_t keep) {
    Key k(n, -1);
    for (int i = 0; i < n; ++i) {
      if ((keep >> i) & 1) k[i] = full[i];
    }
    return k;
  };
  Key state(n, 0);
  for (const auto& p : t.probabilities()) {
    pxyz[project(state, x | y | z)] += p;
    pxz[project(state, x | z)] += p;
    pyz[project(state, y | z)] += p;
    pz[project(state, z)] += p;
    for (int i = n - 1; i >= 0; --i) {
      if (++state[i] < cards[i]) break;
      state[i] = 0;
    }
  }
  // Iterate every (x, y, z) value, including those of probability zero.
  std::fill(state.begin(), state.end(), 0);
  for (std::size_t s = 0; s < t.probabilities().size(); ++s) {
    const Key kz = project(state, z);
    const Rational denom = pz[kz];
    if (denom != 0) {
      const Rational lhs = pxyz[project(state, x | y | z)] / denom;
      const Rational rhs = (pxz[project(state, x | z)] / denom) * (pyz[project(state, y | z)] / denom);
      if (lhs != rhs) return false;
    }
    for (int i = n - 1; i >= 0; --i) {
      if (++state[i] < cards[i]) break;
      state[i] = 0;
    }
  }
  return true;
}

// Noncontextuality of a no-disturbance binary n-cycle behaviour from its
// correlators E_i = <m_i m_{i+1}>: classical iff sum_i g_i E_i <= n - 2 for
// every sign vector g with an odd number of -1 entries.
inline bool cycle_noncontextual(const std::vector<Rational>& correlators) {
  const int n = static_cast<int>(correlators.size());
  for (std::uint32_t mask = 0; mask < (1u << n); ++mask) {
    if (__builtin_popcount(mask) % 2 == 0) continue;
    Rational s = 0;
    for (int i = 0; i < n; ++i) s += ((mask >> i) & 1) ? -correlators[i] : correlators[i];
    if (s > n - 2) return false;
  }
  return true;
}

// Measurements m0..m{n-1}, contexts {m_i, m_{i+1 mod n}}.
inline ftcausal::Scenario cycle_scenario(int n) {
  std::vector<std::string> ms;
  for (int i = 0; i < n; ++i) ms.push_back("m" + std::to_string(i));
  std::vector<std::vector<std::string>> contexts;
  for (int i = 0; i < n; ++i) contexts.push_back({ms[i], ms[(i + 1) % n]});
  return ftcausal::Scenario(ms, {"0", "1"}, contexts);
}

// Rows (00, 01, 10, 11) of a cycle behaviour with <m_i> = a_i and
// <m_i m_{i+1}> = E_i, outcome 0 read as +1.
inline std::vector<std::vector<Rational>> cycle_rows(const std::vector<Rational>& a,
                                                     const std::vector<Rational>& e) {
  const int n = static_cast<int>(a.size());
  std::vector<std::vector<Rational>> rows;
  for (int i = 0; i < n; ++i) {
    std::vector<Rational> row;
    for (int u : {1, -1}) {
      for (int v : {1, -1}) {
        row.push_back((1 + u * a[i] + v * a[(i + 1) % n] + u * v * e[i]) / 4);
      }
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace oracle
