#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "ftcausal/error.hpp"

namespace ftcausal {

// Bitmask over the nodes of a Dag (at most 64 nodes).
using NodeSet = std::uint64_t;

inline constexpr int kMaxDagNodes = 64;
inline constexpr int kDefaultLatentCardinality = 4;

inline NodeSet node_bit(int v) { return NodeSet{1} << v; }
std::vector<int> members(NodeSet set);

enum class NodeRole { kSetting, kOutcome, kLatent };

std::string_view role_name(NodeRole role);

struct Node {
  std::string id;
  NodeRole role = NodeRole::kLatent;
  int slot = -1;  // 0-based slot for setting/outcome nodes
  int cardinality = kDefaultLatentCardinality;

  bool operator==(const Node&) const = default;
};

// Directed acyclic graph over observed and latent nodes. Immutable.
class Dag {
 public:
  Dag(std::vector<Node> nodes, const std::vector<std::pair<std::string, std::string>>& edges);
  // parents[v] is the parent mask of node v.
  Dag(std::vector<Node> nodes, std::vector<NodeSet> parents);

  int size() const { return static_cast<int>(nodes_.size()); }
  const Node& node(int v) const { return nodes_.at(v); }
  const std::vector<Node>& nodes() const { return nodes_; }
  int index_of(std::string_view id) const;
  std::optional<int> find(std::string_view id) const;
  NodeSet ids_to_set(const std::vector<std::string>& ids) const;
  std::vector<std::string> set_to_ids(NodeSet set) const;

  NodeSet parents(int v) const { return parents_.at(v); }
  NodeSet children(int v) const { return children_.at(v); }
  // Strict descendants (v excluded).
  NodeSet descendants(int v) const { return descendants_.at(v); }
  // Ancestors of a set, the set itself included.
  NodeSet ancestors_of(NodeSet set) const;
  NodeSet non_descendants(int v) const;
  bool has_edge(int from, int to) const { return (parents_.at(to) >> from) & 1u; }
  std::vector<std::pair<int, int>> edges() const;
  std::vector<int> topological_order() const { return topo_; }
  NodeSet all() const;
  NodeSet with_role(NodeRole role) const;

  // Node with the given observable role in the given slot, if present.
  std::optional<int> observable(NodeRole role, int slot) const;

  // Same graph with each node's cardinality replaced.
  Dag with_cardinalities(const std::vector<int>& cards) const;

  bool operator==(const Dag& other) const {
    return nodes_ == other.nodes_ && parents_ == other.parents_;
  }

 private:
  void finish();

  std::vector<Node> nodes_;
  std::vector<NodeSet> parents_;
  std::vector<NodeSet> children_;
  std::vector<NodeSet> descendants_;
  std::vector<int> topo_;
};

// Name-based structural queries.
std::vector<std::string> parents(const Dag& g, std::string_view v);
std::vector<std::string> non_descendants(const Dag& g, std::string_view v);

// (X _||_ Y | Z)_d with pairwise disjoint sets; X and Y non-empty.
struct DSepQuery {
  NodeSet x = 0;
  NodeSet y = 0;
  NodeSet z = 0;

  void validate(const Dag& g) const;
};

// Parses "X,Y|Z" where each part is a whitespace-separated list of node ids
// and Z may be empty.
DSepQuery parse_dsep_query(const Dag& g, std::string_view text);
std::string format_dsep_query(const Dag& g, const DSepQuery& q);

// Reachability ("Bayes ball") d-separation. Linear in the graph size.
bool d_separated(const Dag& g, const DSepQuery& q);
// The same test on a bare acyclic graph given by parent masks, without
// validation.
bool d_separated(std::span<const NodeSet> parents, NodeSet x, NodeSet y, NodeSet z);

// Exhaustive simple-path d-separation, applying the chain/fork and collider
// blocking rules path by path. Exponential; used as a cross-check.
bool d_separated_by_paths(const Dag& g, const DSepQuery& q);

// Whether `path` (consecutive nodes adjacent in the skeleton) is unblocked
// by `z` under the two blocking rules.
bool path_is_active(const Dag& g, std::span<const int> path, NodeSet z);

// A shortest simple path from X to Y left unblocked by Z, if any.
std::optional<std::vector<int>> d_connecting_path(const Dag& g, const DSepQuery& q);

// "X2 -> A1 <- L1" style rendering.
std::string format_path(const Dag& g, std::span<const int> path);

}  // namespace ftcausal
