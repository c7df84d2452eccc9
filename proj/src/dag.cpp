#include "ftcausal/dag.hpp"

#include <algorithm>
#include <bit>
#include <set>
#include <sstream>

namespace ftcausal {

std::vector<int> members(NodeSet set) {
  std::vector<int> out;
  while (set) {
    out.push_back(std::countr_zero(set));
    set &= set - 1;
  }
  return out;
}

std::string_view role_name(NodeRole role) {
  switch (role) {
    case NodeRole::kSetting:
      return "setting";
    case NodeRole::kOutcome:
      return "outcome";
    case NodeRole::kLatent:
      return "latent";
  }
  return "latent";
}

Dag::Dag(std::vector<Node> nodes,
         const std::vector<std::pair<std::string, std::string>>& edges)
    : nodes_(std::move(nodes)) {
  if (nodes_.size() > kMaxDagNodes) {
    throw ValidationError("graphs are limited to " + std::to_string(kMaxDagNodes) + " nodes");
  }
  std::set<std::string> ids;
  for (const auto& n : nodes_) {
    if (n.id.empty()) throw ValidationError("node with empty id");
    if (!ids.insert(n.id).second) throw ValidationError("duplicate node id '" + n.id + "'");
  }
  parents_.assign(nodes_.size(), 0);
  for (const auto& [from, to] : edges) {
    const int u = index_of(from);
    const int v = index_of(to);
    if (u == v) throw ValidationError("self-loop on '" + from + "'");
    parents_[v] |= node_bit(u);
  }
  finish();
}

Dag::Dag(std::vector<Node> nodes, std::vector<NodeSet> parents)
    : nodes_(std::move(nodes)), parents_(std::move(parents)) {
  if (nodes_.size() > kMaxDagNodes) {
    throw ValidationError("graphs are limited to " + std::to_string(kMaxDagNodes) + " nodes");
  }
  if (parents_.size() != nodes_.size()) {
    throw ValidationError("parent mask count does not match node count");
  }
  for (std::size_t v = 0; v < parents_.size(); ++v) {
    if (parents_[v] >> nodes_.size() || (parents_[v] >> v) & 1u) {
      throw ValidationError("invalid parent mask");
    }
  }
  finish();
}

void Dag::finish() {
  const int n = size();
  for (const auto& node : nodes_) {
    if (node.cardinality < 1) {
      throw ValidationError("node '" + node.id + "' has non-positive cardinality");
    }
    if (node.role != NodeRole::kLatent && node.slot < 0) {
      throw ValidationError("observable node '" + node.id + "' has no slot");
    }
  }
  children_.assign(n, 0);
  for (int v = 0; v < n; ++v) {
    for (int p : members(parents_[v])) children_[p] |= node_bit(v);
  }
  // Kahn's algorithm; smallest ready index first keeps the order canonical.
  std::vector<int> indegree(n);
  for (int v = 0; v < n; ++v) indegree[v] = std::popcount(parents_[v]);
  NodeSet ready = 0;
  for (int v = 0; v < n; ++v) {
    if (indegree[v] == 0) ready |= node_bit(v);
  }
  topo_.clear();
  while (ready) {
    const int v = std::countr_zero(ready);
    ready &= ready - 1;
    topo_.push_back(v);
    for (int c : members(children_[v])) {
      if (--indegree[c] == 0) ready |= node_bit(c);
    }
  }
  if (static_cast<int>(topo_.size()) != n) throw ValidationError("graph contains a directed cycle");
  descendants_.assign(n, 0);
  for (auto it = topo_.rbegin(); it != topo_.rend(); ++it) {
    NodeSet d = 0;
    for (int c : members(children_[*it])) d |= node_bit(c) | descendants_[c];
    descendants_[*it] = d;
  }
}

int Dag::index_of(std::string_view id) const {
  if (auto v = find(id)) return *v;
  throw ValidationError("unknown node '" + std::string(id) + "'");
}

std::optional<int> Dag::find(std::string_view id) const {
  for (int v = 0; v < size(); ++v) {
    if (nodes_[v].id == id) return v;
  }
  return std::nullopt;
}

NodeSet Dag::ids_to_set(const std::vector<std::string>& ids) const {
  NodeSet out = 0;
  for (const auto& id : ids) out |= node_bit(index_of(id));
  return out;
}

std::vector<std::string> Dag::set_to_ids(NodeSet set) const {
  std::vector<std::string> out;
  for (int v : members(set)) out.push_back(nodes_.at(v).id);
  return out;
}

NodeSet Dag::ancestors_of(NodeSet set) const {
  NodeSet out = set;
  NodeSet frontier = set;
  while (frontier) {
    NodeSet next = 0;
    for (int v : members(frontier)) next |= parents_[v];
    frontier = next & ~out;
    out |= next;
  }
  return out;
}

NodeSet Dag::non_descendants(int v) const {
  return all() & ~descendants_.at(v) & ~node_bit(v);
}

std::vector<std::pair<int, int>> Dag::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int v = 0; v < size(); ++v) {
    for (int p : members(parents_[v])) out.emplace_back(p, v);
  }
  std::sort(out.begin(), out.end());
  return out;
}

NodeSet Dag::all() const {
  return size() == 64 ? ~NodeSet{0} : (NodeSet{1} << size()) - 1;
}

NodeSet Dag::with_role(NodeRole role) const {
  NodeSet out = 0;
  for (int v = 0; v < size(); ++v) {
    if (nodes_[v].role == role) out |= node_bit(v);
  }
  return out;
}

std::optional<int> Dag::observable(NodeRole role, int slot) const {
  for (int v = 0; v < size(); ++v) {
    if (nodes_[v].role == role && nodes_[v].slot == slot) return v;
  }
  return std::nullopt;
}

Dag Dag::with_cardinalities(const std::vector<int>& cards) const {
  if (cards.size() != nodes_.size()) throw ValidationError("cardinality count mismatch");
  std::vector<Node> nodes = nodes_;
  for (std::size_t v = 0; v < nodes.size(); ++v) nodes[v].cardinality = cards[v];
  return Dag(std::move(nodes), parents_);
}

std::vector<std::string> parents(const Dag& g, std::string_view v) {
  return g.set_to_ids(g.parents(g.index_of(v)));
}

std::vector<std::string> non_descendants(const Dag& g, std::string_view v) {
  return g.set_to_ids(g.non_descendants(g.index_of(v)));
}

void DSepQuery::validate(const Dag& g) const {
  const NodeSet all = g.all();
  if ((x | y | z) & ~all) throw ValidationError("d-separation query names unknown nodes");
  if (!x || !y) throw ValidationError("d-separation query needs non-empty X and Y");
  if ((x & y) || (x & z) || (y & z)) {
    throw ValidationError("d-separation query sets overlap");
  }
}

namespace {

std::vector<std::string> split_ids(std::string_view text) {
  std::vector<std::string> out;
  std::istringstream is{std::string(text)};
  std::string id;
  while (is >> id) out.push_back(id);
  return out;
}

}  // namespace

DSepQuery parse_dsep_query(const Dag& g, std::string_view text) {
  const auto comma = text.find(',');
  const auto bar = text.find('|');
  if (comma == std::string_view::npos || bar == std::string_view::npos || bar < comma ||
      text.find(',', comma + 1) < bar || text.find('|', bar + 1) != std::string_view::npos) {
    throw ValidationError("query must have the form 'X,Y|Z', got '" + std::string(text) + "'");
  }
  DSepQuery q;
  q.x = g.ids_to_set(split_ids(text.substr(0, comma)));
  q.y = g.ids_to_set(split_ids(text.substr(comma + 1, bar - comma - 1)));
  q.z = g.ids_to_set(split_ids(text.substr(bar + 1)));
  q.validate(g);
  return q;
}

std::string format_dsep_query(const Dag& g, const DSepQuery& q) {
  auto join = [&](NodeSet s) {
    std::string out;
    for (const auto& id : g.set_to_ids(s)) {
      if (!out.empty()) out += ' ';
      out += id;
    }
    return out;
  };
  return join(q.x) + " , " + join(q.y) + " | " + join(q.z);
}

bool d_separated(std::span<const NodeSet> parents, NodeSet x, NodeSet y, NodeSet z) {
  const int n = static_cast<int>(parents.size());
  NodeSet children[kMaxDagNodes] = {};
  for (int v = 0; v < n; ++v) {
    for (NodeSet ps = parents[v]; ps; ps &= ps - 1) children[std::countr_zero(ps)] |= node_bit(v);
  }
  NodeSet z_ancestors = z, frontier = z;
  while (frontier) {
    NodeSet next = 0;
    for (NodeSet f = frontier; f; f &= f - 1) next |= parents[std::countr_zero(f)];
    frontier = next & ~z_ancestors;
    z_ancestors |= next;
  }
  // Nodes reached travelling up (from a child) and down (from a parent).
  NodeSet visited_up = 0, visited_down = 0;
  int stack_v[2 * kMaxDagNodes * kMaxDagNodes + kMaxDagNodes];
  bool stack_up[2 * kMaxDagNodes * kMaxDagNodes + kMaxDagNodes];
  int top = 0;
  for (NodeSet xs = x; xs; xs &= xs - 1) {
    stack_v[top] = std::countr_zero(xs);
    stack_up[top++] = true;
  }
  auto push = [&](NodeSet set, bool up) {
    for (; set; set &= set - 1) {
      stack_v[top] = std::countr_zero(set);
      stack_up[top++] = up;
    }
  };
  while (top > 0) {
    --top;
    const int v = stack_v[top];
    const bool up = stack_up[top];
    NodeSet& visited = up ? visited_up : visited_down;
    if (visited & node_bit(v)) continue;
    visited |= node_bit(v);
    const bool in_z = z & node_bit(v);
    if (!in_z && (y & node_bit(v))) return false;
    if (up) {
      if (in_z) continue;
      push(parents[v] & ~visited_up, true);
      push(children[v] & ~visited_down, false);
    } else {
      if (!in_z) push(children[v] & ~visited_down, false);
      if (z_ancestors & node_bit(v)) push(parents[v] & ~visited_up, true);
    }
  }
  return true;
}

bool d_separated(const Dag& g, const DSepQuery& q) {
  q.validate(g);
  std::vector<NodeSet> parents(g.size());
  for (int v = 0; v < g.size(); ++v) parents[v] = g.parents(v);
  return d_separated(parents, q.x, q.y, q.z);
}

namespace {

bool interior_active(const Dag& g, int prev, int mid, int next, NodeSet z) {
  const bool collider = g.has_edge(prev, mid) && g.has_edge(next, mid);
  if (collider) {
    return (z & node_bit(mid)) || (g.descendants(mid) & z);
  }
  return !(z & node_bit(mid));
}

// Depth-limited DFS over simple paths whose every interior node is active.
bool extend(const Dag& g, const DSepQuery& q, std::vector<int>& path, NodeSet on_path,
            std::size_t max_edges) {
  const int last = path.back();
  if (path.size() > 1 && (q.y & node_bit(last))) return true;
  if (path.size() - 1 == max_edges) return false;
  const NodeSet neighbours = (g.parents(last) | g.children(last)) & ~on_path;
  for (int next : members(neighbours)) {
    if (path.size() > 1 && !interior_active(g, path[path.size() - 2], last, next, q.z)) {
      continue;
    }
    path.push_back(next);
    if (extend(g, q, path, on_path | node_bit(next), max_edges)) return true;
    path.pop_back();
  }
  return false;
}

}  // namespace

bool path_is_active(const Dag& g, std::span<const int> path, NodeSet z) {
  if (path.empty()) return false;
  for (std::size_t i = 0; i + 1 < path.size(); ++i) {
    if (!g.has_edge(path[i], path[i + 1]) && !g.has_edge(path[i + 1], path[i])) return false;
  }
  for (std::size_t i = 1; i + 1 < path.size(); ++i) {
    if (!interior_active(g, path[i - 1], path[i], path[i + 1], z)) return false;
  }
  return true;
}

std::optional<std::vector<int>> d_connecting_path(const Dag& g, const DSepQuery& q) {
  q.validate(g);
  for (std::size_t max_edges = 1; max_edges < static_cast<std::size_t>(g.size()); ++max_edges) {
    for (int x : members(q.x)) {
      std::vector<int> path{x};
      if (extend(g, q, path, node_bit(x), max_edges)) return path;
    }
  }
  return std::nullopt;
}

bool d_separated_by_paths(const Dag& g, const DSepQuery& q) {
  q.validate(g);
  for (int x : members(q.x)) {
    std::vector<int> path{x};
    if (extend(g, q, path, node_bit(x), static_cast<std::size_t>(g.size()))) return false;
  }
  return true;
}

std::string format_path(const Dag& g, std::span<const int> path) {
  std::string out;
  for (std::size_t i = 0; i < path.size(); ++i) {
    if (i) out += g.has_edge(path[i - 1], path[i]) ? " -> " : " <- ";
    out += g.node(path[i]).id;
  }
  return out;
}

}  // namespace ftcausal
