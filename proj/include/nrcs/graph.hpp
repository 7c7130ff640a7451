#pragma once

// Directed-graph machinery: input reachability, driver-rooted spanning
// forests, incidence factorizations and the auxiliary graph of a [H, P]
// sparsity pattern. Public vertex ids are 1-based.

#include <algorithm>
#include <deque>
#include <map>
#include <set>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "nrcs/error.hpp"
#include "nrcs/numkernel.hpp"

namespace nrcs {

using Edge = std::pair<int, int>;  // (i, j): i influences j
using VertexSet = std::vector<int>;  // sorted, 1-based
using Pattern = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

class DiGraph {
 public:
  DiGraph() = default;

  DiGraph(int vertex_count, std::vector<Edge> edges)
      : vertex_count_(vertex_count), edges_(std::move(edges)) {
    require(vertex_count_ >= 1, ErrorKind::kInvalidInput, "graph needs at least one vertex");
    out_.assign(vertex_count_, {});
    in_.assign(vertex_count_, {});
    std::set<Edge> seen;
    for (std::size_t k = 0; k < edges_.size(); ++k) {
      const auto [i, j] = edges_[k];
      require(i >= 1 && i <= vertex_count_ && j >= 1 && j <= vertex_count_, ErrorKind::kInvalidInput,
              "edge (" + std::to_string(i) + "," + std::to_string(j) + ") references a vertex outside 1.." +
                  std::to_string(vertex_count_));
      require(i != j, ErrorKind::kInvalidInput, "self-loop on vertex " + std::to_string(i));
      require(seen.insert(edges_[k]).second, ErrorKind::kInvalidInput,
              "duplicate edge (" + std::to_string(i) + "," + std::to_string(j) + ")");
      out_[i - 1].push_back(j);
      in_[j - 1].push_back(i);
      index_[edges_[k]] = static_cast<int>(k);
    }
    for (auto& list : out_) std::sort(list.begin(), list.end());
    for (auto& list : in_) std::sort(list.begin(), list.end());
  }

  int vertex_count() const { return vertex_count_; }
  int edge_count() const { return static_cast<int>(edges_.size()); }
  const std::vector<Edge>& edges() const { return edges_; }

  /// Successors of vertex v, ascending.
  const std::vector<int>& out_neighbors(int v) const { return out_.at(v - 1); }
  const std::vector<int>& in_neighbors(int v) const { return in_.at(v - 1); }

  bool has_edge(int i, int j) const { return index_.count({i, j}) != 0; }

  /// Position of edge (i, j) in edges(), or -1.
  int edge_index(int i, int j) const {
    const auto it = index_.find({i, j});
    return it == index_.end() ? -1 : it->second;
  }

  /// Subgraph induced by `vertices` (sorted), relabelled 1..|vertices| in that order.
  DiGraph induced(const VertexSet& vertices) const {
    std::map<int, int> relabel;
    for (std::size_t k = 0; k < vertices.size(); ++k) relabel[vertices[k]] = static_cast<int>(k) + 1;
    std::vector<Edge> kept;
    for (const auto& [i, j] : edges_) {
      if (relabel.count(i) && relabel.count(j)) kept.emplace_back(relabel[i], relabel[j]);
    }
    return DiGraph(static_cast<int>(vertices.size()), std::move(kept));
  }

 private:
  int vertex_count_ = 0;
  std::vector<Edge> edges_;
  std::vector<std::vector<int>> out_;
  std::vector<std::vector<int>> in_;
  std::map<Edge, int> index_;
};

inline void check_drivers(const DiGraph& g, const VertexSet& drivers) {
  for (int d : drivers) {
    require(d >= 1 && d <= g.vertex_count(), ErrorKind::kInvalidInput,
            "driver " + std::to_string(d) + " outside 1.." + std::to_string(g.vertex_count()));
  }
}

inline VertexSet input_reachable_set(const DiGraph& g, const VertexSet& drivers) {
  check_drivers(g, drivers);
  std::vector<bool> seen(g.vertex_count() + 1, false);
  std::deque<int> queue;
  for (int d : drivers) {
    if (!seen[d]) {
      seen[d] = true;
      queue.push_back(d);
    }
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : g.out_neighbors(v)) {
      if (!seen[w]) {
        seen[w] = true;
        queue.push_back(w);
      }
    }
  }
  VertexSet out;
  for (int v = 1; v <= g.vertex_count(); ++v) {
    if (seen[v]) out.push_back(v);
  }
  return out;
}

inline VertexSet unreachable_vertices(const DiGraph& g, const VertexSet& drivers) {
  const VertexSet reached = input_reachable_set(g, drivers);
  VertexSet out;
  std::size_t k = 0;
  for (int v = 1; v <= g.vertex_count(); ++v) {
    if (k < reached.size() && reached[k] == v) {
      ++k;
    } else {
      out.push_back(v);
    }
  }
  return out;
}

inline bool is_globally_input_reachable(const DiGraph& g, const VertexSet& drivers) {
  return static_cast<int>(input_reachable_set(g, drivers).size()) == g.vertex_count();
}

struct RootedTree {
  int root = 0;
  std::vector<int> order;       // topological: every parent precedes its children
  std::map<int, int> parent;    // non-root vertex -> parent

  int size() const { return static_cast<int>(order.size()); }
};

struct SpanningForest {
  std::vector<RootedTree> trees;

  int edge_count() const {
    int total = 0;
    for (const auto& t : trees) total += static_cast<int>(t.parent.size());
    return total;
  }

  /// Index of the tree containing v, or -1.
  int tree_of(int v) const {
    for (std::size_t t = 0; t < trees.size(); ++t) {
      const auto& order = trees[t].order;
      if (std::find(order.begin(), order.end(), v) != order.end()) return static_cast<int>(t);
    }
    return -1;
  }
};

/// Multi-source BFS from the drivers (ascending ids, lowest-id neighbours
/// first). Every driver roots its own tree.
inline SpanningForest rooted_spanning_forest(const DiGraph& g, VertexSet drivers) {
  check_drivers(g, drivers);
  std::sort(drivers.begin(), drivers.end());
  drivers.erase(std::unique(drivers.begin(), drivers.end()), drivers.end());

  const VertexSet missing = unreachable_vertices(g, drivers);
  if (!missing.empty()) {
    std::string list;
    for (int v : missing) list += (list.empty() ? "" : ",") + std::to_string(v);
    throw NoForestError(missing, "vertices not reachable from any driver: {" + list + "}");
  }

  SpanningForest forest;
  std::vector<int> owner(g.vertex_count() + 1, -1);
  std::deque<int> queue;
  for (int d : drivers) {
    owner[d] = static_cast<int>(forest.trees.size());
    forest.trees.push_back(RootedTree{d, {d}, {}});
    queue.push_back(d);
  }
  while (!queue.empty()) {
    const int v = queue.front();
    queue.pop_front();
    for (int w : g.out_neighbors(v)) {
      if (owner[w] >= 0) continue;
      owner[w] = owner[v];
      auto& tree = forest.trees[owner[v]];
      tree.order.push_back(w);
      tree.parent[w] = v;
      queue.push_back(w);
    }
  }
  return forest;
}

struct IncidencePair {
  Matrix K_I;  // |E| x N, +1 at the tail and -1 at the head of each edge
  Matrix K;    // N x |E|, K(j, k) = 1 where K_I(k, j) = -1
  bool degenerate = false;  // no edges
};

inline IncidencePair incidence_matrices(const DiGraph& g) {
  const int n = g.vertex_count();
  const int m = g.edge_count();
  IncidencePair out{Matrix::Zero(m, n), Matrix::Zero(n, m), m == 0};
  for (int k = 0; k < m; ++k) {
    const auto [tail, head] = g.edges()[k];
    out.K_I(k, tail - 1) = 1.0;
    out.K_I(k, head - 1) = -1.0;
    out.K(head - 1, k) = 1.0;
  }
  return out;
}

/// Adjacency lists over 0-based vertices; self-loops allowed.
using Adjacency = std::vector<std::vector<int>>;

/// Tarjan's algorithm, iterative. Returns the component id of every vertex.
inline std::vector<int> strongly_connected_components(const Adjacency& adj, int* component_count = nullptr) {
  const int n = static_cast<int>(adj.size());
  std::vector<int> index(n, -1), low(n, 0), comp(n, -1);
  std::vector<bool> on_stack(n, false);
  std::vector<int> stack;
  int counter = 0;
  int comps = 0;
  struct Frame {
    int v;
    std::size_t next;
  };
  for (int s = 0; s < n; ++s) {
    if (index[s] >= 0) continue;
    std::vector<Frame> call{{s, 0}};
    index[s] = low[s] = counter++;
    stack.push_back(s);
    on_stack[s] = true;
    while (!call.empty()) {
      Frame& f = call.back();
      if (f.next < adj[f.v].size()) {
        const int w = adj[f.v][f.next++];
        if (index[w] < 0) {
          index[w] = low[w] = counter++;
          stack.push_back(w);
          on_stack[w] = true;
          call.push_back({w, 0});
        } else if (on_stack[w]) {
          low[f.v] = std::min(low[f.v], index[w]);
        }
        continue;
      }
      const int v = f.v;
      if (low[v] == index[v]) {
        int w;
        do {
          w = stack.back();
          stack.pop_back();
          on_stack[w] = false;
          comp[w] = comps;
        } while (w != v);
        ++comps;
      }
      call.pop_back();
      if (!call.empty()) low[call.back().v] = std::min(low[call.back().v], low[v]);
    }
  }
  if (component_count) *component_count = comps;
  return comp;
}

/// 0-based vertices lying on at least one directed cycle.
inline std::vector<int> cycle_vertices(const Adjacency& adj) {
  int comps = 0;
  const std::vector<int> comp = strongly_connected_components(adj, &comps);
  std::vector<int> size(comps, 0);
  for (int c : comp) ++size[c];
  std::vector<int> out;
  for (int v = 0; v < static_cast<int>(adj.size()); ++v) {
    const bool self_loop = std::find(adj[v].begin(), adj[v].end(), v) != adj[v].end();
    if (size[comp[v]] >= 2 || self_loop) out.push_back(v);
  }
  return out;
}

inline Adjacency adjacency_of(const DiGraph& g) {
  Adjacency adj(g.vertex_count());
  for (const auto& [i, j] : g.edges()) adj[i - 1].push_back(j - 1);
  return adj;
}

inline VertexSet cycle_vertices(const DiGraph& g) {
  VertexSet out;
  for (int v : cycle_vertices(adjacency_of(g))) out.push_back(v + 1);
  return out;
}

/// Auxiliary graph of [H, P]: state vertex v_i -> v_j iff H(j, i) != 0 and
/// input vertex z_i -> v_j iff P(j, i) != 0.
class AuxGraph {
 public:
  AuxGraph(Pattern H, Pattern P) : H_(std::move(H)), P_(std::move(P)) {
    require(H_.rows() == H_.cols(), ErrorKind::kInvalidInput, "aux graph: H must be square");
    require(P_.rows() == H_.rows() || P_.cols() == 0, ErrorKind::kInvalidInput,
            "aux graph: P must have as many rows as H");
  }

  int state_count() const { return static_cast<int>(H_.rows()); }
  int input_count() const { return static_cast<int>(P_.cols()); }
  const Pattern& H() const { return H_; }
  const Pattern& P() const { return P_; }

  /// States are 0..n-1, inputs n..n+m-1.
  Adjacency adjacency() const {
    const int n = state_count();
    Adjacency adj(n + input_count());
    for (int i = 0; i < n; ++i) {
      for (int j = 0; j < n; ++j) {
        if (H_(j, i)) adj[i].push_back(j);
      }
    }
    for (int i = 0; i < input_count(); ++i) {
      for (int j = 0; j < n; ++j) {
        if (P_(j, i)) adj[n + i].push_back(j);
      }
    }
    return adj;
  }

  /// 1-based state vertices reachable from some input vertex.
  VertexSet input_reachable_states() const {
    const Adjacency adj = adjacency();
    const int n = state_count();
    std::vector<bool> seen(adj.size(), false);
    std::deque<int> queue;
    for (int z = n; z < static_cast<int>(adj.size()); ++z) {
      seen[z] = true;
      queue.push_back(z);
    }
    while (!queue.empty()) {
      const int v = queue.front();
      queue.pop_front();
      for (int w : adj[v]) {
        if (!seen[w]) {
          seen[w] = true;
          queue.push_back(w);
        }
      }
    }
    VertexSet out;
    for (int v = 0; v < n; ++v) {
      if (seen[v]) out.push_back(v + 1);
    }
    return out;
  }

 private:
  Pattern H_;
  Pattern P_;
};

/// 1-based state vertices of the auxiliary graph lying on a cycle.
inline VertexSet cycle_vertices(const AuxGraph& aux) {
  VertexSet out;
  for (int v : cycle_vertices(aux.adjacency())) {
    if (v < aux.state_count()) out.push_back(v + 1);
  }
  return out;
}

inline bool every_cycle_input_reachable(const AuxGraph& aux) {
  const VertexSet cyc = cycle_vertices(aux);
  const VertexSet reach = aux.input_reachable_states();
  return std::includes(reach.begin(), reach.end(), cyc.begin(), cyc.end());
}

template <typename Derived>
Pattern nonzero_pattern(const Eigen::MatrixBase<Derived>& m, double threshold = 0.0) {
  return (m.array().abs() > threshold).matrix();
}

}  // namespace nrcs
