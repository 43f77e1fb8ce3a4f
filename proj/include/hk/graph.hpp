#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace hk {

/// Simple undirected graph on vertices 0..n0-1, no self-loops.
class Graph {
 public:
  Graph() = default;
  explicit Graph(int n0);

  int n0() const { return n0_; }
  bool adjacent(int u, int v) const { return adj_[index(u, v)] != 0; }
  void add_edge(int u, int v);
  void remove_edge(int u, int v);
  std::vector<std::pair<int, int>> edges() const;
  /// FNV-1a over the vertex count and the sorted edge list.
  std::uint64_t hash() const;

  static Graph complete(int n0);
  /// Graph whose edge set is given by bit (i) of `mask` over the pairs u<v in lexicographic order.
  static Graph from_mask(int n0, std::uint64_t mask);

  friend bool operator==(const Graph&, const Graph&) = default;

 private:
  std::size_t index(int u, int v) const;

  int n0_ = 0;
  std::vector<std::uint8_t> adj_;
};

/// True iff G contains k mutually adjacent vertices (k <= 0 is trivially true).
bool brute_clique(const Graph& g, int k);

}  // namespace hk
