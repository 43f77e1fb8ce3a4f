#include "hk/graph.hpp"

#include <string>

#include "hk/types.hpp"

namespace hk {

Graph::Graph(int n0) : n0_(n0) {
  if (n0 < 0) throw InputError("graph: negative vertex count");
  adj_.assign(static_cast<std::size_t>(n0) * static_cast<std::size_t>(n0), 0);
}

std::size_t Graph::index(int u, int v) const {
  if (u < 0 || v < 0 || u >= n0_ || v >= n0_) {
    throw InputError("graph: vertex out of range (" + std::to_string(u) + ", " + std::to_string(v) + ")");
  }
  return static_cast<std::size_t>(u) * static_cast<std::size_t>(n0_) + static_cast<std::size_t>(v);
}

void Graph::add_edge(int u, int v) {
  if (u == v) throw InputError("graph: self-loop on vertex " + std::to_string(u));
  adj_[index(u, v)] = 1;
  adj_[index(v, u)] = 1;
}

void Graph::remove_edge(int u, int v) {
  adj_[index(u, v)] = 0;
  adj_[index(v, u)] = 0;
}

std::vector<std::pair<int, int>> Graph::edges() const {
  std::vector<std::pair<int, int>> out;
  for (int u = 0; u < n0_; ++u) {
    for (int v = u + 1; v < n0_; ++v) {
      if (adjacent(u, v)) out.emplace_back(u, v);
    }
  }
  return out;
}

std::uint64_t Graph::hash() const {
  std::uint64_t h = 1469598103934665603ULL;
  auto mix = [&h](std::uint64_t x) {
    for (int i = 0; i < 8; ++i) {
      h ^= (x >> (8 * i)) & 0xff;
      h *= 1099511628211ULL;
    }
  };
  mix(static_cast<std::uint64_t>(n0_));
  for (const auto& [u, v] : edges()) {
    mix(static_cast<std::uint64_t>(u));
    mix(static_cast<std::uint64_t>(v));
  }
  return h;
}

Graph Graph::complete(int n0) {
  Graph g(n0);
  for (int u = 0; u < n0; ++u) {
    for (int v = u + 1; v < n0; ++v) g.add_edge(u, v);
  }
  return g;
}

Graph Graph::from_mask(int n0, std::uint64_t mask) {
  Graph g(n0);
  int bit = 0;
  for (int u = 0; u < n0; ++u) {
    for (int v = u + 1; v < n0; ++v, ++bit) {
      if (bit < 64 && ((mask >> bit) & 1U)) g.add_edge(u, v);
    }
  }
  return g;
}

namespace {

bool extend(const Graph& g, std::vector<int>& chosen, int next, int k) {
  if (static_cast<int>(chosen.size()) == k) return true;
  for (int v = next; v < g.n0(); ++v) {
    bool ok = true;
    for (int u : chosen) {
      if (!g.adjacent(u, v)) {
        ok = false;
        break;
      }
    }
    if (!ok) continue;
    chosen.push_back(v);
    if (extend(g, chosen, v + 1, k)) return true;
    chosen.pop_back();
  }
  return false;
}

}  // namespace

bool brute_clique(const Graph& g, int k) {
  if (k <= 0) return true;
  std::vector<int> chosen;
  return extend(g, chosen, 0, k);
}

}  // namespace hk
