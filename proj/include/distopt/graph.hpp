#pragma once

#include <cmath>
#include <cstdint>
#include <istream>
#include <ostream>
#include <queue>
#include <random>
#include <set>
#include <stdexcept>
#include <string>
#include <utility>
#include <vector>

namespace distopt {

/// Undirected simple graph on nodes 0..n-1. Edges are stored once as {i,j}
/// with i < j; self-loops and duplicates are rejected.
struct Graph {
  int n = 0;
  std::vector<std::pair<int, int>> edges;

  Graph() = default;
  Graph(int n_, std::vector<std::pair<int, int>> edges_) : n(n_) {
    if (n < 1) throw std::invalid_argument("Graph: need n >= 1");
    std::set<std::pair<int, int>> seen;
    for (auto [i, j] : edges_) {
      if (i == j) throw std::invalid_argument("Graph: self-loop");
      if (i > j) std::swap(i, j);
      if (i < 0 || j >= n) throw std::invalid_argument("Graph: node index out of range");
      if (!seen.insert({i, j}).second) throw std::invalid_argument("Graph: duplicate edge");
    }
    edges.assign(seen.begin(), seen.end());
  }

  std::size_t edge_count() const { return edges.size(); }
};

inline std::vector<int> degrees(const Graph& g) {
  std::vector<int> deg(g.n, 0);
  for (auto [i, j] : g.edges) {
    ++deg[i];
    ++deg[j];
  }
  return deg;
}

inline std::vector<std::vector<int>> adjacency_lists(const Graph& g) {
  std::vector<std::vector<int>> adj(g.n);
  for (auto [i, j] : g.edges) {
    adj[i].push_back(j);
    adj[j].push_back(i);
  }
  return adj;
}

/// Nodes i.i.d. uniform in the unit square; edge {i,j} iff the Euclidean
/// distance is <= radius. Disconnected draws are legal output (radius 0
/// yields an empty edge set).
inline Graph random_geometric(int n, double radius, std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("random_geometric: need n >= 2");
  if (radius < 0.0 || radius > std::sqrt(2.0) + 1e-15)
    throw std::invalid_argument("random_geometric: radius must be in [0, sqrt(2)]");
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> unif(0.0, 1.0);
  std::vector<double> px(n), py(n);
  for (int i = 0; i < n; ++i) {
    px[i] = unif(rng);
    py[i] = unif(rng);
  }
  std::vector<std::pair<int, int>> edges;
  const double r2 = radius * radius;
  for (int i = 0; i < n; ++i)
    for (int j = i + 1; j < n; ++j) {
      const double dx = px[i] - px[j], dy = py[i] - py[j];
      if (dx * dx + dy * dy <= r2) edges.emplace_back(i, j);
    }
  return Graph(n, std::move(edges));
}

inline bool is_connected(const Graph& g) {
  if (g.n <= 1) return true;
  auto adj = adjacency_lists(g);
  std::vector<char> seen(g.n, 0);
  std::queue<int> q;
  q.push(0);
  seen[0] = 1;
  int count = 1;
  while (!q.empty()) {
    int v = q.front();
    q.pop();
    for (int w : adj[v])
      if (!seen[w]) {
        seen[w] = 1;
        ++count;
        q.push(w);
      }
  }
  return count == g.n;
}

/// Plain-text edge list: first line "n", then one "i j" line per edge, 0-indexed, i < j.
inline void write_edge_list(const Graph& g, std::ostream& out) {
  out << g.n << "\n";
  for (auto [i, j] : g.edges) out << i << " " << j << "\n";
}

inline Graph read_edge_list(std::istream& in) {
  int n;
  if (!(in >> n)) throw std::invalid_argument("edge list: missing node count");
  std::vector<std::pair<int, int>> edges;
  int i, j;
  while (in >> i >> j) edges.emplace_back(i, j);
  return Graph(n, std::move(edges));
}

}  // namespace distopt
