#ifndef RSPAN_TESTS_ORACLES_HPP
#define RSPAN_TESTS_ORACLES_HPP

#include <algorithm>
#include <vector>

#include "rspan/graph.hpp"

namespace oracle {

using rspan::Vertex;
using rspan::WeightedGraph;

inline std::vector<std::vector<double>> floyd_warshall(const WeightedGraph& g, const std::vector<char>& alive) {
  const std::size_t n = g.n();
  std::vector<std::vector<double>> d(n, std::vector<double>(n, rspan::kInfinity));
  for (Vertex u = 0; u < n; ++u)
    if (alive[u]) d[u][u] = 0;
  for (auto e : g.edges())
    if (alive[e.u] && alive[e.v]) d[e.u][e.v] = d[e.v][e.u] = std::min(d[e.u][e.v], e.w);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i)
      for (std::size_t j = 0; j < n; ++j)
        if (d[i][k] + d[k][j] < d[i][j]) d[i][j] = d[i][k] + d[k][j];
  return d;
}

/// reach[t] for t > s: some increasing path s -> t avoids dead vertices.
inline std::vector<char> monotone_dp(const WeightedGraph& g, const std::vector<char>& dead, Vertex s) {
  std::vector<char> reach(g.n(), 0);
  reach[s] = 1;
  for (Vertex t = s + 1; t < g.n(); ++t) {
    if (dead[t]) continue;
    for (Vertex u : g.neighbors(t))
      if (u >= s && u < t && reach[u]) reach[t] = 1;
  }
  reach[s] = 0;
  return reach;
}

}  // namespace oracle

#endif  // RSPAN_TESTS_ORACLES_HPP
