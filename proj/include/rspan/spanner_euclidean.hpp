#ifndef RSPAN_SPANNER_EUCLIDEAN_HPP
#define RSPAN_SPANNER_EUCLIDEAN_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rspan/error.hpp"
#include "rspan/expanders.hpp"
#include "rspan/graph.hpp"
#include "rspan/lso.hpp"
#include "rspan/quadtree.hpp"
#include "rspan/ratio.hpp"
#include "rspan/rng.hpp"
#include "rspan/spanner1d.hpp"

namespace rspan {

enum class HdVariant { simple, improved };

inline const char* to_string(HdVariant v) { return v == HdVariant::simple ? "simple" : "improved"; }

struct EuclideanInfo {
  std::string construction;  // "bounded-spread" or "hd"
  std::size_t n = 0, d = 0;
  Ratio eps, theta;
  std::string mode = "faithful";
  std::string regime = "standard";
  std::vector<std::string> warnings;
  std::uint64_t edge_budget = 0;

  // bounded-spread
  Ratio xi;
  std::int64_t degree_constant = 0;
  double separation = 0.0;
  double log2_spread = 0.0;
  std::uint64_t tree_nodes = 0, wspd_pairs = 0, sibling_pairs = 0;
  std::uint64_t max_pairs_per_point = 0;
  double pair_constant = 0.0;  // K in max_pairs_per_point <= K eps^-2 log2(spread)

  // hd
  HdVariant variant = HdVariant::simple;
  std::int64_t c2 = 16, c = 512;
  Ratio sigma;
  int lso_w = 0;
  std::uint64_t M = 0;
  std::uint64_t iterations = 1;  // N = ceil(log2 log2 n) + 1 for the improved variant
  Ratio theta_prime;
  bool theta_prime_underflow = false;  // theta' below int64 resolution (G_theta' complete)
  std::uint64_t theta_N = 0;
  std::uint64_t orderings_built = 0;
};

struct EuclideanBuild {
  WeightedGraph graph;
  EuclideanInfo info;
};

namespace detail {
inline constexpr std::uint64_t kTagWspd = 0x57;
inline constexpr std::uint64_t kTagSibling = 0x53;
inline constexpr std::uint64_t kTagOrdering = 0x4F;

inline std::vector<Vertex> as_vertices(std::span<const std::uint32_t> ids) {
  return {ids.begin(), ids.end()};
}

inline void add_clique(EdgeSink& sink, std::size_t n) {
  std::vector<Vertex> rest;
  for (Vertex u = 0; u + 1 < n; ++u) {
    rest.clear();
    for (Vertex v = u + 1; v < n; ++v) rest.push_back(v);
    sink.add_all(u, rest);
  }
}

/// ceil(log2 x) for x >= 1.
inline std::uint64_t ceil_log2(std::uint64_t x) { return x <= 1 ? 0 : std::bit_width(x - 1); }
}  // namespace detail

// ---------------------------------------------------------------------------
// Bounded spread

/// Quadtree over P, a (6/eps)-WSPD of it, and a bipartite expander with
/// xi = theta/8 for every WSPD pair and every two siblings; Euclidean weights.
inline EuclideanBuild build_bounded_spread_spanner(const PointSet& P, const Ratio& eps, const Ratio& theta,
                                                   std::uint64_t seed,
                                                   std::optional<std::int64_t> degree_override = std::nullopt) {
  if (eps.num <= 0 || eps.num >= eps.den) throw Error("epsilon must lie in (0,1)");
  if (theta.num <= 0 || 2 * theta.num >= theta.den) throw Error("theta must lie in (0, 1/2)");
  const std::size_t n = P.size();
  if (n < 2) throw Error("bounded-spread spanner needs at least two points");
  EuclideanBuild out;
  auto& info = out.info;
  info.construction = "bounded-spread";
  info.n = n;
  info.d = P.dim();
  info.eps = eps;
  info.theta = theta;
  info.log2_spread = checked_log2_spread(P);
  info.xi = theta / 8;
  info.degree_constant = bipartite_constant(info.xi);
  if (degree_override) {
    if (*degree_override < 1) throw Error("degree constant override must be at least 1");
    info.degree_constant = *degree_override;
    info.mode = "experimental";
  }
  info.separation = 6.0 * static_cast<double>(eps.den) / static_cast<double>(eps.num);

  Quadtree tree(P);
  info.tree_nodes = tree.nodes().size();
  auto pairs = build_wspd(tree, info.separation);
  info.wspd_pairs = pairs.size();
  std::vector<std::uint64_t> per_point(n, 0);
  for (auto pr : pairs) {
    for (auto p : tree.points_of(pr.u)) ++per_point[p];
    for (auto p : tree.points_of(pr.v)) ++per_point[p];
  }
  info.max_pairs_per_point = *std::max_element(per_point.begin(), per_point.end());
  double e = eps.value();
  info.pair_constant = static_cast<double>(info.max_pairs_per_point) * e * e / std::max(1.0, info.log2_spread);

  EdgeSink sink(n);
  const auto c = info.degree_constant;
  for (std::size_t i = 0; i < pairs.size(); ++i) {
    auto L = detail::as_vertices(tree.points_of(pairs[i].u)), R = detail::as_vertices(tree.points_of(pairs[i].v));
    sample_bipartite_into(sink, L, R, c, split_key(seed, {detail::kTagWspd, i}));
    info.edge_budget += bipartite_edge_budget(L.size(), R.size(), c);
  }
  for (std::size_t v = 0; v < tree.nodes().size(); ++v) {
    auto ch = tree.children(v);
    for (std::size_t a = 0; a < ch.size(); ++a)
      for (std::size_t b = a + 1; b < ch.size(); ++b) {
        auto L = detail::as_vertices(tree.points_of(ch[a])), R = detail::as_vertices(tree.points_of(ch[b]));
        sample_bipartite_into(sink, L, R, c, split_key(seed, {detail::kTagSibling, v, a, b}));
        info.edge_budget += bipartite_edge_budget(L.size(), R.size(), c);
        ++info.sibling_pairs;
      }
  }
  out.graph = std::move(sink).finish(EuclideanWeight{&P});
  return out;
}

// ---------------------------------------------------------------------------
// LSO-based spanner

struct HdOptions {
  std::int64_t c2 = 16;
  std::int64_t c = kFaithfulC;
  BuildMode mode = BuildMode::faithful;
  std::optional<Ratio> sigma_override;
  std::optional<Ratio> theta_prime_override;
  std::uint64_t max_orderings = std::uint64_t{1} << 16;
};

/// N = ceil(log2 log2 n) + 1.
inline std::uint64_t hd_iterations(std::size_t n) {
  return detail::ceil_log2(std::max<std::uint64_t>(1, detail::ceil_log2(n))) + 1;
}

/// sigma = eps / (c2 ceil(log2 n)) (simple) or eps / c2 (improved).
inline Ratio hd_sigma(std::size_t n, const Ratio& eps, HdVariant variant, std::int64_t c2) {
  if (c2 < 1) throw Error("c2 must be positive");
  if (variant == HdVariant::improved) return eps / c2;
  auto lg = static_cast<std::int64_t>(std::max<std::uint64_t>(1, detail::ceil_log2(n)));
  return eps / (c2 * lg);
}

/// theta' = theta / M (simple) or theta / (3 N M) (improved); nullopt when
/// the denominator leaves the int64 range.
inline std::optional<Ratio> hd_theta_prime(const Ratio& theta, HdVariant variant, std::uint64_t M, std::uint64_t N) {
  __int128 factor = M;
  if (variant == HdVariant::improved) factor *= static_cast<__int128>(3) * N;
  __int128 den = factor * theta.den;
  if (den > (static_cast<__int128>(1) << 62)) return std::nullopt;
  return Ratio(theta.num, static_cast<std::int64_t>(den));
}

/// Union over the orderings of the LSO family of theta'-reliable exact
/// spanners built on each ordering's rank line, Euclidean weights.
inline EuclideanBuild build_hd_spanner(const PointSet& P, const Ratio& eps, const Ratio& theta, HdVariant variant,
                                       std::uint64_t seed, const HdOptions& opt = {}) {
  if (eps.num <= 0 || eps.num >= eps.den) throw Error("epsilon must lie in (0,1)");
  if (theta.num <= 0 || theta.num >= theta.den) throw Error("theta must lie in (0,1)");
  const std::size_t n = P.size();
  if (n < 2) throw Error("hd spanner needs at least two points");
  if (opt.mode == BuildMode::faithful && opt.c < kFaithfulC)
    throw Error("faithful mode requires c >= 512; use experimental mode for smaller c");
  EuclideanBuild out;
  auto& info = out.info;
  info.construction = "hd";
  info.n = n;
  info.d = P.dim();
  info.eps = eps;
  info.theta = theta;
  info.variant = variant;
  info.c2 = opt.c2;
  info.c = opt.c;
  info.mode = opt.mode == BuildMode::faithful ? "faithful" : "experimental";
  info.sigma = opt.sigma_override ? *opt.sigma_override : hd_sigma(n, eps, variant, opt.c2);
  if (opt.sigma_override || opt.theta_prime_override) info.mode = "experimental";
  info.iterations = variant == HdVariant::improved ? hd_iterations(n) : 1;

  OrderingFamily family(P.dim(), info.sigma);
  info.lso_w = family.w();
  info.M = family.size();
  auto tp = opt.theta_prime_override ? std::optional<Ratio>(*opt.theta_prime_override)
                                     : hd_theta_prime(theta, variant, info.M, info.iterations);
  if (tp) {
    info.theta_prime = *tp;
    info.theta_N = theta_N(*tp, opt.c);
  } else {
    info.theta_prime_underflow = true;
    info.theta_N = std::uint64_t{1} << 62;
  }
  const bool complete = detail::sat_mul(3, info.theta_N) >= n - 1;
  EdgeSink sink(n);
  if (complete) {
    // every rank-line spanner is the clique, and so is their union
    info.regime = "complete";
    info.warnings.push_back("theta' = " + (tp ? tp->str() : std::string("(underflow)")) +
                            " makes every per-ordering spanner complete; the union is the complete graph");
    detail::add_clique(sink, n);
    info.edge_budget = n * (n - 1) / 2;
  } else {
    if (info.M > opt.max_orderings)
      throw Error("ordering family too large to enumerate: M = " + std::to_string(info.M));
    auto norm = normalize_points(P);
    for (std::uint64_t id = 0; id < info.M; ++id) {
      auto perm = family.sort(family.ordering(id), norm.coords);
      auto g = build_G_theta(n, *tp, opt.c, split_key(seed, {detail::kTagOrdering, id}), opt.mode);
      info.edge_budget += g.info.edge_budget;
      if (g.info.regime != "standard") info.regime = g.info.regime;
      for (auto e : g.graph.edges()) sink.add(perm[e.u], perm[e.v]);
      ++info.orderings_built;
    }
  }
  out.graph = std::move(sink).finish(EuclideanWeight{&P});
  return out;
}

}  // namespace rspan

#endif  // RSPAN_SPANNER_EUCLIDEAN_HPP
