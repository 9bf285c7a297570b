#ifndef RSPAN_SHADOW_HPP
#define RSPAN_SHADOW_HPP

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numbers>
#include <numeric>
#include <vector>

#include "rspan/error.hpp"
#include "rspan/graph.hpp"
#include "rspan/quadtree.hpp"
#include "rspan/ratio.hpp"

namespace rspan {

enum class ShadowSide { left, right, both };

/// Why a member is in the shadow. Which fields are meaningful depends on
/// the shadow kind: 1D uses [lo, hi], the quadtree uses node, balls use radius.
struct ShadowWitness {
  Vertex lo = 0, hi = 0;
  std::size_t node = 0;
  double radius = 0.0;
};

struct ShadowResult {
  Ratio alpha;
  VertexSet members;
  ShadowSide side = ShadowSide::both;
  std::vector<ShadowWitness> witnesses;  // parallel to members.ids()
  VertexSet left, right;                 // 1D only
};

inline void check_threshold(const Ratio& alpha) {
  if (alpha.num <= 0 || alpha.num > alpha.den) throw Error("shadow threshold must lie in (0,1]");
}

// ---------------------------------------------------------------------------
// 1D

namespace detail {

/// best[i] = max over j >= i of sum_{k=i..j} y_k with y_k = q[k bad] - p,
/// and arg[i] the j attaining it (smallest such j). i is in the left
/// shadow iff best[i] >= 0.
inline void left_shadow_scan(const std::vector<char>& bad, const Ratio& alpha, std::vector<char>& in,
                             std::vector<Vertex>* witness_end) {
  const std::size_t n = bad.size();
  const std::int64_t p = alpha.num, q = alpha.den;
  in.assign(n, 0);
  if (witness_end) witness_end->assign(n, 0);
  std::int64_t best_next = 0;
  Vertex arg_next = 0;
  for (std::size_t r = n; r-- > 0;) {
    std::int64_t y = (bad[r] ? q : 0) - p;
    std::int64_t best = y;
    Vertex arg = static_cast<Vertex>(r);
    if (r + 1 < n && best_next > 0) {
      best = y + best_next;
      arg = arg_next;
    }
    in[r] = best >= 0;
    if (witness_end) (*witness_end)[r] = arg;
    best_next = best;
    arg_next = arg;
  }
}

}  // namespace detail

/// Combined left/right shadow as a membership mask. bad[i] marks vertex i.
inline std::vector<char> shadow_1d_mask(const std::vector<char>& bad, const Ratio& alpha) {
  check_threshold(alpha);
  std::vector<char> left, right;
  detail::left_shadow_scan(bad, alpha, left, nullptr);
  std::vector<char> rev(bad.rbegin(), bad.rend());
  detail::left_shadow_scan(rev, alpha, right, nullptr);
  const std::size_t n = bad.size();
  for (std::size_t i = 0; i < n; ++i) left[i] = left[i] || right[n - 1 - i];
  return left;
}

/// Exact left and right alpha-shadows of B over vertices [0, n) in O(n).
/// Vertex i sits at position i+1; witnesses are reported as vertex ranges.
inline ShadowResult shadow_1d(std::size_t n, const VertexSet& B, const Ratio& alpha) {
  check_threshold(alpha);
  auto bad = B.mask(n);
  std::vector<char> left, right_rev;
  std::vector<Vertex> left_end, right_end_rev;
  detail::left_shadow_scan(bad, alpha, left, &left_end);
  std::vector<char> rev(bad.rbegin(), bad.rend());
  detail::left_shadow_scan(rev, alpha, right_rev, &right_end_rev);
  ShadowResult out;
  out.alpha = alpha;
  out.side = ShadowSide::both;
  std::vector<Vertex> members, lm, rm;
  for (std::size_t i = 0; i < n; ++i) {
    bool l = left[i], r = right_rev[n - 1 - i];
    if (l) lm.push_back(static_cast<Vertex>(i));
    if (r) rm.push_back(static_cast<Vertex>(i));
    if (!l && !r) continue;
    members.push_back(static_cast<Vertex>(i));
    ShadowWitness w;
    if (l) {
      w.lo = static_cast<Vertex>(i);
      w.hi = left_end[i];
    } else {
      w.lo = static_cast<Vertex>(n - 1 - right_end_rev[n - 1 - i]);
      w.hi = static_cast<Vertex>(i);
    }
    out.witnesses.push_back(w);
  }
  out.members = VertexSet(std::move(members), SetRole::shadow);
  out.left = VertexSet(std::move(lm), SetRole::shadow);
  out.right = VertexSet(std::move(rm), SetRole::shadow);
  return out;
}

struct ShadowBoundCheck {
  std::size_t shadow_size = 0;
  std::size_t failures = 0;
  std::int64_t general_bound = 0;  // 2(1 + ceil(1/alpha))|B|
  bool general_ok = true;
  bool sharp_applies = false;      // alpha in (2/3, 1)
  double sharp_bound = 0.0;        // |B| / (2 alpha - 1)
  bool sharp_ok = true;
  [[nodiscard]] bool ok() const { return general_ok && sharp_ok; }
};

inline ShadowBoundCheck check_shadow_bounds(const ShadowResult& result, const VertexSet& B, const Ratio& alpha) {
  ShadowBoundCheck c;
  c.shadow_size = result.members.size();
  c.failures = B.size();
  auto k = static_cast<std::int64_t>(B.size());
  c.general_bound = 2 * (1 + alpha.ceil_inverse()) * k;
  c.general_ok = static_cast<std::int64_t>(c.shadow_size) <= c.general_bound;
  // 2/3 < p/q < 1
  c.sharp_applies = 3 * alpha.num > 2 * alpha.den && alpha.num < alpha.den;
  if (c.sharp_applies) {
    std::int64_t two_p_minus_q = 2 * alpha.num - alpha.den;
    c.sharp_bound = static_cast<double>(k) * static_cast<double>(alpha.den) / static_cast<double>(two_p_minus_q);
    // |S| <= k q / (2p - q)  <=>  |S| (2p - q) <= k q
    c.sharp_ok = static_cast<__int128>(c.shadow_size) * two_p_minus_q <= static_cast<__int128>(k) * alpha.den;
  }
  return c;
}

// ---------------------------------------------------------------------------
// Quadtree gamma-shadow

/// Union of P_v over nodes with |B ∩ P_v| >= gamma |P_v|. The witness of a
/// member is its highest shadowed ancestor.
inline ShadowResult shadow_quadtree(const Quadtree& tree, const VertexSet& B, const Ratio& gamma) {
  check_threshold(gamma);
  const std::size_t n = tree.num_points(), m = tree.nodes().size();
  auto bad = B.mask(n);
  std::vector<std::int64_t> bad_count(m, 0);
  // nodes are created parents-first, so a reverse sweep is bottom-up
  for (std::size_t v = m; v-- > 0;) {
    const auto& nd = tree.node(v);
    if (nd.leaf()) bad_count[v] = bad[tree.order()[nd.lo]] ? 1 : 0;
    if (nd.parent >= 0) bad_count[static_cast<std::size_t>(nd.parent)] += bad_count[v];
  }
  std::vector<std::int64_t> top(n, -1);
  // top-down: first shadowed node on the root path claims the range
  std::vector<char> covered(m, 0);
  for (std::size_t v = 0; v < m; ++v) {
    const auto& nd = tree.node(v);
    bool parent_cov = nd.parent >= 0 && covered[static_cast<std::size_t>(nd.parent)];
    if (parent_cov) {
      covered[v] = 1;
      continue;
    }
    if (gamma.at_most_fraction_of(bad_count[v], nd.size())) {
      covered[v] = 1;
      for (auto p : tree.points_of(v)) top[p] = static_cast<std::int64_t>(v);
    }
  }
  ShadowResult out;
  out.alpha = gamma;
  std::vector<Vertex> members;
  for (std::size_t i = 0; i < n; ++i)
    if (top[i] >= 0) {
      members.push_back(static_cast<Vertex>(i));
      ShadowWitness w;
      w.node = static_cast<std::size_t>(top[i]);
      out.witnesses.push_back(w);
    }
  out.members = VertexSet(std::move(members), SetRole::shadow);
  return out;
}

// ---------------------------------------------------------------------------
// Euclidean ball shadow

/// p is a member iff some closed ball b(p, r), r > 0, has
/// |b ∩ B| >= alpha |b ∩ P|. Only the radii {|p - q|} change the counts, so
/// each point sweeps its sorted distance list. O(n^2 log n).
inline ShadowResult shadow_balls_oracle(const PointSet& P, const VertexSet& B, const Ratio& alpha) {
  check_threshold(alpha);
  const std::size_t n = P.size();
  auto bad = B.mask(n);
  ShadowResult out;
  out.alpha = alpha;
  std::vector<Vertex> members;
  std::vector<std::pair<double, Vertex>> ds(n);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < n; ++q) ds[q] = {P.dist(p, q), static_cast<Vertex>(q)};
    std::sort(ds.begin(), ds.end());
    std::int64_t in_ball = 0, bad_in_ball = 0;
    for (std::size_t k = 0; k < n; ++k) {
      ++in_ball;
      bad_in_ball += bad[ds[k].second] ? 1 : 0;
      if (k + 1 < n && ds[k + 1].first == ds[k].first) continue;  // finish the tie group
      if (alpha.at_most_fraction_of(bad_in_ball, in_ball)) {
        members.push_back(static_cast<Vertex>(p));
        ShadowWitness w;
        w.radius = ds[k].first;
        out.witnesses.push_back(w);
        break;
      }
    }
  }
  out.members = VertexSet(std::move(members), SetRole::shadow);
  return out;
}

// ---------------------------------------------------------------------------
// Cone marking

/// Index of the cone containing direction v (d = 2: six half-open 60 degree
/// sectors; d = 3: the 8 octahedron faces, each split into 4 triangles by
/// edge midpoints, 32 cones).
inline int cone_index(const double* v, std::size_t d) {
  if (d == 2) {
    double a = std::atan2(v[1], v[0]);
    if (a < 0) a += 2 * std::numbers::pi;
    int k = static_cast<int>(a / (std::numbers::pi / 3));
    return std::clamp(k, 0, 5);
  }
  if (d == 3) {
    int octant = (v[0] < 0 ? 1 : 0) | (v[1] < 0 ? 2 : 0) | (v[2] < 0 ? 4 : 0);
    double ax = std::fabs(v[0]), ay = std::fabs(v[1]), az = std::fabs(v[2]);
    double s = ax + ay + az;
    int sub = 3;  // middle triangle
    if (2 * ax >= s) sub = 0;
    else if (2 * ay >= s) sub = 1;
    else if (2 * az >= s) sub = 2;
    return octant * 4 + sub;
  }
  throw Error("cone marking supports d = 2 or 3");
}

inline int cone_count(std::size_t d) {
  if (d == 2) return 6;
  if (d == 3) return 32;
  throw Error("cone marking supports d = 2 or 3");
}

/// Marks, for each failed q (in id order) and each cone, the ceil(1/alpha)
/// closest surviving non-failed points of q + cone (ties by lower id).
/// Returns F, which contains B and every point of the ball shadow.
inline VertexSet cone_mark_unsafe(const PointSet& P, const VertexSet& B, const Ratio& alpha) {
  check_threshold(alpha);
  const std::size_t n = P.size(), d = P.dim();
  const int cones = cone_count(d);
  const auto take = static_cast<std::size_t>(alpha.ceil_inverse());
  auto bad = B.mask(n);
  std::vector<char> working(n, 1), marked(n, 0);
  std::vector<std::vector<std::pair<double, Vertex>>> bucket(static_cast<std::size_t>(cones));
  std::vector<double> dir(d);
  for (Vertex q : B) {
    marked[q] = 1;
    working[q] = 0;
    for (auto& b : bucket) b.clear();
    for (std::size_t x = 0; x < n; ++x) {
      if (!working[x] || bad[x]) continue;
      for (std::size_t k = 0; k < d; ++k) dir[k] = P[x][k] - P[q][k];
      bucket[static_cast<std::size_t>(cone_index(dir.data(), d))].emplace_back(P.dist(q, x), static_cast<Vertex>(x));
    }
    for (auto& b : bucket) {
      std::size_t t = std::min(take, b.size());
      std::partial_sort(b.begin(), b.begin() + static_cast<std::ptrdiff_t>(t), b.end());
      for (std::size_t i = 0; i < t; ++i) {
        marked[b[i].second] = 1;
        working[b[i].second] = 0;
      }
    }
  }
  return VertexSet::from_mask(marked, SetRole::harmed);
}

}  // namespace rspan

#endif  // RSPAN_SHADOW_HPP
