#ifndef RSPAN_QUADTREE_HPP
#define RSPAN_QUADTREE_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <vector>

#include "rspan/error.hpp"
#include "rspan/graph.hpp"

namespace rspan {

/// Points mapped into [0.125, 0.875)^d by one translation and one uniform
/// scale. normalized distance = original distance * scale.
struct NormalizedPoints {
  std::size_t d = 0;
  std::vector<double> coords;  // row-major, normalized
  std::vector<double> origin;  // per-axis minimum of the input
  double scale = 1.0;

  [[nodiscard]] std::size_t size() const { return d == 0 ? 0 : coords.size() / d; }
  [[nodiscard]] const double* operator[](std::size_t i) const { return coords.data() + i * d; }
};

inline NormalizedPoints normalize_points(const PointSet& p) {
  NormalizedPoints out;
  out.d = p.dim();
  const std::size_t n = p.size();
  out.origin.assign(out.d, std::numeric_limits<double>::infinity());
  std::vector<double> hi(out.d, -std::numeric_limits<double>::infinity());
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < out.d; ++k) {
      out.origin[k] = std::min(out.origin[k], p[i][k]);
      hi[k] = std::max(hi[k], p[i][k]);
    }
  double extent = 0.0;
  for (std::size_t k = 0; k < out.d; ++k) extent = std::max(extent, hi[k] - out.origin[k]);
  if (!(extent > 0.0)) extent = 1.0;
  // the largest coordinate lands just below 0.875
  out.scale = 0.75 * (1.0 - 0x1.0p-30) / extent;
  out.coords.resize(n * out.d);
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t k = 0; k < out.d; ++k) out.coords[i * out.d + k] = 0.125 + (p[i][k] - out.origin[k]) * out.scale;
  return out;
}

namespace detail {

/// True if a precedes b in Z-order (interleaved bits, axis 0 most
/// significant within a level). Uses the most-significant-differing-axis
/// trick, so no interleaved key is materialized.
inline bool morton_less(const std::uint32_t* a, const std::uint32_t* b, std::size_t d) {
  std::size_t axis = 0;
  std::uint32_t best = 0;
  for (std::size_t k = 0; k < d; ++k) {
    std::uint32_t x = a[k] ^ b[k];
    // x has a higher top bit than best, or equal top bit and earlier axis wins
    if (best < x && best < (best ^ x)) {
      axis = k;
      best = x;
    }
  }
  return a[axis] < b[axis];
}

}  // namespace detail

/// Compressed quadtree: every internal node has at least two children and
/// stores the smallest grid cell containing its points. Leaves hold exactly
/// one point and are treated as that point (diameter zero).
class Quadtree {
 public:
  static constexpr int kBits = 32;

  struct Node {
    std::uint32_t lo = 0, hi = 0;  // P_v = order[lo, hi)
    int level = 0;                 // cell side 2^-level (internal nodes)
    std::int64_t parent = -1;
    std::uint32_t child_begin = 0, child_end = 0;  // into child_ids
    [[nodiscard]] bool leaf() const { return hi - lo == 1; }
    [[nodiscard]] std::uint32_t size() const { return hi - lo; }
  };

  Quadtree() = default;

  explicit Quadtree(const PointSet& p) : points_(normalize_points(p)) {
    const std::size_t n = points_.size(), d = points_.d;
    if (n == 0) throw Error("empty point set");
    quant_.resize(n * d);
    for (std::size_t i = 0; i < n * d; ++i) {
      double x = points_.coords[i] * 0x1.0p32;
      quant_[i] = static_cast<std::uint32_t>(std::min(x, 4294967295.0));
    }
    order_.resize(n);
    std::iota(order_.begin(), order_.end(), std::uint32_t{0});
    std::sort(order_.begin(), order_.end(), [&](std::uint32_t a, std::uint32_t b) {
      return detail::morton_less(&quant_[a * d], &quant_[b * d], d);
    });
    for (std::size_t i = 1; i < n; ++i)
      if (std::equal(&quant_[order_[i - 1] * d], &quant_[order_[i - 1] * d] + d, &quant_[order_[i] * d]))
        throw Error("points " + std::to_string(order_[i - 1]) + " and " + std::to_string(order_[i]) +
                    " collide at quadtree resolution (spread too large)");
    build();
    leaf_of_.resize(n);
    for (std::size_t v = 0; v < nodes_.size(); ++v)
      if (nodes_[v].leaf()) leaf_of_[order_[nodes_[v].lo]] = static_cast<std::uint32_t>(v);
  }

  [[nodiscard]] std::size_t dim() const { return points_.d; }
  [[nodiscard]] std::size_t num_points() const { return order_.size(); }
  [[nodiscard]] const NormalizedPoints& normalized() const { return points_; }
  [[nodiscard]] double scale() const { return points_.scale; }
  [[nodiscard]] const std::vector<Node>& nodes() const { return nodes_; }
  [[nodiscard]] const Node& node(std::size_t v) const { return nodes_[v]; }
  [[nodiscard]] std::size_t root() const { return 0; }
  [[nodiscard]] std::span<const std::uint32_t> children(std::size_t v) const {
    return {child_ids_.data() + nodes_[v].child_begin, nodes_[v].child_end - nodes_[v].child_begin};
  }
  /// Point ids of P_v.
  [[nodiscard]] std::span<const std::uint32_t> points_of(std::size_t v) const {
    return {order_.data() + nodes_[v].lo, nodes_[v].size()};
  }
  [[nodiscard]] const std::vector<std::uint32_t>& order() const { return order_; }
  [[nodiscard]] std::uint32_t leaf_of(std::uint32_t point) const { return leaf_of_[point]; }

  /// Normalized cell diameter; zero for leaves.
  [[nodiscard]] double cell_diameter(std::size_t v) const {
    if (nodes_[v].leaf()) return 0.0;
    return std::sqrt(static_cast<double>(points_.d)) * std::ldexp(1.0, -nodes_[v].level);
  }

  /// Normalized cell box [lo_k, hi_k] per axis; a leaf's box is its point.
  void cell_box(std::size_t v, double* lo, double* hi) const {
    const Node& nd = nodes_[v];
    const std::size_t d = points_.d;
    std::uint32_t p = order_[nd.lo];
    if (nd.leaf()) {
      for (std::size_t k = 0; k < d; ++k) lo[k] = hi[k] = points_.coords[p * d + k];
      return;
    }
    double side = std::ldexp(1.0, -nd.level);
    for (std::size_t k = 0; k < d; ++k) {
      std::uint32_t q = quant_[p * d + k];
      std::uint32_t corner = nd.level == 0 ? 0 : (q & ~(0xFFFFFFFFu >> nd.level));
      lo[k] = std::ldexp(static_cast<double>(corner), -kBits);
      hi[k] = lo[k] + side;
    }
  }

  /// Normalized distance between two cells (boxes).
  [[nodiscard]] double cell_distance(std::size_t u, std::size_t v) const {
    const std::size_t d = points_.d;
    std::vector<double> a(2 * d), b(2 * d);
    cell_box(u, a.data(), a.data() + d);
    cell_box(v, b.data(), b.data() + d);
    double s = 0.0;
    for (std::size_t k = 0; k < d; ++k) {
      double gap = std::max({0.0, b[k] - a[d + k], a[k] - b[d + k]});
      s += gap * gap;
    }
    return std::sqrt(s);
  }

  /// Number of proper ancestors.
  [[nodiscard]] std::size_t depth(std::size_t v) const {
    std::size_t dep = 0;
    for (auto p = nodes_[v].parent; p >= 0; p = nodes_[static_cast<std::size_t>(p)].parent) ++dep;
    return dep;
  }

 private:
  /// Number of leading bits shared by every axis of two quantized points.
  [[nodiscard]] int common_level(std::uint32_t a, std::uint32_t b) const {
    const std::size_t d = points_.d;
    int lvl = kBits;
    for (std::size_t k = 0; k < d; ++k) {
      std::uint32_t x = quant_[a * d + k] ^ quant_[b * d + k];
      lvl = std::min(lvl, x == 0 ? kBits : std::countl_zero(x));
    }
    return lvl;
  }

  void build() {
    const std::size_t d = points_.d;
    struct Task {
      std::uint32_t lo, hi;
      std::int64_t parent;
    };
    std::vector<Task> stack{{0, static_cast<std::uint32_t>(order_.size()), -1}};
    std::vector<std::vector<std::uint32_t>> kids;
    while (!stack.empty()) {
      Task t = stack.back();
      stack.pop_back();
      auto id = static_cast<std::uint32_t>(nodes_.size());
      Node nd;
      nd.lo = t.lo;
      nd.hi = t.hi;
      nd.parent = t.parent;
      nodes_.push_back(nd);
      kids.emplace_back();
      if (t.parent >= 0) kids[static_cast<std::size_t>(t.parent)].push_back(id);
      if (t.hi - t.lo == 1) {
        nodes_[id].level = kBits;
        continue;
      }
      int lvl = common_level(order_[t.lo], order_[t.hi - 1]);
      nodes_[id].level = lvl;
      // split by the bits at position lvl of every axis (child index)
      auto child_index = [&](std::uint32_t p) {
        std::uint32_t idx = 0;
        for (std::size_t k = 0; k < d; ++k) idx = (idx << 1) | ((quant_[p * d + k] >> (kBits - 1 - lvl)) & 1u);
        return idx;
      };
      std::vector<Task> children;
      std::uint32_t start = t.lo;
      for (std::uint32_t i = t.lo + 1; i <= t.hi; ++i)
        if (i == t.hi || child_index(order_[i]) != child_index(order_[start])) {
          children.push_back({start, i, id});
          start = i;
        }
      // push in reverse so children are created in Z-order
      for (auto it = children.rbegin(); it != children.rend(); ++it) stack.push_back(*it);
    }
    for (std::size_t v = 0; v < nodes_.size(); ++v) {
      nodes_[v].child_begin = static_cast<std::uint32_t>(child_ids_.size());
      child_ids_.insert(child_ids_.end(), kids[v].begin(), kids[v].end());
      nodes_[v].child_end = static_cast<std::uint32_t>(child_ids_.size());
    }
  }

  NormalizedPoints points_;
  std::vector<std::uint32_t> quant_;
  std::vector<std::uint32_t> order_;
  std::vector<Node> nodes_;
  std::vector<std::uint32_t> child_ids_;
  std::vector<std::uint32_t> leaf_of_;
};

struct WspdPair {
  std::uint32_t u, v;
};

/// s-WSPD over the quadtree: a pair is emitted once
/// s * max(diam(cell_u), diam(cell_v)) <= dist(cell_u, cell_v); otherwise
/// the node with the larger cell is split.
inline std::vector<WspdPair> build_wspd(const Quadtree& tree, double s) {
  if (!(s > 0.0)) throw Error("separation must be positive");
  std::vector<WspdPair> out;
  std::vector<WspdPair> stack;
  for (std::size_t v = 0; v < tree.nodes().size(); ++v) {
    auto ch = tree.children(v);
    for (std::size_t a = 0; a < ch.size(); ++a)
      for (std::size_t b = a + 1; b < ch.size(); ++b) stack.push_back({ch[a], ch[b]});
  }
  std::reverse(stack.begin(), stack.end());
  while (!stack.empty()) {
    WspdPair p = stack.back();
    stack.pop_back();
    double du = tree.cell_diameter(p.u), dv = tree.cell_diameter(p.v);
    if (s * std::max(du, dv) <= tree.cell_distance(p.u, p.v)) {
      out.push_back(p);
      continue;
    }
    bool split_u = du >= dv;
    std::uint32_t big = split_u ? p.u : p.v, other = split_u ? p.v : p.u;
    auto ch = tree.children(big);
    for (auto it = ch.rbegin(); it != ch.rend(); ++it) stack.push_back(split_u ? WspdPair{*it, other} : WspdPair{other, *it});
  }
  return out;
}

/// Log2 of the spread; throws when it exceeds the supported range.
inline double checked_log2_spread(const PointSet& p) {
  if (p.size() < 2) return 0.0;
  double spread = p.spread();
  double lg = std::log2(spread);
  if (lg > 60.0) throw Error("spread too large: log2(spread) = " + std::to_string(lg) + " exceeds 60");
  return lg;
}

}  // namespace rspan

#endif  // RSPAN_QUADTREE_HPP
