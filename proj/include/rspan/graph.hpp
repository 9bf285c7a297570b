#ifndef RSPAN_GRAPH_HPP
#define RSPAN_GRAPH_HPP

#include <algorithm>
#include <bit>
#include <cmath>
#include <cstddef>
#include <cstdint>
#include <limits>
#include <numeric>
#include <queue>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "rspan/error.hpp"

namespace rspan {

using Vertex = std::uint32_t;

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Relative tolerance for comparing floating path lengths against distances.
inline constexpr double kLengthTolerance = 1e-9;

// ---------------------------------------------------------------------------
// VertexSet

enum class SetRole { generic, failure, harmed, shadow };

/// Sorted, deduplicated list of vertex ids.
class VertexSet {
 public:
  VertexSet() = default;
  explicit VertexSet(std::vector<Vertex> ids, SetRole role = SetRole::generic) : ids_(std::move(ids)), role_(role) {
    std::sort(ids_.begin(), ids_.end());
    ids_.erase(std::unique(ids_.begin(), ids_.end()), ids_.end());
  }
  VertexSet(std::initializer_list<Vertex> ids) : VertexSet(std::vector<Vertex>(ids)) {}

  static VertexSet from_mask(const std::vector<char>& mask, SetRole role = SetRole::generic) {
    VertexSet s;
    s.role_ = role;
    for (std::size_t i = 0; i < mask.size(); ++i)
      if (mask[i]) s.ids_.push_back(static_cast<Vertex>(i));
    return s;
  }

  [[nodiscard]] std::size_t size() const { return ids_.size(); }
  [[nodiscard]] bool empty() const { return ids_.empty(); }
  [[nodiscard]] bool contains(Vertex v) const { return std::binary_search(ids_.begin(), ids_.end(), v); }
  [[nodiscard]] const std::vector<Vertex>& ids() const { return ids_; }
  [[nodiscard]] auto begin() const { return ids_.begin(); }
  [[nodiscard]] auto end() const { return ids_.end(); }
  [[nodiscard]] SetRole role() const { return role_; }
  VertexSet& with_role(SetRole r) {
    role_ = r;
    return *this;
  }

  /// Membership mask over [0, n); throws if an id is out of range.
  [[nodiscard]] std::vector<char> mask(std::size_t n) const {
    std::vector<char> m(n, 0);
    for (Vertex v : ids_) {
      if (v >= n) throw Error("vertex " + std::to_string(v) + " out of range [0, " + std::to_string(n) + ")");
      m[v] = 1;
    }
    return m;
  }

  [[nodiscard]] bool subset_of(const VertexSet& other) const {
    return std::includes(other.ids_.begin(), other.ids_.end(), ids_.begin(), ids_.end());
  }

  [[nodiscard]] VertexSet unite(const VertexSet& other) const {
    VertexSet out;
    out.role_ = role_;
    std::set_union(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out.ids_));
    return out;
  }

  [[nodiscard]] VertexSet minus(const VertexSet& other) const {
    VertexSet out;
    out.role_ = role_;
    std::set_difference(ids_.begin(), ids_.end(), other.ids_.begin(), other.ids_.end(), std::back_inserter(out.ids_));
    return out;
  }

  friend bool operator==(const VertexSet& a, const VertexSet& b) { return a.ids_ == b.ids_; }

 private:
  std::vector<Vertex> ids_;
  SetRole role_ = SetRole::generic;
};

// ---------------------------------------------------------------------------
// PointSet

/// n points in R^d stored row-major.
class PointSet {
 public:
  PointSet() = default;
  PointSet(std::size_t dim, std::vector<double> coords) : d_(dim), coords_(std::move(coords)) {
    if (d_ == 0) throw Error("point dimension must be positive");
    if (coords_.size() % d_ != 0) throw Error("coordinate count is not a multiple of the dimension");
    for (double c : coords_)
      if (!std::isfinite(c)) throw Error("non-finite coordinate");
    check_distinct();
  }

  [[nodiscard]] std::size_t dim() const { return d_; }
  [[nodiscard]] std::size_t size() const { return d_ == 0 ? 0 : coords_.size() / d_; }
  [[nodiscard]] std::span<const double> operator[](std::size_t i) const { return {coords_.data() + i * d_, d_}; }
  [[nodiscard]] const std::vector<double>& coords() const { return coords_; }

  [[nodiscard]] double dist(std::size_t i, std::size_t j) const {
    double s = 0.0;
    for (std::size_t k = 0; k < d_; ++k) {
      double t = coords_[i * d_ + k] - coords_[j * d_ + k];
      s += t * t;
    }
    return std::sqrt(s);
  }

  /// Brute force, O(n^2).
  [[nodiscard]] double diameter() const {
    double best = 0.0;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) best = std::max(best, dist(i, j));
    return best;
  }

  /// Brute force, O(n^2). Infinity for fewer than two points.
  [[nodiscard]] double closest_pair() const {
    double best = kInfinity;
    for (std::size_t i = 0; i < size(); ++i)
      for (std::size_t j = i + 1; j < size(); ++j) best = std::min(best, dist(i, j));
    return best;
  }

  [[nodiscard]] double spread() const {
    if (size() < 2) return 1.0;
    return diameter() / closest_pair();
  }

 private:
  void check_distinct() const {
    std::vector<std::size_t> idx(size());
    std::iota(idx.begin(), idx.end(), 0);
    auto row = [&](std::size_t i) { return std::span<const double>(coords_.data() + i * d_, d_); };
    std::sort(idx.begin(), idx.end(), [&](std::size_t a, std::size_t b) {
      auto ra = row(a), rb = row(b);
      return std::lexicographical_compare(ra.begin(), ra.end(), rb.begin(), rb.end());
    });
    for (std::size_t k = 1; k < idx.size(); ++k) {
      auto ra = row(idx[k - 1]), rb = row(idx[k]);
      if (std::equal(ra.begin(), ra.end(), rb.begin()))
        throw Error("duplicate points " + std::to_string(idx[k - 1]) + " and " + std::to_string(idx[k]));
    }
  }

  std::size_t d_ = 0;
  std::vector<double> coords_;
};

// ---------------------------------------------------------------------------
// WeightedGraph

struct Edge {
  Vertex u;
  Vertex v;
  double w;
  friend bool operator==(const Edge&, const Edge&) = default;
};

/// Immutable undirected graph in CSR form with sorted adjacency lists.
class WeightedGraph {
 public:
  WeightedGraph() : offset_(1, 0) {}

  /// Drops self-loops; of parallel edges keeps the smallest weight.
  static WeightedGraph from_edges(std::size_t n, std::vector<Edge> edges) {
    for (auto& e : edges) {
      if (e.u >= n || e.v >= n) throw Error("edge endpoint out of range");
      if (!(e.w >= 0.0)) throw Error("edge weight must be nonnegative");
      if (e.u > e.v) std::swap(e.u, e.v);
    }
    std::erase_if(edges, [](const Edge& e) { return e.u == e.v; });
    std::sort(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) {
      return std::tie(a.u, a.v, a.w) < std::tie(b.u, b.v, b.w);
    });
    edges.erase(std::unique(edges.begin(), edges.end(), [](const Edge& a, const Edge& b) { return a.u == b.u && a.v == b.v; }),
                edges.end());
    WeightedGraph g;
    g.offset_.assign(n + 1, 0);
    for (const auto& e : edges) {
      ++g.offset_[e.u + 1];
      ++g.offset_[e.v + 1];
    }
    std::partial_sum(g.offset_.begin(), g.offset_.end(), g.offset_.begin());
    g.adj_.resize(2 * edges.size());
    g.wt_.resize(2 * edges.size());
    std::vector<std::size_t> fill(g.offset_.begin(), g.offset_.end() - 1);
    // edges sorted by (u, v): appending v to u's list and u to v's list keeps both sorted
    // for the u side; the v side receives u values in increasing order as well.
    for (const auto& e : edges) {
      g.adj_[fill[e.u]] = e.v;
      g.wt_[fill[e.u]++] = e.w;
    }
    for (const auto& e : edges) {
      g.adj_[fill[e.v]] = e.u;
      g.wt_[fill[e.v]++] = e.w;
    }
    for (std::size_t u = 0; u < n; ++u) g.sort_row(u);
    return g;
  }

  /// Assembles from per-vertex sorted neighbor lists (already symmetric).
  template <class WeightFn>
  static WeightedGraph from_sorted_rows(std::vector<std::size_t> offset, std::vector<Vertex> adj, WeightFn&& weight) {
    WeightedGraph g;
    g.offset_ = std::move(offset);
    g.adj_ = std::move(adj);
    g.wt_.resize(g.adj_.size());
    for (std::size_t u = 0; u + 1 < g.offset_.size(); ++u)
      for (std::size_t k = g.offset_[u]; k < g.offset_[u + 1]; ++k) g.wt_[k] = weight(static_cast<Vertex>(u), g.adj_[k]);
    return g;
  }

  [[nodiscard]] std::size_t n() const { return offset_.size() - 1; }
  [[nodiscard]] std::size_t num_edges() const { return adj_.size() / 2; }
  [[nodiscard]] std::size_t degree(Vertex u) const { return offset_[u + 1] - offset_[u]; }
  [[nodiscard]] std::span<const Vertex> neighbors(Vertex u) const {
    return {adj_.data() + offset_[u], offset_[u + 1] - offset_[u]};
  }
  [[nodiscard]] std::span<const double> weights(Vertex u) const {
    return {wt_.data() + offset_[u], offset_[u + 1] - offset_[u]};
  }

  [[nodiscard]] bool has_edge(Vertex u, Vertex v) const {
    if (u >= n() || v >= n()) return false;
    auto row = neighbors(u);
    return std::binary_search(row.begin(), row.end(), v);
  }

  [[nodiscard]] double edge_weight(Vertex u, Vertex v) const {
    auto row = neighbors(u);
    auto it = std::lower_bound(row.begin(), row.end(), v);
    if (it == row.end() || *it != v) return kInfinity;
    return weights(u)[static_cast<std::size_t>(it - row.begin())];
  }

  /// Edges with u < v in lexicographic order.
  [[nodiscard]] std::vector<Edge> edges() const {
    std::vector<Edge> out;
    out.reserve(num_edges());
    for (Vertex u = 0; u < n(); ++u) {
      auto row = neighbors(u);
      auto w = weights(u);
      for (std::size_t k = 0; k < row.size(); ++k)
        if (row[k] > u) out.push_back({u, row[k], w[k]});
    }
    return out;
  }

  /// Subgraph induced by vertices [0, m).
  [[nodiscard]] WeightedGraph induced_prefix(std::size_t m) const {
    if (m > n()) throw Error("prefix larger than the graph");
    WeightedGraph g;
    g.offset_.assign(m + 1, 0);
    for (Vertex u = 0; u < m; ++u) {
      auto row = neighbors(u);
      auto w = weights(u);
      for (std::size_t k = 0; k < row.size() && row[k] < m; ++k) {
        g.adj_.push_back(row[k]);
        g.wt_.push_back(w[k]);
      }
      g.offset_[u + 1] = g.adj_.size();
    }
    return g;
  }

  friend bool operator==(const WeightedGraph& a, const WeightedGraph& b) {
    return a.offset_ == b.offset_ && a.adj_ == b.adj_ && a.wt_ == b.wt_;
  }

 private:
  void sort_row(std::size_t u) {
    std::size_t lo = offset_[u], hi = offset_[u + 1];
    if (std::is_sorted(adj_.begin() + static_cast<std::ptrdiff_t>(lo), adj_.begin() + static_cast<std::ptrdiff_t>(hi)))
      return;
    std::vector<std::pair<Vertex, double>> tmp;
    for (std::size_t k = lo; k < hi; ++k) tmp.emplace_back(adj_[k], wt_[k]);
    std::sort(tmp.begin(), tmp.end());
    for (std::size_t k = lo; k < hi; ++k) std::tie(adj_[k], wt_[k]) = tmp[k - lo];
  }

  std::vector<std::size_t> offset_;
  std::vector<Vertex> adj_;
  std::vector<double> wt_;
};

// ---------------------------------------------------------------------------
// Dense bit rows shared by the edge accumulator and the 1D path oracle.

class BitMatrix {
 public:
  BitMatrix() = default;
  explicit BitMatrix(std::size_t n) : n_(n), wpr_((n + 63) / 64), bits_(n * wpr_, 0) {}

  [[nodiscard]] std::size_t n() const { return n_; }
  [[nodiscard]] std::size_t words_per_row() const { return wpr_; }
  [[nodiscard]] std::uint64_t* row(std::size_t u) { return bits_.data() + u * wpr_; }
  [[nodiscard]] const std::uint64_t* row(std::size_t u) const { return bits_.data() + u * wpr_; }

  void set(std::size_t u, std::size_t v) { row(u)[v >> 6] |= std::uint64_t{1} << (v & 63); }
  [[nodiscard]] bool test(std::size_t u, std::size_t v) const { return (row(u)[v >> 6] >> (v & 63)) & 1U; }

  /// Sets bits [lo, hi) of row u.
  void set_range(std::size_t u, std::size_t lo, std::size_t hi) {
    if (lo >= hi) return;
    std::uint64_t* r = row(u);
    std::size_t wlo = lo >> 6, whi = (hi - 1) >> 6;
    std::uint64_t first = ~std::uint64_t{0} << (lo & 63);
    std::uint64_t last = ~std::uint64_t{0} >> (63 - ((hi - 1) & 63));
    if (wlo == whi) {
      r[wlo] |= first & last;
      return;
    }
    r[wlo] |= first;
    for (std::size_t w = wlo + 1; w < whi; ++w) r[w] = ~std::uint64_t{0};
    r[whi] |= last;
  }

  /// Makes the relation symmetric and irreflexive.
  void symmetrize() {
    for (std::size_t u = 0; u < n_; ++u) {
      const std::uint64_t* r = row(u);
      for (std::size_t w = 0; w < wpr_; ++w) {
        std::uint64_t word = r[w];
        while (word) {
          std::size_t v = (w << 6) + static_cast<std::size_t>(std::countr_zero(word));
          word &= word - 1;
          set(v, u);
        }
      }
    }
    for (std::size_t u = 0; u < n_; ++u) row(u)[u >> 6] &= ~(std::uint64_t{1} << (u & 63));
  }

 private:
  std::size_t n_ = 0;
  std::size_t wpr_ = 0;
  std::vector<std::uint64_t> bits_;
};

// ---------------------------------------------------------------------------
// EdgeSink: set-semantics edge accumulator used by every builder.

/// Above this many vertices the accumulator keeps a sorted pair list
/// instead of an n x n bit matrix.
inline constexpr std::size_t kDenseSinkLimit = 16384;

class EdgeSink {
 public:
  explicit EdgeSink(std::size_t n) : EdgeSink(n, n <= kDenseSinkLimit) {}
  EdgeSink(std::size_t n, bool dense) : n_(n), dense_(dense) {
    if (dense_) matrix_ = BitMatrix(n);
  }

  [[nodiscard]] std::size_t n() const { return n_; }

  void add(Vertex u, Vertex v) {
    if (u == v) return;
    if (dense_) {
      matrix_.set(u, v);
    } else {
      if (u > v) std::swap(u, v);
      pairs_.push_back((std::uint64_t{u} << 32) | v);
      maybe_compact();
    }
  }

  /// Adds u-x for every x in others (sorted, distinct).
  void add_all(Vertex u, std::span<const Vertex> others) {
    if (others.empty()) return;
    if (dense_ && others.back() - others.front() + 1 == others.size()) {
      matrix_.set_range(u, others.front(), std::size_t{others.back()} + 1);
      return;
    }
    for (Vertex x : others) add(u, x);
  }

  template <class WeightFn>
  [[nodiscard]] WeightedGraph finish(WeightFn&& weight) && {
    std::vector<std::size_t> offset(n_ + 1, 0);
    std::vector<Vertex> adj;
    if (dense_) {
      matrix_.symmetrize();
      std::size_t total = 0;
      for (std::size_t u = 0; u < n_; ++u) {
        const std::uint64_t* r = matrix_.row(u);
        for (std::size_t w = 0; w < matrix_.words_per_row(); ++w) total += static_cast<std::size_t>(std::popcount(r[w]));
      }
      adj.reserve(total);
      for (std::size_t u = 0; u < n_; ++u) {
        const std::uint64_t* r = matrix_.row(u);
        for (std::size_t w = 0; w < matrix_.words_per_row(); ++w) {
          std::uint64_t word = r[w];
          while (word) {
            adj.push_back(static_cast<Vertex>((w << 6) + static_cast<std::size_t>(std::countr_zero(word))));
            word &= word - 1;
          }
        }
        offset[u + 1] = adj.size();
      }
      matrix_ = BitMatrix();
    } else {
      compact();
      for (auto p : pairs_) {
        ++offset[(p >> 32) + 1];
        ++offset[(p & 0xFFFFFFFFULL) + 1];
      }
      std::partial_sum(offset.begin(), offset.end(), offset.begin());
      adj.resize(2 * pairs_.size());
      std::vector<std::size_t> fill(offset.begin(), offset.end() - 1);
      // pairs sorted by (u, v): lists for the smaller endpoint receive v ascending,
      // lists for the larger endpoint receive u ascending, but the two streams
      // interleave, so each row gets merged below.
      for (auto p : pairs_) adj[fill[p & 0xFFFFFFFFULL]++] = static_cast<Vertex>(p >> 32);
      for (auto p : pairs_) adj[fill[p >> 32]++] = static_cast<Vertex>(p & 0xFFFFFFFFULL);
      for (std::size_t u = 0; u < n_; ++u)
        std::sort(adj.begin() + static_cast<std::ptrdiff_t>(offset[u]), adj.begin() + static_cast<std::ptrdiff_t>(offset[u + 1]));
      pairs_.clear();
      pairs_.shrink_to_fit();
    }
    return WeightedGraph::from_sorted_rows(std::move(offset), std::move(adj), weight);
  }

 private:
  void maybe_compact() {
    if (pairs_.size() >= compact_at_) {
      compact();
      compact_at_ = std::max<std::size_t>(compact_at_, 2 * pairs_.size());
    }
  }
  void compact() {
    std::sort(pairs_.begin(), pairs_.end());
    pairs_.erase(std::unique(pairs_.begin(), pairs_.end()), pairs_.end());
  }

  std::size_t n_;
  bool dense_;
  BitMatrix matrix_;
  std::vector<std::uint64_t> pairs_;
  std::size_t compact_at_ = std::size_t{1} << 24;
};

/// Weight of 1D graphs: vertex i sits at position i+1 on the line.
struct LineWeight {
  double operator()(Vertex u, Vertex v) const { return u > v ? double(u - v) : double(v - u); }
};

struct EuclideanWeight {
  const PointSet* points;
  double operator()(Vertex u, Vertex v) const { return points->dist(u, v); }
};

// ---------------------------------------------------------------------------
// Path oracles

/// Dijkstra in the subgraph induced by vertices with alive[v] != 0.
/// Dead and unreachable vertices get +inf. Stops expanding past max_dist.
inline std::vector<double> shortest_path_length(const WeightedGraph& g, const std::vector<char>& alive, Vertex source,
                                                double max_dist = kInfinity) {
  if (source >= g.n()) throw Error("source out of range");
  if (!alive[source]) throw Error("source in failure set");
  std::vector<double> dist(g.n(), kInfinity);
  using Item = std::pair<double, Vertex>;
  std::priority_queue<Item, std::vector<Item>, std::greater<>> heap;
  dist[source] = 0.0;
  heap.emplace(0.0, source);
  while (!heap.empty()) {
    auto [d, u] = heap.top();
    heap.pop();
    if (d > dist[u]) continue;
    auto row = g.neighbors(u);
    auto w = g.weights(u);
    for (std::size_t k = 0; k < row.size(); ++k) {
      Vertex v = row[k];
      if (!alive[v]) continue;
      double nd = d + w[k];
      if (nd < dist[v] && nd <= max_dist) {
        dist[v] = nd;
        heap.emplace(nd, v);
      }
    }
  }
  return dist;
}

inline std::vector<double> shortest_path_length(const WeightedGraph& g, const VertexSet& failed, Vertex source) {
  auto dead = failed.mask(g.n());
  std::vector<char> alive(g.n());
  for (std::size_t i = 0; i < alive.size(); ++i) alive[i] = !dead[i];
  return shortest_path_length(g, alive, source);
}

enum class Direction { left, right };

/// Vertices t not in B reachable from source along a path whose positions
/// strictly increase (right) or decrease (left). On the line such paths are
/// exactly the 1-paths.
inline VertexSet monotone_reach_1d(const WeightedGraph& g, const VertexSet& failed, Vertex source, Direction dir) {
  auto dead = failed.mask(g.n());
  if (source >= g.n()) throw Error("source out of range");
  if (dead[source]) throw Error("source in failure set");
  std::vector<char> seen(g.n(), 0);
  std::vector<Vertex> stack{source};
  seen[source] = 1;
  while (!stack.empty()) {
    Vertex u = stack.back();
    stack.pop_back();
    for (Vertex v : g.neighbors(u)) {
      bool forward = dir == Direction::right ? v > u : v < u;
      if (forward && !dead[v] && !seen[v]) {
        seen[v] = 1;
        stack.push_back(v);
      }
    }
  }
  seen[source] = 0;
  return VertexSet::from_mask(seen);
}

/// Bit-row adjacency for all-pairs monotone hop computations on line graphs.
class MonotoneHopOracle {
 public:
  static constexpr std::uint16_t kUnreachable = 0xFFFF;

  MonotoneHopOracle(const WeightedGraph& g, const std::vector<char>& alive) : adj_(g.n()), alive_(g.n()) {
    for (Vertex u = 0; u < g.n(); ++u) {
      if (!alive[u]) continue;
      alive_.set(0, u);
      for (Vertex v : g.neighbors(u))
        if (alive[v]) adj_.set(u, v);
    }
  }

  [[nodiscard]] std::size_t n() const { return adj_.n(); }

  /// Minimum hop count of a rightward monotone path from s to every t > s
  /// (kUnreachable when none). hops[t] is written for t > s only.
  void hops_from(Vertex s, std::vector<std::uint16_t>& hops) const {
    const std::size_t n = adj_.n(), wpr = adj_.words_per_row();
    hops.assign(n, kUnreachable);
    if (!alive_.test(0, s)) throw Error("source in failure set");
    // todo: alive vertices > s not reached yet; frontier: reached at the current depth
    std::vector<std::uint64_t> todo(wpr, 0), frontier(wpr, 0), next(wpr, 0);
    const std::uint64_t* alive = alive_.row(0);
    for (std::size_t w = s >> 6; w < wpr; ++w) todo[w] = alive[w];
    todo[s >> 6] &= (s & 63) == 63 ? 0 : (~std::uint64_t{0} << ((s & 63) + 1));
    std::size_t todo_count = 0;
    for (auto w : todo) todo_count += static_cast<std::size_t>(std::popcount(w));
    frontier[s >> 6] = std::uint64_t{1} << (s & 63);
    std::size_t frontier_count = 1;
    for (std::uint16_t depth = 1; todo_count > 0 && frontier_count > 0 && depth < kUnreachable; ++depth) {
      std::fill(next.begin(), next.end(), 0);
      if (frontier_count <= todo_count) {
        for (std::size_t w = 0; w < wpr; ++w) {
          std::uint64_t word = frontier[w];
          while (word) {
            std::size_t u = (w << 6) + static_cast<std::size_t>(std::countr_zero(word));
            word &= word - 1;
            const std::uint64_t* r = adj_.row(u);
            std::size_t uw = u >> 6;
            std::uint64_t above = (u & 63) == 63 ? 0 : (~std::uint64_t{0} << ((u & 63) + 1));
            next[uw] |= r[uw] & above & todo[uw];
            for (std::size_t x = uw + 1; x < wpr; ++x) next[x] |= r[x] & todo[x];
          }
        }
      } else {
        for (std::size_t w = 0; w < wpr; ++w) {
          std::uint64_t word = todo[w];
          while (word) {
            std::size_t t = (w << 6) + static_cast<std::size_t>(std::countr_zero(word));
            word &= word - 1;
            const std::uint64_t* r = adj_.row(t);
            std::size_t tw = t >> 6;
            bool hit = (r[tw] & frontier[tw] & ((std::uint64_t{1} << (t & 63)) - 1)) != 0;
            for (std::size_t x = 0; !hit && x < tw; ++x) hit = (r[x] & frontier[x]) != 0;
            if (hit) next[tw] |= std::uint64_t{1} << (t & 63);
          }
        }
      }
      frontier_count = 0;
      for (std::size_t w = 0; w < wpr; ++w) {
        std::uint64_t word = next[w];
        frontier_count += static_cast<std::size_t>(std::popcount(word));
        todo[w] &= ~word;
        while (word) {
          hops[(w << 6) + static_cast<std::size_t>(std::countr_zero(word))] = depth;
          word &= word - 1;
        }
      }
      todo_count -= frontier_count;
      std::swap(frontier, next);
    }
  }

 private:
  BitMatrix adj_;
  BitMatrix alive_{1};
};

}  // namespace rspan

#endif  // RSPAN_GRAPH_HPP
