#ifndef RSPAN_SPANNER1D_HPP
#define RSPAN_SPANNER1D_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rspan/error.hpp"
#include "rspan/expanders.hpp"
#include "rspan/graph.hpp"
#include "rspan/ratio.hpp"
#include "rspan/rng.hpp"

namespace rspan {

/// Smallest power of two >= x (x >= 1).
inline std::uint64_t pow2_at_least(std::uint64_t x) { return x <= 1 ? 1 : std::bit_ceil(x); }

/// Smallest power of two >= r, saturating at 2^62.
inline std::uint64_t pow2_at_least(const Ratio& r) {
  std::uint64_t p = 1;
  // p >= num/den  <=>  p * den >= num
  while (static_cast<__int128>(p) * r.den < r.num && p < (std::uint64_t{1} << 62)) p <<= 1;
  return p;
}

/// Closed range of line positions [lo, hi]; empty when lo > hi.
struct IntervalBlock {
  std::int64_t lo = 1, hi = 0;
  [[nodiscard]] bool empty() const { return lo > hi; }
  [[nodiscard]] std::int64_t size() const { return empty() ? 0 : hi - lo + 1; }
  [[nodiscard]] bool contains(std::int64_t x) const { return lo <= x && x <= hi; }
  friend bool operator==(const IntervalBlock&, const IntervalBlock&) = default;
};

/// Dyadic blocks over positions [1, n_padded]: level i has blocks of size 2^i.
class BlockTree {
 public:
  explicit BlockTree(std::uint64_t n) : n_padded_(pow2_at_least(std::max<std::uint64_t>(n, 1))) {
    height_ = std::countr_zero(n_padded_);
  }

  [[nodiscard]] std::uint64_t n_padded() const { return n_padded_; }
  [[nodiscard]] int height() const { return height_; }
  [[nodiscard]] std::uint64_t blocks_at(int level) const { return n_padded_ >> level; }

  /// k-th block (0-based) at a level.
  [[nodiscard]] IntervalBlock block(int level, std::uint64_t k) const {
    auto size = std::int64_t{1} << level;
    return {static_cast<std::int64_t>(k) * size + 1, static_cast<std::int64_t>(k + 1) * size};
  }

  [[nodiscard]] std::vector<IntervalBlock> level(int lvl) const {
    std::vector<IntervalBlock> out;
    for (std::uint64_t k = 0; k < blocks_at(lvl); ++k) out.push_back(block(lvl, k));
    return out;
  }

 private:
  std::uint64_t n_padded_;
  int height_;
};

struct CanonicalWalk {
  std::vector<IntervalBlock> ascent;   // I_0 .. I_l
  std::vector<IntervalBlock> descent;  // J_l .. J_0
};

/// Ascend/meet/descend walk between leaves i < j (1-based positions).
/// Rules are tried in order each step: (A) stop when the active blocks are
/// neighbors, (B) a right-child I moves to next(I), (C) a left-child J moves
/// to prev(J), (D) both move to their parents.
inline CanonicalWalk canonical_walk(std::uint64_t n, std::int64_t i, std::int64_t j) {
  BlockTree tree(n);
  auto np = static_cast<std::int64_t>(tree.n_padded());
  if (i >= j) throw Error("canonical walk needs i < j");
  if (i < 1 || j > np) throw Error("canonical walk positions out of range");
  // block = (level, index)
  int level = 0;
  std::int64_t bi = i - 1, bj = j - 1;
  CanonicalWalk walk;
  auto push = [&](std::vector<IntervalBlock>& v, std::int64_t k) {
    IntervalBlock b = tree.block(level, static_cast<std::uint64_t>(k));
    if (v.empty() || !(v.back() == b)) v.push_back(b);
  };
  std::vector<IntervalBlock> desc_rev;
  push(walk.ascent, bi);
  push(desc_rev, bj);
  while (true) {
    if (bj - bi == 1) break;
    if (bi % 2 == 1) {
      ++bi;
    } else if (bj % 2 == 0) {
      --bj;
    } else {
      bi /= 2;
      bj /= 2;
      ++level;
    }
    push(walk.ascent, bi);
    push(desc_rev, bj);
  }
  walk.descent.assign(desc_rev.rbegin(), desc_rev.rend());
  return walk;
}

struct Spanner1dInfo {
  std::string construction;  // "1d-const" or "1d-theta"
  std::size_t n = 0;
  std::uint64_t n_padded = 0;
  Ratio xi;
  std::int64_t degree_constant = 0;  // per-expander c
  std::uint64_t expanders = 0;
  std::uint64_t edge_budget = 0;     // analytic pre-dedup sampling budget
  // 1d-theta only
  Ratio theta;
  std::int64_t c = 0;
  std::uint64_t N = 0;
  std::string mode;    // "faithful" or "experimental"
  std::string regime;  // "standard", "near-clique" (N >= n) or "complete" (G_0 covers all pairs)
  std::vector<std::string> warnings;
};

struct Spanner1dBuild {
  WeightedGraph graph;
  Spanner1dInfo info;
};

namespace detail {
inline constexpr std::uint64_t kTagH = 0x48;
inline constexpr std::uint64_t kTagTheta = 0x47;

inline std::vector<Vertex> id_range(std::int64_t lo, std::int64_t hi) {
  std::vector<Vertex> v;
  for (std::int64_t p = lo; p <= hi; ++p) v.push_back(static_cast<Vertex>(p - 1));
  return v;
}
}  // namespace detail

/// Per-level analytic budget: sum over levels of (pairs) * c * 2 * 2^i.
inline std::uint64_t h_edge_budget(std::size_t n, std::int64_t c) {
  BlockTree tree(n);
  std::uint64_t total = 0;
  for (int lvl = 0; lvl < tree.height(); ++lvl) {
    std::uint64_t pairs = tree.blocks_at(lvl) - 1;
    total += detail::sat_mul(pairs, detail::sat_mul(static_cast<std::uint64_t>(c), 2ULL << lvl));
  }
  return total;
}

/// Expander between every two neighboring blocks of every level of the
/// dyadic tree over pow2(n) positions, then restricted to [1..n].
inline Spanner1dBuild build_H(std::size_t n, const Ratio& xi, std::uint64_t seed,
                              std::optional<std::int64_t> degree_override = std::nullopt) {
  if (n < 2) throw Error("build_H needs n >= 2");
  BlockTree tree(n);
  Spanner1dBuild out;
  auto& info = out.info;
  info.construction = "1d-const";
  info.n = n;
  info.n_padded = tree.n_padded();
  info.xi = xi;
  info.degree_constant = degree_override ? *degree_override : bipartite_constant(xi);
  info.mode = degree_override ? "experimental" : "faithful";
  if (info.degree_constant < 1) throw Error("degree constant override must be at least 1");
  info.edge_budget = h_edge_budget(n, info.degree_constant);
  EdgeSink sink(tree.n_padded());
  for (int lvl = 0; lvl < tree.height(); ++lvl) {
    for (std::uint64_t k = 0; k + 1 < tree.blocks_at(lvl); ++k) {
      auto a = tree.block(lvl, k), b = tree.block(lvl, k + 1);
      // edges leaving [1..n] are deleted afterwards; skip pairs entirely beyond n
      if (a.lo > static_cast<std::int64_t>(n)) break;
      auto L = detail::id_range(a.lo, a.hi), R = detail::id_range(b.lo, b.hi);
      sample_bipartite_into(sink, L, R, info.degree_constant, split_key(seed, {detail::kTagH, std::uint64_t(lvl), k}));
      ++info.expanders;
    }
  }
  auto full = std::move(sink).finish(LineWeight{});
  out.graph = n == tree.n_padded() ? std::move(full) : full.induced_prefix(n);
  info.regime = "standard";
  return out;
}

/// Shift and interval arithmetic of the shifted-interval construction.
class ShiftedLayout {
 public:
  ShiftedLayout(std::size_t n, std::uint64_t N) : n_(n), n_padded_(pow2_at_least(n)), N_(N) {
    if (!std::has_single_bit(N)) throw Error("N must be a power of two");
  }

  [[nodiscard]] std::uint64_t N() const { return N_; }
  [[nodiscard]] int log_N() const { return std::countr_zero(N_); }
  [[nodiscard]] int log_n_padded() const { return std::countr_zero(n_padded_); }

  /// Shift(i, j) = 1 + (j-1) 2^i / N - 2^i, for j in [1..N] and 2^i >= N.
  [[nodiscard]] std::int64_t shift(int i, std::uint64_t j) const {
    auto len = std::int64_t{1} << i;
    return 1 + static_cast<std::int64_t>(j - 1) * (len / static_cast<std::int64_t>(N_)) - len;
  }

  /// k in [0 .. n_padded / 2^i].
  [[nodiscard]] std::uint64_t blocks_per_shift(int i) const { return (n_padded_ >> i) + 1; }

  /// Half-open [Shift + k 2^i, Shift + (k+1) 2^i) as a closed range, unclipped.
  [[nodiscard]] IntervalBlock interval(int i, std::uint64_t j, std::uint64_t k) const {
    auto len = std::int64_t{1} << i;
    std::int64_t lo = shift(i, j) + static_cast<std::int64_t>(k) * len;
    return {lo, lo + len - 1};
  }

  [[nodiscard]] IntervalBlock clipped(int i, std::uint64_t j, std::uint64_t k) const {
    auto b = interval(i, j, k);
    return {std::max<std::int64_t>(b.lo, 1), std::min<std::int64_t>(b.hi, static_cast<std::int64_t>(n_))};
  }

 private:
  std::size_t n_;
  std::uint64_t n_padded_;
  std::uint64_t N_;
};

/// N = pow2(c / theta^2).
inline std::uint64_t theta_N(const Ratio& theta, std::int64_t c) {
  __int128 num = static_cast<__int128>(c) * theta.den * theta.den;
  __int128 den = static_cast<__int128>(theta.num) * theta.num;
  if (num > (static_cast<__int128>(1) << 62) * den) return std::uint64_t{1} << 62;
  std::uint64_t p = 1;
  while (static_cast<__int128>(p) * den < num) p <<= 1;
  return p;
}

/// Smallest n for which G_0 is not already the complete graph.
inline std::uint64_t faithful_crossover(const Ratio& theta, std::int64_t c) {
  std::uint64_t N = theta_N(theta, c);
  return detail::sat_mul(3, N) + 2;
}

enum class BuildMode { faithful, experimental };

inline constexpr std::int64_t kFaithfulC = 512;

/// Shifted-interval construction: G_0 joins positions within distance 3N;
/// for each resolution i in [log N, log n_padded), shift j in [1..N] and k,
/// an expander with xi = 1/(32N) joins I(i,j,k) and I(i,j,k+1).
inline Spanner1dBuild build_G_theta(std::size_t n, const Ratio& theta, std::int64_t c, std::uint64_t seed,
                                    BuildMode mode = BuildMode::faithful) {
  if (n < 2) throw Error("build_G_theta needs n >= 2");
  if (theta.num <= 0 || theta.num >= theta.den) throw Error("theta must lie in (0,1)");
  if (c < 1) throw Error("c must be positive");
  if (mode == BuildMode::faithful && c < kFaithfulC)
    throw Error("faithful mode requires c >= 512; use experimental mode for smaller c");
  Spanner1dBuild out;
  auto& info = out.info;
  info.construction = "1d-theta";
  info.n = n;
  info.n_padded = pow2_at_least(n);
  info.theta = theta;
  info.c = c;
  info.mode = mode == BuildMode::faithful ? "faithful" : "experimental";
  info.N = theta_N(theta, c);
  const std::uint64_t N = info.N;
  if (N >= (std::uint64_t{1} << 40)) {
    info.xi = Ratio(1, std::int64_t{1} << 45);
    info.degree_constant = 0;
  } else {
    info.xi = Ratio(1, static_cast<std::int64_t>(32 * N));
    info.degree_constant = bipartite_constant(info.xi);
  }
  const std::uint64_t reach = detail::sat_mul(3, N);
  const bool complete = reach >= n - 1;
  if (N >= n)
    info.warnings.push_back("N = " + std::to_string(N) + " >= n = " + std::to_string(n) +
                            ": construction degenerates to the near-clique G_0");
  info.regime = complete ? "complete" : (N >= n ? "near-clique" : "standard");
  EdgeSink sink(n);
  // G_0
  for (std::uint64_t u = 0; u + 1 < n; ++u) {
    std::uint64_t hi = std::min<std::uint64_t>(n - 1, u + std::min<std::uint64_t>(reach, n));
    std::vector<Vertex> range;
    range.reserve(hi - u);
    for (std::uint64_t v = u + 1; v <= hi; ++v) range.push_back(static_cast<Vertex>(v));
    sink.add_all(static_cast<Vertex>(u), range);
  }
  info.edge_budget = detail::sat_mul(reach, n);
  if (!complete) {
    ShiftedLayout layout(n, N);
    for (int i = layout.log_N(); i < layout.log_n_padded(); ++i) {
      for (std::uint64_t j = 1; j <= N; ++j) {
        for (std::uint64_t k = 0; k + 1 < layout.blocks_per_shift(i); ++k) {
          auto a = layout.clipped(i, j, k), b = layout.clipped(i, j, k + 1);
          info.edge_budget += detail::sat_mul(static_cast<std::uint64_t>(info.degree_constant), 2ULL << i);
          if (a.size() < 2 || b.size() < 2) continue;
          auto L = detail::id_range(a.lo, a.hi), R = detail::id_range(b.lo, b.hi);
          sample_bipartite_into(sink, L, R, info.degree_constant,
                                split_key(seed, {detail::kTagTheta, std::uint64_t(i), j, k}));
          ++info.expanders;
        }
      }
    }
  }
  out.graph = std::move(sink).finish(LineWeight{});
  return out;
}

// ---------------------------------------------------------------------------
// Exact paths

struct ExactPath {
  std::vector<Vertex> vertices;
  [[nodiscard]] std::size_t hops() const { return vertices.empty() ? 0 : vertices.size() - 1; }
};

/// Sum of edge weights along the path.
inline double path_length(const WeightedGraph& g, const ExactPath& p) {
  double len = 0.0;
  for (std::size_t k = 1; k < p.vertices.size(); ++k) len += g.edge_weight(p.vertices[k - 1], p.vertices[k]);
  return len;
}

/// Fewest-hop monotone path s -> t in g minus `dead`, by bidirectional
/// level-synchronous search (rightward from s, leftward from t, both
/// confined to [s, t]).
inline std::optional<ExactPath> find_exact_path(const WeightedGraph& g, const std::vector<char>& dead, Vertex s,
                                                Vertex t) {
  if (s >= t) throw Error("find_exact_path needs s < t");
  if (t >= g.n()) throw Error("vertex out of range");
  if (dead[s] || dead[t]) return std::nullopt;
  const std::size_t span = t - s + 1;
  constexpr std::uint32_t kNone = ~0U;
  // parent pointers indexed by (v - s)
  std::vector<std::uint32_t> pf(span, kNone), pb(span, kNone);
  std::vector<char> seen_f(span, 0), seen_b(span, 0);
  std::vector<Vertex> front_f{s}, front_b{t}, next;
  seen_f[0] = 1;
  seen_b[span - 1] = 1;
  auto meet_at = [&](Vertex v) {
    ExactPath p;
    for (Vertex x = v;; x = s + pf[x - s]) {
      p.vertices.push_back(x);
      if (x == s) break;
    }
    std::reverse(p.vertices.begin(), p.vertices.end());
    for (Vertex x = v; x != t;) {
      x = s + pb[x - s];
      p.vertices.push_back(x);
    }
    return p;
  };
  while (!front_f.empty() && !front_b.empty()) {
    bool forward = front_f.size() <= front_b.size();
    auto& front = forward ? front_f : front_b;
    auto& seen = forward ? seen_f : seen_b;
    auto& parent = forward ? pf : pb;
    const auto& other = forward ? seen_b : seen_f;
    next.clear();
    std::optional<Vertex> meet;
    for (Vertex u : front) {
      for (Vertex v : g.neighbors(u)) {
        bool ok = forward ? (v > u && v <= t) : (v < u && v >= s);
        if (!ok || dead[v] || seen[v - s]) continue;
        seen[v - s] = 1;
        parent[v - s] = u - s;
        if (other[v - s] && !meet) meet = v;
        next.push_back(v);
      }
    }
    if (meet) return meet_at(*meet);
    front.swap(next);
  }
  return std::nullopt;
}

inline bool is_exact_length(double length, double distance) {
  return std::abs(length - distance) <= kLengthTolerance * std::max(1.0, distance);
}

}  // namespace rspan

#endif  // RSPAN_SPANNER1D_HPP
