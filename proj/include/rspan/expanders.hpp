#ifndef RSPAN_EXPANDERS_HPP
#define RSPAN_EXPANDERS_HPP

#include <algorithm>
#include <bit>
#include <cstdint>
#include <numeric>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "rspan/error.hpp"
#include "rspan/graph.hpp"
#include "rspan/ratio.hpp"
#include "rspan/rng.hpp"

namespace rspan {

/// Largest side the exhaustive verifiers will enumerate.
inline constexpr std::size_t kEnumerationBudget = 22;

namespace detail {

inline std::uint64_t sat_mul(std::uint64_t a, std::uint64_t b) {
  unsigned __int128 p = static_cast<unsigned __int128>(a) * b;
  return p > ~std::uint64_t{0} ? ~std::uint64_t{0} : static_cast<std::uint64_t>(p);
}

/// With this many uniform draws from m items, missing any item has
/// probability below m * exp(-(log2 m + 40)) < 2^-57; the neighborhood is
/// then emitted as complete instead of being drawn.
inline bool saturates(std::uint64_t draws, std::uint64_t m) {
  return draws >= sat_mul(m, static_cast<std::uint64_t>(std::bit_width(m)) + 40);
}

/// draws uniform picks (with repetition) from targets for vertex u.
inline void sample_neighbors(EdgeSink& sink, Vertex u, std::span<const Vertex> targets, std::uint64_t draws,
                             std::uint64_t key, std::vector<std::uint64_t>& seen) {
  const std::uint64_t m = targets.size();
  if (m == 0 || draws == 0) return;
  if (saturates(draws, m)) {
    sink.add_all(u, targets);
    return;
  }
  CounterRng rng(key);
  if (draws < m) {
    for (std::uint64_t s = 0; s < draws; ++s) sink.add(u, targets[rng.below(m)]);
    return;
  }
  // Enough draws to possibly cover everything: stop once covered.
  seen.assign((m + 63) / 64, 0);
  std::uint64_t covered = 0;
  for (std::uint64_t s = 0; s < draws && covered < m; ++s) {
    auto idx = rng.below(m);
    std::uint64_t bit = std::uint64_t{1} << (idx & 63);
    if (!(seen[idx >> 6] & bit)) {
      seen[idx >> 6] |= bit;
      ++covered;
      sink.add(u, targets[idx]);
    }
  }
}

}  // namespace detail

/// c = ceil(3 / xi^2)
inline std::int64_t bipartite_constant(const Ratio& xi) {
  if (xi.num <= 0 || xi.num >= xi.den) throw Error("xi must lie in (0,1)");
  __int128 num = static_cast<__int128>(3) * xi.den * xi.den;
  __int128 den = static_cast<__int128>(xi.num) * xi.num;
  __int128 c = (num + den - 1) / den;
  if (c > (static_cast<__int128>(1) << 62)) throw Error("xi too small");
  return static_cast<std::int64_t>(c);
}

struct BipartiteDegrees {
  std::int64_t c = 0;
  std::uint64_t per_left = 0;   // samples drawn by each left vertex
  std::uint64_t per_right = 0;  // samples drawn by each right vertex
};

/// l_L = c * ceil(n/|L|), l_R = c * ceil(n/|R|), n = |L| + |R|.
inline BipartiteDegrees bipartite_degrees(std::size_t left, std::size_t right, std::int64_t c) {
  if (left == 0 || right == 0) throw Error("expander side is empty");
  if (c < 1) throw Error("degree constant must be positive");
  std::uint64_t n = left + right;
  BipartiteDegrees d;
  d.c = c;
  d.per_left = detail::sat_mul(static_cast<std::uint64_t>(c), (n + left - 1) / left);
  d.per_right = detail::sat_mul(static_cast<std::uint64_t>(c), (n + right - 1) / right);
  return d;
}

/// Pre-dedup edge budget c * (ceil(n/|L|)|L| + ceil(n/|R|)|R|).
inline std::uint64_t bipartite_edge_budget(std::size_t left, std::size_t right, std::int64_t c) {
  auto d = bipartite_degrees(left, right, c);
  return detail::sat_mul(d.per_left, left) + detail::sat_mul(d.per_right, right);
}

/// Adds one sampled bipartite expander between L and R to sink. Each vertex
/// draws from its own stream split_key(key, {side, index}), so the edge set
/// does not depend on the order in which vertices are processed.
inline void sample_bipartite_into(EdgeSink& sink, std::span<const Vertex> left, std::span<const Vertex> right,
                                  std::int64_t c, std::uint64_t key) {
  auto deg = bipartite_degrees(left.size(), right.size(), c);
  std::vector<std::uint64_t> seen;
  for (std::size_t a = 0; a < left.size(); ++a)
    detail::sample_neighbors(sink, left[a], right, deg.per_left, split_key(key, {0, a}), seen);
  for (std::size_t b = 0; b < right.size(); ++b)
    detail::sample_neighbors(sink, right[b], left, deg.per_right, split_key(key, {1, b}), seen);
}

// ---------------------------------------------------------------------------
// Verification

struct ExpansionCheck {
  bool pass = true;
  bool exhaustive = true;
  std::uint64_t subsets_checked = 0;
  std::string side;               // "left", "right" or "all" for a violation
  std::vector<Vertex> violating;  // a smallest violating subset
  std::size_t neighborhood = 0;   // |N(violating)|
};

namespace detail {

using Bits = std::vector<std::uint64_t>;

inline std::size_t popcount(const Bits& b) {
  std::size_t s = 0;
  for (auto w : b) s += static_cast<std::size_t>(std::popcount(w));
  return s;
}

/// Checks |N(X)| > (1 - xi)|O| for every X subset of S with |X| = k.
/// nbr[i] is the neighborhood of S[i] as a bitset over O.
inline bool check_fixed_size(const std::vector<Bits>& nbr, std::size_t other_size, std::size_t k, const Ratio& xi,
                             ExpansionCheck& out, std::vector<std::size_t>& witness) {
  const std::size_t s = nbr.size();
  const std::size_t words = (other_size + 63) / 64;
  if (k > s) return true;
  auto expands = [&](std::size_t size) {
    // size > (1 - xi) * other  <=>  size * den > (den - num) * other
    return static_cast<__int128>(size) * xi.den > static_cast<__int128>(xi.den - xi.num) * other_size;
  };
  if (k == 0) {
    ++out.subsets_checked;
    if (expands(0)) return true;
    witness.clear();
    out.neighborhood = 0;
    return false;
  }
  std::vector<Bits> acc(k + 1, Bits(words, 0));
  std::vector<std::size_t> pick(k);
  // iterative combination enumeration with prefix ORs
  std::size_t depth = 0;
  pick[0] = 0;
  while (true) {
    if (pick[depth] > s - (k - depth)) {
      if (depth == 0) break;
      --depth;
      ++pick[depth];
      continue;
    }
    for (std::size_t w = 0; w < words; ++w) acc[depth + 1][w] = acc[depth][w] | nbr[pick[depth]][w];
    if (depth + 1 == k) {
      ++out.subsets_checked;
      std::size_t size = popcount(acc[k]);
      if (!expands(size)) {
        witness.assign(pick.begin(), pick.end());
        out.neighborhood = size;
        return false;
      }
      ++pick[depth];
    } else {
      pick[depth + 1] = pick[depth] + 1;
      ++depth;
    }
  }
  return true;
}

inline std::vector<Bits> side_neighborhoods(const WeightedGraph& g, Vertex s_lo, Vertex s_hi, Vertex o_lo, Vertex o_hi) {
  std::vector<Bits> nbr(s_hi - s_lo, Bits((o_hi - o_lo + 63) / 64, 0));
  for (Vertex u = s_lo; u < s_hi; ++u)
    for (Vertex v : g.neighbors(u))
      if (v >= o_lo && v < o_hi) nbr[u - s_lo][(v - o_lo) >> 6] |= std::uint64_t{1} << ((v - o_lo) & 63);
  return nbr;
}

}  // namespace detail

/// Exhaustive check of both expansion properties for the bipartite graph
/// with L = [0, left_size) and R = [left_size, n).
///
/// Both properties are monotone in |X|, so only subsets of size exactly
/// ceil(xi|side|) are enumerated. The two properties are equivalent (if
/// |N(X)| <= (1-xi)|R| then Y = R \ N(X) violates the other side), so when
/// one side exceeds the budget enumerating the smaller side decides both.
inline ExpansionCheck verify_expansion_bruteforce(const WeightedGraph& g, std::size_t left_size, const Ratio& xi) {
  const std::size_t n = g.n();
  if (left_size == 0 || left_size >= n) throw Error("expander side is empty");
  const std::size_t right_size = n - left_size;
  if (std::min(left_size, right_size) > kEnumerationBudget) throw Error("enumeration budget exceeded");
  const auto L = static_cast<Vertex>(left_size), N = static_cast<Vertex>(n);
  ExpansionCheck out;
  std::vector<std::size_t> witness;

  auto run_side = [&](bool left_side) {
    Vertex s_lo = left_side ? 0 : L, s_hi = left_side ? L : N;
    Vertex o_lo = left_side ? L : 0, o_hi = left_side ? N : L;
    auto nbr = detail::side_neighborhoods(g, s_lo, s_hi, o_lo, o_hi);
    auto k = static_cast<std::size_t>(xi.ceil_times(static_cast<std::int64_t>(s_hi - s_lo)));
    if (detail::check_fixed_size(nbr, o_hi - o_lo, k, xi, out, witness)) return true;
    out.pass = false;
    out.side = left_side ? "left" : "right";
    out.violating.clear();
    for (auto i : witness) out.violating.push_back(static_cast<Vertex>(s_lo + i));
    return false;
  };

  bool left_ok = left_size <= kEnumerationBudget;
  bool right_ok = right_size <= kEnumerationBudget;
  if (left_ok && !run_side(true)) return out;
  if (right_ok) run_side(false);
  return out;
}

/// Exhaustive check of |N(X)| >= min((1-beta)n, alpha|X|) over all nonempty X.
inline ExpansionCheck verify_strong_expansion(const WeightedGraph& g, std::int64_t alpha, const Ratio& beta) {
  const std::size_t n = g.n();
  if (n > kEnumerationBudget) throw Error("enumeration budget exceeded");
  std::vector<std::uint32_t> nb(n, 0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.neighbors(u)) nb[u] |= 1U << v;
  const std::uint32_t full = n == 32 ? ~0U : ((1U << n) - 1);
  std::vector<std::uint32_t> acc(std::size_t{1} << n, 0);
  ExpansionCheck out;
  int best = static_cast<int>(n) + 1;
  std::uint32_t best_mask = 0;
  for (std::uint32_t x = 1; x <= full && x != 0; ++x) {
    std::uint32_t low = x & (0U - x);
    acc[x] = acc[x ^ low] | nb[std::countr_zero(low)];
    ++out.subsets_checked;
    auto size = static_cast<std::int64_t>(std::popcount(acc[x]));
    auto xs = static_cast<std::int64_t>(std::popcount(x));
    bool ok_alpha = size >= alpha * xs;
    bool ok_beta = static_cast<__int128>(size) * beta.den >= static_cast<__int128>(beta.den - beta.num) * n;
    if (!ok_alpha && !ok_beta && xs < best) {
      best = static_cast<int>(xs);
      best_mask = x;
    }
    if (x == full) break;
  }
  if (best_mask) {
    out.pass = false;
    out.side = "all";
    for (Vertex v = 0; v < n; ++v)
      if (best_mask >> v & 1U) out.violating.push_back(v);
    out.neighborhood = static_cast<std::size_t>(std::popcount(acc[best_mask]));
  }
  return out;
}

/// Random spot checks of the bipartite properties: `trials` subsets of size
/// ceil(xi|side|) per side.
inline ExpansionCheck verify_expansion_sampled(const WeightedGraph& g, std::size_t left_size, const Ratio& xi,
                                               std::uint64_t trials, std::uint64_t seed) {
  const std::size_t n = g.n();
  if (left_size == 0 || left_size >= n) throw Error("expander side is empty");
  ExpansionCheck out;
  out.exhaustive = false;
  std::vector<std::uint32_t> stamp(n, 0);
  std::uint32_t epoch = 0;
  for (int side = 0; side < 2; ++side) {
    Vertex s_lo = side == 0 ? 0 : static_cast<Vertex>(left_size);
    Vertex s_hi = side == 0 ? static_cast<Vertex>(left_size) : static_cast<Vertex>(n);
    std::size_t s = s_hi - s_lo, other = n - s;
    auto k = static_cast<std::size_t>(xi.ceil_times(static_cast<std::int64_t>(s)));
    std::vector<Vertex> pool(s);
    CounterRng rng(split_key(seed, {0x5A, static_cast<std::uint64_t>(side)}));
    for (std::uint64_t t = 0; t < trials; ++t) {
      std::iota(pool.begin(), pool.end(), s_lo);
      for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(s - i)]);
      ++epoch;
      std::size_t size = 0;
      for (std::size_t i = 0; i < k; ++i)
        for (Vertex v : g.neighbors(pool[i]))
          if (stamp[v] != epoch) {
            stamp[v] = epoch;
            ++size;
          }
      ++out.subsets_checked;
      if (static_cast<__int128>(size) * xi.den <= static_cast<__int128>(xi.den - xi.num) * other) {
        out.pass = false;
        out.side = side == 0 ? "left" : "right";
        out.violating.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
        std::sort(out.violating.begin(), out.violating.end());
        out.neighborhood = size;
        return out;
      }
    }
  }
  return out;
}

inline ExpansionCheck verify_strong_sampled(const WeightedGraph& g, std::int64_t alpha, const Ratio& beta,
                                            std::uint64_t trials, std::uint64_t seed) {
  const std::size_t n = g.n();
  ExpansionCheck out;
  out.exhaustive = false;
  std::vector<std::uint32_t> stamp(n, 0);
  std::vector<Vertex> pool(n);
  CounterRng rng(split_key(seed, {0x5B}));
  for (std::uint64_t t = 0; t < trials; ++t) {
    std::size_t k = 1 + rng.below(n);
    std::iota(pool.begin(), pool.end(), Vertex{0});
    for (std::size_t i = 0; i < k; ++i) std::swap(pool[i], pool[i + rng.below(n - i)]);
    auto epoch = static_cast<std::uint32_t>(t + 1);
    std::size_t size = 0;
    for (std::size_t i = 0; i < k; ++i)
      for (Vertex v : g.neighbors(pool[i]))
        if (stamp[v] != epoch) {
          stamp[v] = epoch;
          ++size;
        }
    ++out.subsets_checked;
    bool ok_alpha = static_cast<std::int64_t>(size) >= alpha * static_cast<std::int64_t>(k);
    bool ok_beta = static_cast<__int128>(size) * beta.den >= static_cast<__int128>(beta.den - beta.num) * n;
    if (!ok_alpha && !ok_beta) {
      out.pass = false;
      out.side = "all";
      out.violating.assign(pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(k));
      std::sort(out.violating.begin(), out.violating.end());
      out.neighborhood = size;
      return out;
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// Builders

struct ExpanderBuild {
  WeightedGraph graph;
  std::int64_t c = 0;
  std::uint64_t per_left = 0;  // bipartite: draws per left vertex; strong: draws per vertex
  std::uint64_t per_right = 0;
  std::int64_t alpha = 0;  // strong / reliable only
  Ratio beta;
  bool experimental = false;
  std::uint64_t seed = 0;       // seed of the accepted attempt
  std::size_t attempts = 1;
  std::optional<ExpansionCheck> verification;
};

struct VerifyPolicy {
  enum class Mode { none, exhaustive, sampled } mode = Mode::none;
  std::uint64_t samples = 0;     // for sampled
  std::size_t max_attempts = 20;
};

/// L = [0, left), R = [left, left+right), unit weights.
inline ExpanderBuild build_bipartite_expander(std::size_t left, std::size_t right, const Ratio& xi, std::uint64_t seed,
                                              std::optional<std::int64_t> degree_override = std::nullopt,
                                              const VerifyPolicy& verify = {}) {
  if (left == 0 || right == 0) throw Error("expander side is empty");
  std::int64_t c = bipartite_constant(xi);
  ExpanderBuild out;
  if (degree_override) {
    if (*degree_override < 1) throw Error("degree constant override must be at least 1");
    c = *degree_override;
    out.experimental = true;
  }
  auto deg = bipartite_degrees(left, right, c);
  out.c = c;
  out.per_left = deg.per_left;
  out.per_right = deg.per_right;
  std::vector<Vertex> L(left), R(right);
  std::iota(L.begin(), L.end(), Vertex{0});
  std::iota(R.begin(), R.end(), static_cast<Vertex>(left));
  std::size_t budget = verify.mode == VerifyPolicy::Mode::none ? 1 : std::max<std::size_t>(1, verify.max_attempts);
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    std::uint64_t s = seed + attempt;
    EdgeSink sink(left + right);
    sample_bipartite_into(sink, L, R, c, s);
    out.graph = std::move(sink).finish([](Vertex, Vertex) { return 1.0; });
    out.seed = s;
    out.attempts = attempt + 1;
    if (verify.mode == VerifyPolicy::Mode::none) break;
    out.verification = verify.mode == VerifyPolicy::Mode::exhaustive
                           ? verify_expansion_bruteforce(out.graph, left, xi)
                           : verify_expansion_sampled(out.graph, left, xi, verify.samples, s);
    if (out.verification->pass) break;
  }
  return out;
}

/// c = 64 * ceil(alpha / beta)
inline std::int64_t strong_constant(std::int64_t alpha, const Ratio& beta) {
  if (alpha <= 1) throw Error("alpha must be an integer greater than one");
  if (beta.num <= 0 || beta.num >= beta.den) throw Error("beta must lie in (0,1)");
  __int128 q = (static_cast<__int128>(alpha) * beta.den + beta.num - 1) / beta.num;
  if (q > (static_cast<__int128>(1) << 55)) throw Error("alpha/beta too large");
  return static_cast<std::int64_t>(64 * q);
}

inline ExpanderBuild build_strong_expander(std::size_t n, std::int64_t alpha, const Ratio& beta, std::uint64_t seed,
                                           std::optional<std::int64_t> degree_override = std::nullopt,
                                           const VerifyPolicy& verify = {}) {
  if (n < 2) throw Error("strong expander needs at least two vertices");
  ExpanderBuild out;
  out.c = strong_constant(alpha, beta);
  out.alpha = alpha;
  out.beta = beta;
  if (degree_override) {
    if (*degree_override < 1) throw Error("degree constant override must be at least 1");
    out.c = *degree_override;
    out.experimental = true;
  }
  out.per_left = static_cast<std::uint64_t>(out.c);
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});
  std::size_t budget = verify.mode == VerifyPolicy::Mode::none ? 1 : std::max<std::size_t>(1, verify.max_attempts);
  for (std::size_t attempt = 0; attempt < budget; ++attempt) {
    std::uint64_t s = seed + attempt;
    EdgeSink sink(n);
    std::vector<std::uint64_t> seen;
    for (Vertex u = 0; u < n; ++u)
      detail::sample_neighbors(sink, u, all, out.per_left, split_key(s, {2, u}), seen);
    out.graph = std::move(sink).finish([](Vertex, Vertex) { return 1.0; });
    out.seed = s;
    out.attempts = attempt + 1;
    if (verify.mode == VerifyPolicy::Mode::none) break;
    out.verification = verify.mode == VerifyPolicy::Mode::exhaustive
                           ? verify_strong_expansion(out.graph, alpha, beta)
                           : verify_strong_sampled(out.graph, alpha, beta, verify.samples, s);
    if (out.verification->pass) break;
  }
  return out;
}

struct ReliableParams {
  std::int64_t alpha;
  Ratio beta;
};

/// alpha = ceil(100/theta), beta = theta/alpha.
inline ReliableParams reliable_params(const Ratio& theta) {
  if (theta.num <= 0 || 2 * theta.num >= theta.den) throw Error("theta must lie in (0, 1/2)");
  std::int64_t alpha = (100 * theta.den + theta.num - 1) / theta.num;
  return {alpha, theta / alpha};
}

inline ExpanderBuild build_reliable_connectivity(std::size_t n, const Ratio& theta, std::uint64_t seed,
                                                 std::optional<std::int64_t> degree_override = std::nullopt,
                                                 const VerifyPolicy& verify = {}) {
  auto p = reliable_params(theta);
  return build_strong_expander(n, p.alpha, p.beta, seed, degree_override, verify);
}

/// Size of the largest connected component of g after deleting `failed`.
inline std::size_t largest_component(const WeightedGraph& g, const std::vector<char>& dead) {
  std::vector<char> seen(g.n(), 0);
  std::vector<Vertex> stack;
  std::size_t best = 0;
  for (Vertex s = 0; s < g.n(); ++s) {
    if (dead[s] || seen[s]) continue;
    std::size_t size = 0;
    stack.assign(1, s);
    seen[s] = 1;
    while (!stack.empty()) {
      Vertex u = stack.back();
      stack.pop_back();
      ++size;
      for (Vertex v : g.neighbors(u))
        if (!dead[v] && !seen[v]) {
          seen[v] = 1;
          stack.push_back(v);
        }
    }
    best = std::max(best, size);
  }
  return best;
}

}  // namespace rspan

#endif  // RSPAN_EXPANDERS_HPP
