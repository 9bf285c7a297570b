#ifndef RSPAN_HARNESS_HPP
#define RSPAN_HARNESS_HPP

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <optional>
#include <queue>
#include <string>
#include <vector>

#include "json.hpp"
#include "rspan/error.hpp"
#include "rspan/expanders.hpp"
#include "rspan/graph.hpp"
#include "rspan/io.hpp"
#include "rspan/lso.hpp"
#include "rspan/parallel.hpp"
#include "rspan/quadtree.hpp"
#include "rspan/ratio.hpp"
#include "rspan/rng.hpp"
#include "rspan/shadow.hpp"
#include "rspan/spanner1d.hpp"
#include "rspan/spanner_euclidean.hpp"

namespace rspan {

// ---------------------------------------------------------------------------
// Construction metadata

/// What certify needs to know about a graph: which construction built it and
/// with which parameters. Written next to every edge list.
struct GraphMeta {
  std::string construction;  // 1d-const | 1d-theta | hd | bounded-spread | reliable-connectivity
  std::size_t n = 0, d = 1;
  std::uint64_t seed = 0;
  std::string mode = "faithful", regime = "standard";
  Ratio xi, theta, eps, sigma, theta_prime;
  bool theta_prime_underflow = false;
  std::string variant;  // hd only
  std::int64_t c = 0;
  std::uint64_t M = 0, iterations = 1;
  std::string points;  // point file for the geometric constructions
};

inline bool is_line_construction(const std::string& c) { return c == "1d-const" || c == "1d-theta"; }
inline bool is_geometric_construction(const std::string& c) { return c == "hd" || c == "bounded-spread"; }

inline void check_construction(const std::string& c) {
  if (!is_line_construction(c) && !is_geometric_construction(c) && c != "reliable-connectivity")
    throw Error("unknown construction meta: '" + c + "'");
}

inline nlohmann::ordered_json to_json(const GraphMeta& m) {
  nlohmann::ordered_json j;
  j["construction"] = m.construction;
  j["n"] = m.n;
  j["d"] = m.d;
  j["seed"] = m.seed;
  j["mode"] = m.mode;
  j["regime"] = m.regime;
  if (m.construction == "1d-const") j["xi"] = m.xi.str();
  if (m.construction != "1d-const") j["theta"] = m.theta.str();
  if (is_geometric_construction(m.construction)) {
    j["eps"] = m.eps.str();
    j["points"] = m.points;
  }
  if (m.construction == "1d-theta" || m.construction == "hd") j["c"] = m.c;
  if (m.construction == "hd") {
    j["variant"] = m.variant;
    j["sigma"] = m.sigma.str();
    j["M"] = m.M;
    j["iterations"] = m.iterations;
    if (m.theta_prime_underflow) j["theta_prime"] = nullptr;
    else j["theta_prime"] = m.theta_prime.str();
  }
  return j;
}

inline GraphMeta meta_from_json(const nlohmann::json& j) {
  GraphMeta m;
  try {
    m.construction = j.at("construction").get<std::string>();
    check_construction(m.construction);
    m.n = j.at("n").get<std::size_t>();
    m.d = j.value("d", std::size_t{1});
    m.seed = j.value("seed", std::uint64_t{0});
    m.mode = j.value("mode", std::string("faithful"));
    m.regime = j.value("regime", std::string("standard"));
    auto ratio = [&](const char* key) { return Ratio::parse(j.at(key).get<std::string>()); };
    if (m.construction == "1d-const") m.xi = ratio("xi");
    else m.theta = ratio("theta");
    if (is_geometric_construction(m.construction)) {
      m.eps = ratio("eps");
      m.points = j.value("points", std::string());
    }
    m.c = j.value("c", std::int64_t{0});
    if (m.construction == "hd") {
      m.variant = j.at("variant").get<std::string>();
      m.sigma = ratio("sigma");
      m.M = j.at("M").get<std::uint64_t>();
      m.iterations = j.at("iterations").get<std::uint64_t>();
      if (j.at("theta_prime").is_null()) m.theta_prime_underflow = true;
      else m.theta_prime = ratio("theta_prime");
    }
  } catch (const nlohmann::json::exception& e) {
    throw Error(std::string("malformed construction meta: ") + e.what());
  }
  return m;
}

inline GraphMeta meta_from(const Spanner1dInfo& info, std::uint64_t seed) {
  GraphMeta m;
  m.construction = info.construction;
  m.n = info.n;
  m.seed = seed;
  m.xi = info.xi;
  if (info.construction == "1d-theta") {
    m.theta = info.theta;
    m.c = info.c;
    m.mode = info.mode;
    m.regime = info.regime;
  }
  return m;
}

inline GraphMeta meta_from(const EuclideanInfo& info, std::uint64_t seed, std::string points_path = {}) {
  GraphMeta m;
  m.construction = info.construction;
  m.n = info.n;
  m.d = info.d;
  m.seed = seed;
  m.mode = info.mode;
  m.regime = info.regime;
  m.theta = info.theta;
  m.eps = info.eps;
  m.points = std::move(points_path);
  if (info.construction == "hd") {
    m.variant = to_string(info.variant);
    m.c = info.c;
    m.sigma = info.sigma;
    m.M = info.M;
    m.iterations = info.iterations;
    m.theta_prime = info.theta_prime;
    m.theta_prime_underflow = info.theta_prime_underflow;
  }
  return m;
}

inline GraphMeta meta_reliable(std::size_t n, const Ratio& theta, std::uint64_t seed) {
  GraphMeta m;
  m.construction = "reliable-connectivity";
  m.n = n;
  m.theta = theta;
  m.seed = seed;
  return m;
}

// ---------------------------------------------------------------------------
// Harmed sets

struct HarmedSet {
  VertexSet members;
  std::string rule;
  std::int64_t bound = 0;  // floor of the allowed |B+|
  bool bound_ok = true;
  std::vector<std::string> warnings;
};

/// Everything certify and the attacks need besides the graph itself.
struct CertifyContext {
  const WeightedGraph* graph = nullptr;
  GraphMeta meta;
  const PointSet* points = nullptr;  // required for the geometric constructions
};

namespace detail {

inline void require_points(const CertifyContext& ctx) {
  if (!ctx.points) throw Error("construction '" + ctx.meta.construction + "' needs its point set");
  if (ctx.points->size() != ctx.meta.n) throw Error("point set size does not match the construction meta");
}

/// floor(|B| (1 + r)).
inline std::int64_t one_plus_bound(std::size_t b, const Ratio& r) {
  return static_cast<std::int64_t>((static_cast<__int128>(b) * (r.den + r.num)) / r.den);
}

inline Ratio one_minus_quarter(const Ratio& t) { return Ratio(4 * t.den - t.num, 4 * t.den); }

/// Shadow of B on the line that visits the points in `rank` order.
inline void ranked_shadow(const std::vector<Vertex>& rank, const std::vector<char>& bad, const Ratio& alpha,
                          std::vector<char>& out, std::vector<char>& scratch) {
  const std::size_t n = rank.size();
  scratch.resize(n);
  for (std::size_t i = 0; i < n; ++i) scratch[i] = bad[rank[i]];
  auto sh = shadow_1d_mask(scratch, alpha);
  for (std::size_t i = 0; i < n; ++i)
    if (sh[i]) out[rank[i]] = 1;
}

}  // namespace detail

/// Harmed set of the hd construction: union over the ordering family of the
/// 1D (1 - theta'/4)-shadows, iterated `iterations` times.
inline HarmedSet hd_harmed_set(const PointSet& P, const GraphMeta& meta, const VertexSet& B,
                               std::uint64_t max_orderings = std::uint64_t{1} << 16) {
  HarmedSet h;
  const std::size_t n = P.size();
  h.bound = detail::one_plus_bound(B.size(), meta.theta);
  OrderingFamily family(P.dim(), meta.sigma);
  if (family.size() != meta.M)
    h.warnings.push_back("ordering family size " + std::to_string(family.size()) + " differs from the recorded M = " +
                         std::to_string(meta.M));
  const Ratio& tp = meta.theta_prime;
  if (meta.theta_prime_underflow || static_cast<__int128>(n) * tp.num < static_cast<__int128>(4) * tp.den) {
    // alpha > 1 - 1/n: only fully failed intervals qualify, so every shadow is B
    h.rule = "union of 1D (1-theta'/4)-shadows over orderings (equals B: theta' < 4/n)";
    h.members = B;
  } else {
    if (family.size() > max_orderings)
      throw Error("ordering family too large to enumerate: M = " + std::to_string(family.size()));
    Ratio alpha = detail::one_minus_quarter(tp);
    h.rule = "union of 1D " + alpha.str() + "-shadows over " + std::to_string(family.size()) + " orderings, " +
             std::to_string(meta.iterations) + " round(s)";
    auto norm = normalize_points(P);
    std::vector<std::vector<Vertex>> ranks(family.size());
    parallel_for(family.size(), [&](std::size_t id) { ranks[id] = family.sort(family.ordering(id), norm.coords); });
    auto cur = B.mask(n);
    std::vector<char> scratch;
    for (std::uint64_t round = 0; round < meta.iterations; ++round) {
      auto next = cur;
      for (const auto& rank : ranks) detail::ranked_shadow(rank, cur, alpha, next, scratch);
      if (next == cur) break;
      cur = std::move(next);
    }
    h.members = VertexSet::from_mask(cur, SetRole::harmed);
  }
  h.members.with_role(SetRole::harmed);
  h.bound_ok = static_cast<std::int64_t>(h.members.size()) <= h.bound;
  return h;
}

/// The constructive B+ of each construction together with its size bound.
inline HarmedSet harmed_set(const CertifyContext& ctx, const VertexSet& B) {
  const auto& m = ctx.meta;
  check_construction(m.construction);
  const std::size_t n = m.n;
  (void)B.mask(n);
  HarmedSet h;
  if (m.construction == "1d-const") {
    h.members = shadow_1d(n, B, Ratio(1, 96)).members;
    h.rule = "1D 1/96-shadow";
    h.bound = 200 * static_cast<std::int64_t>(B.size());
  } else if (m.construction == "1d-theta") {
    Ratio alpha = detail::one_minus_quarter(m.theta);
    h.members = shadow_1d(n, B, alpha).members;
    h.rule = "1D " + alpha.str() + "-shadow";
    h.bound = detail::one_plus_bound(B.size(), m.theta);
  } else if (m.construction == "bounded-spread") {
    detail::require_points(ctx);
    Ratio gamma(2 * m.theta.den - m.theta.num, 2 * m.theta.den);
    Quadtree tree(*ctx.points);
    h.members = shadow_quadtree(tree, B, gamma).members;
    h.rule = "quadtree " + gamma.str() + "-shadow";
    h.bound = detail::one_plus_bound(B.size(), m.theta);
  } else if (m.construction == "hd") {
    detail::require_points(ctx);
    return hd_harmed_set(*ctx.points, m, B);
  } else {
    if (!ctx.graph) throw Error("reliable-connectivity harmed set needs the graph");
    auto dead = B.mask(n);
    // B plus every survivor outside the largest component (lowest id wins ties)
    std::vector<int> comp(n, -1);
    std::vector<std::size_t> sizes;
    std::vector<Vertex> stack;
    for (Vertex s = 0; s < n; ++s) {
      if (dead[s] || comp[s] >= 0) continue;
      int id = static_cast<int>(sizes.size());
      sizes.push_back(0);
      stack.assign(1, s);
      comp[s] = id;
      while (!stack.empty()) {
        Vertex u = stack.back();
        stack.pop_back();
        ++sizes.back();
        for (Vertex v : ctx.graph->neighbors(u))
          if (!dead[v] && comp[v] < 0) {
            comp[v] = id;
            stack.push_back(v);
          }
      }
    }
    int best = sizes.empty() ? -1 : static_cast<int>(std::max_element(sizes.begin(), sizes.end()) - sizes.begin());
    std::vector<char> harmed = dead;
    for (Vertex v = 0; v < n; ++v)
      if (!dead[v] && comp[v] != best) harmed[v] = 1;
    h.members = VertexSet::from_mask(harmed);
    h.rule = "B plus survivors outside the largest component";
    h.bound = detail::one_plus_bound(B.size(), m.theta);
  }
  h.members.with_role(SetRole::harmed);
  h.bound_ok = static_cast<std::int64_t>(h.members.size()) <= h.bound;
  return h;
}

// ---------------------------------------------------------------------------
// Attacks

enum class AttackKind { random_k, interval, prefix, ball, greedy_shadow };

inline const char* to_string(AttackKind k) {
  switch (k) {
    case AttackKind::random_k: return "random-k";
    case AttackKind::interval: return "interval";
    case AttackKind::prefix: return "prefix";
    case AttackKind::ball: return "ball";
    case AttackKind::greedy_shadow: return "greedy-shadow";
  }
  return "?";
}

inline AttackKind parse_attack_kind(const std::string& s) {
  if (s == "random-k" || s == "random") return AttackKind::random_k;
  if (s == "interval") return AttackKind::interval;
  if (s == "prefix") return AttackKind::prefix;
  if (s == "ball") return AttackKind::ball;
  if (s == "greedy-shadow" || s == "greedy") return AttackKind::greedy_shadow;
  throw Error("unknown attack kind '" + s + "'");
}

struct AttackSpec {
  AttackKind kind = AttackKind::random_k;
  std::size_t k = 0;
  std::uint64_t seed = 0;
};

namespace detail {
inline constexpr std::uint64_t kTagAttack = 0x41;
inline constexpr std::uint64_t kTagPairs = 0x50;

/// Greedy objective: size of the harmed set that failing `bad` induces.
class GreedyObjective {
 public:
  explicit GreedyObjective(const CertifyContext& ctx) : ctx_(ctx), n_(ctx.meta.n) {
    const auto& c = ctx.meta.construction;
    if (is_line_construction(c)) {
      alpha_ = c == "1d-const" ? Ratio(1, 96) : one_minus_quarter(ctx.meta.theta);
      line_.resize(n_);
      for (Vertex v = 0; v < n_; ++v) line_[v] = v;
    } else if (is_geometric_construction(c)) {
      require_points(ctx);
      tree_.emplace(*ctx.points);
      alpha_ = Ratio(2 * ctx.meta.theta.den - ctx.meta.theta.num, 2 * ctx.meta.theta.den);
      line_ = tree_->order();
    } else {
      line_.resize(n_);
      for (Vertex v = 0; v < n_; ++v) line_[v] = v;
    }
    pos_.resize(n_);
    for (std::size_t i = 0; i < n_; ++i) pos_[line_[i]] = i;
  }

  [[nodiscard]] std::size_t value(const std::vector<char>& bad) const {
    if (tree_) return shadow_quadtree(*tree_, VertexSet::from_mask(bad), alpha_).members.size();
    if (is_line_construction(ctx_.meta.construction)) {
      auto sh = shadow_1d_mask(bad, alpha_);
      return static_cast<std::size_t>(std::count(sh.begin(), sh.end(), 1));
    }
    return n_ - largest_component(*ctx_.graph, bad);
  }

  [[nodiscard]] std::vector<char> members(const std::vector<char>& bad) const {
    if (tree_) return shadow_quadtree(*tree_, VertexSet::from_mask(bad), alpha_).members.mask(n_);
    if (is_line_construction(ctx_.meta.construction)) return shadow_1d_mask(bad, alpha_);
    return bad;
  }

  /// Line order used to propose candidates next to the current shadow.
  [[nodiscard]] const std::vector<Vertex>& line() const { return line_; }
  [[nodiscard]] std::size_t position(Vertex v) const { return pos_[v]; }

 private:
  const CertifyContext& ctx_;
  std::size_t n_;
  Ratio alpha_{1, 2};
  std::optional<Quadtree> tree_;
  std::vector<Vertex> line_;
  std::vector<std::size_t> pos_;
};

inline VertexSet greedy_attack(const CertifyContext& ctx, std::size_t k, CounterRng& rng) {
  const std::size_t n = ctx.meta.n;
  GreedyObjective obj(ctx);
  std::vector<char> bad(n, 0);
  std::vector<Vertex> picked;
  const auto& line = obj.line();
  for (std::size_t step = 0; step < k; ++step) {
    auto sh = obj.members(bad);
    if (static_cast<std::size_t>(std::count(sh.begin(), sh.end(), 1)) == n) break;
    std::vector<Vertex> cand;
    for (std::size_t i = 0; i < n; ++i) {
      if (!sh[line[i]]) continue;
      if (i > 0 && !bad[line[i - 1]]) cand.push_back(line[i - 1]);
      if (i + 1 < n && !bad[line[i + 1]]) cand.push_back(line[i + 1]);
    }
    for (int r = 0; r < 16; ++r) {
      auto v = static_cast<Vertex>(rng.below(n));
      if (!bad[v]) cand.push_back(v);
    }
    std::sort(cand.begin(), cand.end());
    cand.erase(std::unique(cand.begin(), cand.end()), cand.end());
    if (cand.empty()) break;
    std::vector<std::size_t> score(cand.size());
    parallel_for(cand.size(), [&](std::size_t i) {
      auto trial = bad;
      trial[cand[i]] = 1;
      score[i] = obj.value(trial);
    });
    std::size_t best = 0;
    for (std::size_t i = 1; i < cand.size(); ++i)
      if (score[i] > score[best]) best = i;
    bad[cand[best]] = 1;
    picked.push_back(cand[best]);
  }
  return VertexSet(std::move(picked), SetRole::failure);
}

}  // namespace detail

/// Deterministic failure set for `spec`. Positions come from the point set
/// when the context has one, else from the line (vertex i at i+1).
inline VertexSet generate_attack(const AttackSpec& spec, const CertifyContext& ctx) {
  const std::size_t n = ctx.meta.n;
  if (spec.k > n) throw Error("attack size k = " + std::to_string(spec.k) + " exceeds n = " + std::to_string(n));
  CounterRng rng(split_key(spec.seed, {detail::kTagAttack, static_cast<std::uint64_t>(spec.kind), spec.k}));
  std::vector<Vertex> ids;
  switch (spec.kind) {
    case AttackKind::prefix:
      for (Vertex v = 0; v < spec.k; ++v) ids.push_back(v);
      break;
    case AttackKind::interval: {
      auto start = static_cast<Vertex>(rng.below(n - spec.k + 1));
      for (Vertex v = 0; v < spec.k; ++v) ids.push_back(start + v);
      break;
    }
    case AttackKind::random_k: {
      std::vector<Vertex> perm(n);
      for (Vertex v = 0; v < n; ++v) perm[v] = v;
      for (std::size_t i = 0; i < spec.k; ++i) std::swap(perm[i], perm[i + rng.below(n - i)]);
      ids.assign(perm.begin(), perm.begin() + static_cast<std::ptrdiff_t>(spec.k));
      break;
    }
    case AttackKind::ball: {
      auto center = static_cast<Vertex>(rng.below(n));
      std::vector<std::pair<double, Vertex>> ds(n);
      for (Vertex v = 0; v < n; ++v) {
        double dist = ctx.points ? ctx.points->dist(center, v)
                                 : std::fabs(static_cast<double>(v) - static_cast<double>(center));
        ds[v] = {dist, v};
      }
      std::partial_sort(ds.begin(), ds.begin() + static_cast<std::ptrdiff_t>(spec.k), ds.end());
      for (std::size_t i = 0; i < spec.k; ++i) ids.push_back(ds[i].second);
      break;
    }
    case AttackKind::greedy_shadow:
      return detail::greedy_attack(ctx, spec.k, rng);
  }
  return VertexSet(std::move(ids), SetRole::failure);
}

// ---------------------------------------------------------------------------
// Certification

struct CertifyOptions {
  std::size_t full_pairs_limit = 2048;   // all pairs up to this many survivors
  std::uint64_t pair_budget = 1000000;   // sampled pairs beyond it
  std::uint64_t seed = 0;                // pair sampling
};

struct ReliabilityReport {
  GraphMeta meta;
  std::optional<AttackSpec> attack;
  std::size_t failures = 0;
  VertexSet harmed;
  std::string shadow_rule;
  std::int64_t bound = 0;
  bool bound_ok = true;
  std::uint64_t pairs_checked = 0;
  bool sampled = false;
  std::uint64_t sample_seed = 0;
  std::vector<std::pair<Vertex, Vertex>> failing_pairs;  // among V \ B
  std::uint64_t failing_outside = 0;                     // both endpoints outside B+
  std::uint64_t greedy_cover = 0, certificate_cover = 0, empirical_loss = 0;
  double max_stretch = 1.0;  // over checked pairs outside B+
  std::uint64_t max_hops = 0;  // 1D: hop count of the shortest monotone path, pairs outside B+
  double runtime_s = 0.0;
  std::vector<std::string> warnings;
  bool pass = false;
};

namespace detail {

struct SourceResult {
  std::vector<Vertex> failing;  // targets t > s
  std::uint64_t failing_outside = 0, checked = 0, max_hops = 0;
  double max_stretch = 1.0;
};

/// O(n^2 + m) Dijkstra for dense graphs.
inline void dense_dijkstra(const WeightedGraph& g, const std::vector<char>& alive, Vertex s, std::vector<double>& dist,
                           std::vector<char>& done) {
  const std::size_t n = g.n();
  dist.assign(n, kInfinity);
  done.assign(n, 0);
  dist[s] = 0.0;
  for (;;) {
    Vertex u = 0;
    double best = kInfinity;
    for (Vertex v = 0; v < n; ++v)
      if (!done[v] && dist[v] < best) {
        best = dist[v];
        u = v;
      }
    if (best == kInfinity) return;
    done[u] = 1;
    auto row = g.neighbors(u);
    auto w = g.weights(u);
    for (std::size_t k = 0; k < row.size(); ++k) {
      Vertex v = row[k];
      if (alive[v] && !done[v] && best + w[k] < dist[v]) dist[v] = best + w[k];
    }
  }
}

/// Greedy max-degree vertex cover of the pair graph; ties to the lower id.
inline std::uint64_t greedy_vertex_cover(std::size_t n, const std::vector<std::pair<Vertex, Vertex>>& pairs) {
  std::vector<std::vector<Vertex>> adj(n);
  for (auto [u, v] : pairs) {
    adj[u].push_back(v);
    adj[v].push_back(u);
  }
  std::vector<std::size_t> deg(n);
  std::priority_queue<std::pair<std::size_t, std::int64_t>> heap;
  for (Vertex v = 0; v < n; ++v) {
    deg[v] = adj[v].size();
    if (deg[v] > 0) heap.push({deg[v], -static_cast<std::int64_t>(v)});
  }
  std::vector<char> taken(n, 0);
  std::uint64_t size = 0;
  while (!heap.empty()) {
    auto [d, neg] = heap.top();
    heap.pop();
    auto v = static_cast<Vertex>(-neg);
    if (taken[v] || d != deg[v] || d == 0) continue;
    taken[v] = 1;
    ++size;
    for (Vertex u : adj[v])
      if (!taken[u]) {
        --deg[u];
        if (deg[u] > 0) heap.push({deg[u], -static_cast<std::int64_t>(u)});
      }
    deg[v] = 0;
  }
  return size;
}

}  // namespace detail

/// Computes B+, checks |B+| against the bound, then audits pairs of V \ B:
/// monotone reachability on the line, stretch <= (1+eps)(1+1e-9) otherwise.
/// pass iff the bound holds and no failing pair avoids B+.
inline ReliabilityReport certify(const CertifyContext& ctx, const VertexSet& B, const CertifyOptions& opt = {}) {
  auto t0 = std::chrono::steady_clock::now();
  if (!ctx.graph) throw Error("certify needs a graph");
  const auto& m = ctx.meta;
  check_construction(m.construction);
  const WeightedGraph& g = *ctx.graph;
  const std::size_t n = m.n;
  if (g.n() != n) throw Error("graph has " + std::to_string(g.n()) + " vertices, meta says " + std::to_string(n));
  ReliabilityReport rep;
  rep.meta = m;
  rep.failures = B.size();
  auto h = harmed_set(ctx, B);
  rep.harmed = h.members;
  rep.shadow_rule = h.rule;
  rep.bound = h.bound;
  rep.bound_ok = h.bound_ok;
  rep.warnings = h.warnings;
  if (!B.subset_of(h.members)) throw Error("harmed set does not contain the failure set");

  auto dead = B.mask(n);
  auto harmed = h.members.mask(n);
  std::vector<char> alive(n);
  std::vector<Vertex> surv;
  for (Vertex v = 0; v < n; ++v) {
    alive[v] = !dead[v];
    if (alive[v]) surv.push_back(v);
  }

  const bool line = is_line_construction(m.construction);
  const bool component = m.construction == "reliable-connectivity";
  // targets[i]: the t > surv[i] to audit from surv[i]; empty list + all = every survivor above it
  std::vector<std::vector<Vertex>> targets;
  bool all_pairs = surv.size() <= opt.full_pairs_limit;
  if (!all_pairs && !component) {
    rep.sampled = true;
    rep.sample_seed = split_key(opt.seed, {detail::kTagPairs});
    CounterRng rng(rep.sample_seed);
    targets.resize(surv.size());
    for (std::uint64_t k = 0; k < opt.pair_budget; ++k) {
      std::size_t a = rng.below(surv.size()), b = rng.below(surv.size() - 1);
      if (b >= a) ++b;
      if (a > b) std::swap(a, b);
      targets[a].push_back(surv[b]);
    }
    for (auto& t : targets) {
      std::sort(t.begin(), t.end());
      t.erase(std::unique(t.begin(), t.end()), t.end());
    }
  }

  if (!component && !line) detail::require_points(ctx);
  std::vector<detail::SourceResult> res(surv.size());
  if (!component) {
    std::optional<MonotoneHopOracle> oracle;
    if (line) oracle.emplace(g, alive);
    const bool dense = !line && g.num_edges() * 8 > static_cast<std::uint64_t>(n) * n;
    const double tol = line ? 0.0 : (1.0 + m.eps.value()) * (1.0 + kLengthTolerance);
    parallel_for(surv.size(), [&](std::size_t i) {
      Vertex s = surv[i];
      auto& r = res[i];
      std::vector<Vertex> all;
      const std::vector<Vertex>* ts = &all;
      if (all_pairs) all.assign(surv.begin() + static_cast<std::ptrdiff_t>(i) + 1, surv.end());
      else ts = &targets[i];
      if (ts->empty()) return;
      auto record = [&](Vertex t, bool ok, double stretch, std::uint64_t hops) {
        ++r.checked;
        bool outside = !harmed[s] && !harmed[t];
        if (!ok) {
          r.failing.push_back(t);
          if (outside) ++r.failing_outside;
        } else if (outside) {
          r.max_stretch = std::max(r.max_stretch, stretch);
          r.max_hops = std::max(r.max_hops, hops);
        }
      };
      if (line) {
        std::vector<std::uint16_t> hops;
        oracle->hops_from(s, hops);
        for (Vertex t : *ts) {
          bool ok = hops[t] != MonotoneHopOracle::kUnreachable;
          record(t, ok, 1.0, ok ? hops[t] : 0);
        }
      } else {
        std::vector<double> dist;
        if (dense) {
          std::vector<char> done;
          detail::dense_dijkstra(g, alive, s, dist, done);
        } else {
          dist = shortest_path_length(g, alive, s);
        }
        const auto& P = *ctx.points;
        for (Vertex t : *ts) {
          double e = P.dist(s, t);
          double stretch = dist[t] / e;
          record(t, dist[t] <= tol * e, stretch, 0);
        }
      }
    });
  }
  for (std::size_t i = 0; i < surv.size(); ++i) {
    const auto& r = res[i];
    rep.pairs_checked += r.checked;
    rep.failing_outside += r.failing_outside;
    rep.max_stretch = std::max(rep.max_stretch, r.max_stretch);
    rep.max_hops = std::max(rep.max_hops, r.max_hops);
    for (Vertex t : r.failing) rep.failing_pairs.emplace_back(surv[i], t);
  }
  rep.greedy_cover = detail::greedy_vertex_cover(n, rep.failing_pairs);
  std::vector<char> cert(n, 0);
  for (auto [s, t] : rep.failing_pairs) {
    if (harmed[s]) cert[s] = 1;
    else if (harmed[t]) cert[t] = 1;
  }
  rep.certificate_cover = static_cast<std::uint64_t>(std::count(cert.begin(), cert.end(), 1));
  rep.empirical_loss = rep.failing_outside == 0 ? std::min(rep.greedy_cover, rep.certificate_cover) : rep.greedy_cover;
  rep.pass = rep.bound_ok && rep.failing_outside == 0;
  rep.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  return rep;
}

inline nlohmann::ordered_json to_json(const ReliabilityReport& r, bool with_sets = true) {
  nlohmann::ordered_json j;
  j["report_version"] = 1;
  j["construction"] = to_json(r.meta);
  if (r.attack) j["attack"] = {{"kind", to_string(r.attack->kind)}, {"k", r.attack->k}, {"seed", r.attack->seed}};
  else j["attack"] = nullptr;
  j["failures"] = r.failures;
  j["harmed_size"] = r.harmed.size();
  if (with_sets) j["harmed"] = r.harmed.ids();
  j["shadow_rule"] = r.shadow_rule;
  j["bound"] = r.bound;
  j["bound_ok"] = r.bound_ok;
  j["pairs_checked"] = r.pairs_checked;
  j["sampled"] = r.sampled;
  if (r.sampled) j["sample_seed"] = r.sample_seed;
  j["failing_pairs"] = r.failing_pairs.size();
  j["failing_outside"] = r.failing_outside;
  j["greedy_cover"] = r.greedy_cover;
  j["certificate_cover"] = r.certificate_cover;
  j["empirical_loss"] = r.empirical_loss;
  if (std::isfinite(r.max_stretch)) j["max_stretch"] = r.max_stretch;
  else j["max_stretch"] = nullptr;
  j["max_hops"] = r.max_hops;
  j["runtime_s"] = r.runtime_s;
  j["warnings"] = r.warnings;
  j["pass"] = r.pass;
  return j;
}

// ---------------------------------------------------------------------------
// Loss curve

struct LossRow {
  std::size_t k = 0, trials = 0, passes = 0;
  double mean_ratio = 0, max_ratio = 0, mean_loss = 0, max_loss = 0, max_stretch = 1.0;
};

inline std::vector<LossRow> loss_curve(const CertifyContext& ctx, AttackKind kind, const std::vector<std::size_t>& ks,
                                       std::size_t trials, std::uint64_t seed, const CertifyOptions& opt = {}) {
  std::vector<LossRow> rows;
  for (std::size_t k : ks) {
    LossRow row;
    row.k = k;
    row.trials = trials;
    for (std::size_t t = 0; t < trials; ++t) {
      AttackSpec spec{kind, k, split_key(seed, {k, t})};
      auto B = generate_attack(spec, ctx);
      CertifyOptions o = opt;
      o.seed = split_key(seed, {k, t, 1});
      auto rep = certify(ctx, B, o);
      double ratio = k == 0 ? 0.0 : static_cast<double>(rep.harmed.size()) / static_cast<double>(k);
      double loss = static_cast<double>(rep.empirical_loss);
      row.mean_ratio += ratio;
      row.max_ratio = std::max(row.max_ratio, ratio);
      row.mean_loss += loss;
      row.max_loss = std::max(row.max_loss, loss);
      row.max_stretch = std::max(row.max_stretch, rep.max_stretch);
      row.passes += rep.pass;
    }
    if (trials > 0) {
      row.mean_ratio /= static_cast<double>(trials);
      row.mean_loss /= static_cast<double>(trials);
    }
    rows.push_back(row);
  }
  return rows;
}

inline std::string format_loss_csv(const std::vector<LossRow>& rows) {
  std::string out = "k,trials,mean_ratio,max_ratio,mean_loss,max_loss,max_stretch,passes\n";
  for (const auto& r : rows) {
    out += std::to_string(r.k) + ',' + std::to_string(r.trials) + ',' + format_double(r.mean_ratio) + ',' +
           format_double(r.max_ratio) + ',' + format_double(r.mean_loss) + ',' + format_double(r.max_loss) + ',' +
           format_double(r.max_stretch) + ',' + std::to_string(r.passes) + '\n';
  }
  return out;
}

}  // namespace rspan

#endif  // RSPAN_HARNESS_HPP
