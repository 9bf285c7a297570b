// Acceptance run: one PASS/FAIL line per criterion, exit status 0 iff all pass.
// Usage: acceptance [criterion ...]

#include <sys/wait.h>
#include <unistd.h>

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>

#include "oracles.hpp"
#include "rspan/rspan.hpp"

using namespace rspan;
namespace fs = std::filesystem;

namespace {

struct Outcome {
  bool pass = true;
  std::vector<std::string> notes;

  void require(bool ok, const std::string& what) {
    if (ok) return;
    if (pass || notes.size() < 12) notes.push_back("violated: " + what);
    pass = false;
  }
  void note(const std::string& s) { notes.push_back(s); }
};

template <class... T>
std::string str(const T&... xs) {
  std::ostringstream o;
  (o << ... << xs);
  return o.str();
}

PointSet random_points(std::size_t n, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> c(2 * n);
  for (auto& x : c) x = rng.uniform();
  return PointSet(2, c);
}

PointSet jittered_grid(std::size_t w, std::size_t h, std::uint64_t seed) {
  CounterRng rng(seed);
  std::vector<double> c;
  for (std::size_t y = 0; y < h; ++y)
    for (std::size_t x = 0; x < w; ++x) {
      c.push_back(double(x) + 0.2 * rng.uniform() - 0.1);
      c.push_back(double(y) + 0.2 * rng.uniform() - 0.1);
    }
  return PointSet(2, c);
}

VertexSet random_subset(std::size_t n, std::size_t k, CounterRng& rng) {
  std::vector<Vertex> all(n);
  std::iota(all.begin(), all.end(), Vertex{0});
  for (std::size_t i = 0; i < k; ++i) std::swap(all[i], all[i + rng.below(n - i)]);
  all.resize(k);
  return VertexSet(all);
}

struct StretchAudit {
  double worst = 1.0;
  std::size_t failing = 0;  // survivor pairs outside `harmed` above the target
};

/// All-pairs check by Floyd-Warshall on G - B.
StretchAudit audit_stretch(const WeightedGraph& g, const PointSet& P, const VertexSet& B, const VertexSet& harmed,
                           double target) {
  const std::size_t n = g.n();
  std::vector<char> alive(n);
  for (Vertex v = 0; v < n; ++v) alive[v] = !B.contains(v);
  auto d = oracle::floyd_warshall(g, alive);
  StretchAudit a;
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v = u + 1; v < n; ++v) {
      if (!alive[u] || !alive[v] || harmed.contains(u) || harmed.contains(v)) continue;
      double s = d[u][v] / P.dist(u, v);
      if (s > target * (1 + 1e-9)) ++a.failing;
      else a.worst = std::max(a.worst, s);
    }
  return a;
}

// ---------------------------------------------------------------------------

Outcome shadow_exactness() {
  Outcome out;
  auto t0 = std::chrono::steady_clock::now();
  CounterRng rng(101);
  const std::vector<Ratio> sharp{Ratio(3, 4), Ratio(4, 5), Ratio(5, 6), Ratio(7, 8), Ratio(9, 10), Ratio(15, 16),
                                 Ratio(95, 96)};
  std::size_t sharp_cases = 0, members = 0;
  for (int inst = 0; inst < 500; ++inst) {
    const std::size_t n = 1 + rng.below(64);
    auto q = static_cast<std::int64_t>(1 + rng.below(12));
    auto p = static_cast<std::int64_t>(1 + rng.below(static_cast<std::uint64_t>(q)));
    Ratio alpha = inst % 2 ? sharp[rng.below(sharp.size())] : Ratio(p, q);
    const double density = double(1 + rng.below(60)) / 100.0;
    std::vector<char> bad(n, 0);
    for (auto& b : bad) b = rng.uniform() < density;
    auto B = VertexSet::from_mask(bad);
    auto res = shadow_1d(n, B, alpha);

    // anchored intervals [i, j] and [j, i]
    std::vector<std::int64_t> pre(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) pre[i + 1] = pre[i] + bad[i];
    std::vector<char> want(n, 0);
    for (std::size_t lo = 0; lo < n; ++lo)
      for (std::size_t hi = lo; hi < n; ++hi) {
        std::int64_t cnt = pre[hi + 1] - pre[lo], len = static_cast<std::int64_t>(hi - lo + 1);
        if (cnt * alpha.den >= alpha.num * len) want[lo] = want[hi] = 1;
      }
    out.require(res.members == VertexSet::from_mask(want),
                str("instance ", inst, " (n=", n, ", alpha=", alpha.num, "/", alpha.den, ") differs from enumeration"));

    auto s = static_cast<std::int64_t>(res.members.size()), k = static_cast<std::int64_t>(B.size());
    members += res.members.size();
    std::int64_t inv = (alpha.den + alpha.num - 1) / alpha.num;
    out.require(s <= 2 * (1 + inv) * k, str("instance ", inst, ": |S| = ", s, " above 2(1+ceil(1/alpha))|B|"));
    if (3 * alpha.num > 2 * alpha.den && alpha.num < alpha.den) {
      ++sharp_cases;
      out.require(s * (2 * alpha.num - alpha.den) <= k * alpha.den,
                  str("instance ", inst, ": |S| = ", s, " above |B|/(2 alpha - 1)"));
    }
    out.require(check_shadow_bounds(res, B, alpha).ok(), str("instance ", inst, ": library bound check disagrees"));
  }
  double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  out.require(secs < 10.0, str("took ", secs, " s"));
  out.note(str("500 instances, n <= 64, ", sharp_cases, " with alpha in (2/3,1); ", members,
               " shadow members in total; ", secs, " s"));
  return out;
}

/// |N(X)| > (1 - xi)|O| for every X of either side with |X| >= xi|side|.
bool bipartite_expands(const WeightedGraph& g, std::size_t left, const Ratio& xi) {
  const std::size_t n = g.n();
  for (int side = 0; side < 2; ++side) {
    Vertex s_lo = side ? static_cast<Vertex>(left) : 0, s_hi = side ? static_cast<Vertex>(n) : static_cast<Vertex>(left);
    Vertex o_lo = side ? 0 : static_cast<Vertex>(left);
    const std::size_t s = s_hi - s_lo, o = n - s;
    std::vector<std::uint32_t> nb(s, 0);
    for (Vertex u = s_lo; u < s_hi; ++u)
      for (Vertex v : g.neighbors(u)) nb[u - s_lo] |= 1U << (v - o_lo);
    for (std::uint32_t x = 1; x < (1U << s); ++x) {
      auto xs = static_cast<std::int64_t>(std::popcount(x));
      if (xs * xi.den < xi.num * static_cast<std::int64_t>(s)) continue;
      std::uint32_t acc = 0;
      for (std::size_t i = 0; i < s; ++i)
        if (x >> i & 1U) acc |= nb[i];
      if (std::popcount(acc) * xi.den <= (xi.den - xi.num) * static_cast<std::int64_t>(o)) return false;
    }
  }
  return true;
}

/// |N(X)| >= min(alpha|X|, (1 - beta)n) for every nonempty X.
bool strongly_expands(const WeightedGraph& g, std::int64_t alpha, const Ratio& beta) {
  const std::size_t n = g.n();
  std::vector<std::uint32_t> nb(n, 0);
  for (Vertex u = 0; u < n; ++u)
    for (Vertex v : g.neighbors(u)) nb[u] |= 1U << v;
  for (std::uint32_t x = 1; x < (1U << n); ++x) {
    std::uint32_t acc = 0;
    for (std::size_t i = 0; i < n; ++i)
      if (x >> i & 1U) acc |= nb[i];
    std::int64_t size = std::popcount(acc), xs = std::popcount(x);
    if (size < alpha * xs && size * beta.den < (beta.den - beta.num) * static_cast<std::int64_t>(n)) return false;
  }
  return true;
}

Outcome expanders() {
  Outcome out;
  VerifyPolicy exhaustive{VerifyPolicy::Mode::exhaustive, 0, 20};
  auto bip = build_bipartite_expander(12, 12, Ratio(1, 4), 2, std::nullopt, exhaustive);
  out.require(bip.verification && bip.verification->pass, "bipartite 12x12 not accepted within 20 attempts");
  out.require(bip.attempts <= 20, "bipartite attempts");
  out.require(bipartite_expands(bip.graph, 12, Ratio(1, 4)), "bipartite graph fails the subset enumeration");
  out.note(str("bipartite 12x12, xi=1/4: c=", bip.c, ", ", bip.graph.num_edges(), " edges, accepted on attempt ",
               bip.attempts));
  auto strong = build_strong_expander(16, 2, Ratio(1, 2), 2, std::nullopt, exhaustive);
  out.require(strong.verification && strong.verification->pass, "strong n=16 not accepted within 20 attempts");
  out.require(strongly_expands(strong.graph, 2, Ratio(1, 2)), "strong graph fails the subset enumeration");
  out.note(str("strong n=16, alpha=2, beta=1/2: c=", strong.c, ", ", strong.graph.num_edges(),
               " edges, accepted on attempt ", strong.attempts));
  return out;
}

std::size_t largest_component_uf(const WeightedGraph& g, const VertexSet& B) {
  const std::size_t n = g.n();
  std::vector<Vertex> parent(n);
  std::iota(parent.begin(), parent.end(), Vertex{0});
  std::function<Vertex(Vertex)> find = [&](Vertex v) { return parent[v] == v ? v : parent[v] = find(parent[v]); };
  for (auto e : g.edges())
    if (!B.contains(e.u) && !B.contains(e.v)) parent[find(e.u)] = find(e.v);
  std::vector<std::size_t> size(n, 0);
  for (Vertex v = 0; v < n; ++v)
    if (!B.contains(v)) ++size[find(v)];
  return *std::max_element(size.begin(), size.end());
}

Outcome reliable_connectivity() {
  Outcome out;
  const std::size_t n = 200, k = 20;
  auto g = build_reliable_connectivity(n, Ratio(2, 5), 3).graph;
  CertifyContext ctx{&g, meta_reliable(n, Ratio(2, 5), 3), nullptr};
  std::size_t worst = n;
  for (std::uint64_t t = 0; t < 500; ++t) {
    auto B = generate_attack({AttackKind::random_k, k, t}, ctx);
    auto comp = largest_component_uf(g, B);
    worst = std::min(worst, comp);
    out.require(comp >= n - 28, str("attack ", t, ": largest component ", comp));
  }
  auto p = reliable_params(Ratio(2, 5));
  out.note(str("n=200, theta=2/5 (alpha=", p.alpha, ", beta=", p.beta.num, "/", p.beta.den, "): ",
               g.num_edges(), " edges; smallest largest component over 500 attacks ", worst, " >= 172"));
  return out;
}

AttackKind line_kind(std::size_t t) {
  static const AttackKind kinds[] = {AttackKind::random_k, AttackKind::interval, AttackKind::greedy_shadow};
  return kinds[t % 3];
}

Outcome line_const() {
  Outcome out;
  const std::size_t n = 1024;
  auto b = build_H(n, Ratio(1, 16), 4);
  CertifyContext ctx{&b.graph, meta_from(b.info, 4), nullptr};
  // per level: (n/s - 1) neighbouring block pairs, s left vertices drawing c * ceil(2s/s) each
  const std::uint64_t c = 3 * 16 * 16;
  std::uint64_t budget = 0;
  for (std::uint64_t s = 1; s < n; s *= 2) budget += (n / s - 1) * s * c * 2;
  out.require(b.graph.num_edges() >= n - 1, "fewer than n-1 edges");
  out.require(b.graph.num_edges() <= budget, str(b.graph.num_edges(), " edges above budget ", budget));
  out.require(b.info.edge_budget == budget, "reported budget differs from the level sum");

  const std::size_t ks[] = {8, 32, 128};
  CounterRng rng(44);
  std::size_t worst_shadow = 0, pairs = 0;
  double worst_ratio = 0;
  for (std::size_t t = 0; t < 50; ++t) {
    std::size_t k = ks[(t / 3) % 3];
    auto B = generate_attack({line_kind(t), k, t}, ctx);
    auto r = certify(ctx, B);
    auto S = shadow_1d(n, B, Ratio(1, 96)).members;
    out.require(r.harmed == S, str("attack ", t, ": harness shadow differs"));
    out.require(S.size() <= 200 * k, str("attack ", t, ": |shadow| = ", S.size(), " > 200k"));
    out.require(r.failing_outside == 0, str("attack ", t, " (", to_string(line_kind(t)), ", k=", k, "): ",
                                            r.failing_outside, " failing pairs outside the shadow"));
    worst_shadow = std::max(worst_shadow, S.size());
    if (!B.empty()) worst_ratio = std::max(worst_ratio, double(S.size()) / double(B.size()));
    pairs += r.pairs_checked;
    // direct monotone DP from a few sources
    auto dead = B.mask(n);
    for (int i = 0; i < 8; ++i) {
      auto s = static_cast<Vertex>(rng.below(n));
      if (S.contains(s)) continue;
      auto reach = oracle::monotone_dp(b.graph, dead, s);
      for (Vertex v = s + 1; v < n; ++v)
        if (!S.contains(v)) out.require(reach[v], str("attack ", t, ": no monotone path ", s, " -> ", v));
    }
  }
  out.note(str("n=1024, xi=1/16: ", b.graph.num_edges(), " edges, budget ", budget, "; 50 attacks, ", pairs,
               " pairs checked; max |shadow| ", worst_shadow, ", max |shadow|/|B| ", worst_ratio));
  return out;
}

void theta_attacks(Outcome& out, const Spanner1dBuild& b, std::uint64_t seed, std::size_t attacks,
                   const std::vector<std::size_t>& ks, const CertifyOptions& opt, const std::string& label) {
  const std::size_t n = b.graph.n();
  CertifyContext ctx{&b.graph, meta_from(b.info, seed), nullptr};
  CounterRng rng(split_key(seed, {0x50A7}));
  std::size_t max_hops = 0, pairs = 0, exact = 0, worst_shadow = 0;
  for (std::size_t t = 0; t < attacks; ++t) {
    std::size_t k = ks[(t / 3) % ks.size()];
    auto B = generate_attack({line_kind(t), k, t}, ctx);
    auto r = certify(ctx, B, opt);
    out.require(r.harmed == shadow_1d(n, B, Ratio(7, 8)).members, str(label, " attack ", t, ": harness shadow differs"));
    out.require(2 * r.harmed.size() <= 3 * B.size(), str(label, " attack ", t, ": shadow above (1+theta)|B|"));
    out.require(r.failing_outside == 0, str(label, " attack ", t, ": ", r.failing_outside, " failing pairs"));
    out.require(r.max_hops <= 24, str(label, " attack ", t, ": ", r.max_hops, " hops"));
    max_hops = std::max<std::size_t>(max_hops, r.max_hops);
    worst_shadow = std::max(worst_shadow, r.harmed.size());
    pairs += r.pairs_checked;
    // exact-length paths on sampled pairs
    auto dead = B.mask(n);
    for (int i = 0; i < 200; ++i) {
      auto s = static_cast<Vertex>(rng.below(n)), v = static_cast<Vertex>(rng.below(n));
      if (s == v || r.harmed.contains(s) || r.harmed.contains(v)) continue;
      if (s > v) std::swap(s, v);
      auto p = find_exact_path(b.graph, dead, s, v);
      out.require(p.has_value(), str(label, " attack ", t, ": no path ", s, " -> ", v));
      if (!p) continue;
      bool ok = p->vertices.front() == s && p->vertices.back() == v && p->hops() <= 24;
      for (std::size_t j = 1; j < p->vertices.size(); ++j) {
        Vertex x = p->vertices[j - 1], y = p->vertices[j];
        ok = ok && x < y && !dead[y] && b.graph.has_edge(x, y);
      }
      ok = ok && is_exact_length(path_length(b.graph, *p), double(v - s));
      out.require(ok, str(label, " attack ", t, ": path ", s, " -> ", v, " is not an exact 1-path"));
      ++exact;
    }
  }
  out.note(str(label, ": n=", n, ", c=", b.info.c, ", N=", b.info.N, ", regime ", b.info.regime, ", ",
               b.graph.num_edges(), " edges (complete has ", n * (n - 1) / 2, "); ", attacks, " attacks, ", pairs,
               " pairs certified, ", exact, " exact paths rebuilt; max hops ", max_hops, ", max |shadow| ",
               worst_shadow));
}

Outcome line_theta() {
  Outcome out;
  auto exp = build_G_theta(4096, Ratio(1, 2), 8, 5, BuildMode::experimental);
  CertifyOptions all;
  all.full_pairs_limit = 4096;
  theta_attacks(out, exp, 5, 30, {16, 64, 256}, all, "experimental");
  // faithful c: the smallest n at which G_0 stops covering every pair
  auto n = static_cast<std::size_t>(faithful_crossover(Ratio(1, 2), kFaithfulC));
  auto faithful = build_G_theta(n, Ratio(1, 2), kFaithfulC, 5, BuildMode::faithful);
  theta_attacks(out, faithful, 5, 6, {64, 256}, CertifyOptions{}, "faithful");
  return out;
}

Outcome bounded_spread() {
  Outcome out;
  auto P = jittered_grid(32, 16, 6);
  auto b = build_bounded_spread_spanner(P, Ratio(1, 2), Ratio(1, 4), 6);
  CertifyContext ctx{&b.graph, meta_from(b.info, 6), &P};
  auto base = audit_stretch(b.graph, P, VertexSet{}, VertexSet{}, 1.5);
  out.require(base.failing == 0, str(base.failing, " pairs above stretch 1.5 without failures"));
  Quadtree tree(P);
  const AttackKind kinds[] = {AttackKind::random_k, AttackKind::ball, AttackKind::greedy_shadow};
  const std::size_t ks[] = {8, 32, 64};
  double worst = base.worst, worst_ratio = 0;
  for (std::size_t t = 0; t < 30; ++t) {
    std::size_t k = ks[(t / 3) % 3];
    auto B = generate_attack({kinds[t % 3], k, t}, ctx);
    auto r = certify(ctx, B);
    out.require(r.harmed == shadow_quadtree(tree, B, Ratio(7, 8)).members, str("attack ", t, ": shadow differs"));
    out.require(4 * r.harmed.size() <= 5 * k, str("attack ", t, ": |B+| = ", r.harmed.size(), " > 1.25k"));
    auto a = audit_stretch(b.graph, P, B, r.harmed, 1.5);
    out.require(a.failing == 0 && r.failing_outside == 0, str("attack ", t, ": ", a.failing, " failing pairs"));
    worst = std::max(worst, a.worst);
    if (!B.empty()) worst_ratio = std::max(worst_ratio, double(r.harmed.size()) / double(B.size()));
  }
  out.note(str("32x16 jittered grid, eps=1/2, theta=1/4: ", b.graph.num_edges(), " edges (complete has ",
               512 * 511 / 2, "), log2 spread ", b.info.log2_spread, ", max pairs per point ",
               b.info.max_pairs_per_point, ", K = ", b.info.pair_constant));
  out.note(str("stretch without failures ", base.worst, "; over 30 attacks max stretch ", worst,
               ", max |B+|/|B| ", worst_ratio));
  return out;
}

Outcome hd() {
  Outcome out;
  auto P = random_points(512, 7);
  HdOptions opt;
  opt.c = 8;
  opt.mode = BuildMode::experimental;
  auto b = build_hd_spanner(P, Ratio(1, 2), Ratio(1, 2), HdVariant::improved, 7, opt);
  CertifyContext ctx{&b.graph, meta_from(b.info, 7), &P};
  auto base = audit_stretch(b.graph, P, VertexSet{}, VertexSet{}, 1.5);
  out.require(base.failing == 0, str(base.failing, " pairs above stretch 1.5 without failures"));
  double worst = base.worst, worst_ratio = 0;
  for (std::size_t t = 0; t < 20; ++t) {
    std::size_t k = 8 * (1 + t % 4);
    auto B = generate_attack({AttackKind::random_k, k, t}, ctx);
    auto r = certify(ctx, B);
    out.require(2 * r.harmed.size() <= 3 * k, str("attack ", t, ": |B+| = ", r.harmed.size(), " > 1.5k"));
    auto a = audit_stretch(b.graph, P, B, r.harmed, 1.5);
    out.require(a.failing == 0 && r.failing_outside == 0, str("attack ", t, ": ", a.failing, " failing pairs"));
    worst = std::max(worst, a.worst);
    worst_ratio = std::max(worst_ratio, double(r.harmed.size()) / double(B.size()));
  }
  const auto& i = b.info;
  out.note(str("n=512, improved, c=8 experimental: sigma=", i.sigma.num, "/", i.sigma.den, ", M=", i.M,
               ", iterations=", i.iterations, ", theta'=",
               i.theta_prime_underflow ? std::string("underflow") : str(i.theta_prime.num, "/", i.theta_prime.den),
               ", regime ", i.regime, ", ", b.graph.num_edges(), " edges"));
  out.note(str("stretch without failures ", base.worst, "; 20 attacks, max stretch ", worst, ", max |B+|/|B| ",
               worst_ratio));
  return out;
}

Outcome lso() {
  Outcome out;
  for (auto sigma : {Ratio(1, 4), Ratio(1, 8)}) {
    OrderingFamily fam(2, sigma);
    CounterRng rng(split_key(8, {static_cast<std::uint64_t>(sigma.den)}));
    std::size_t found = 0;
    const std::size_t pairs = 10000;
    std::vector<double> p(2), q(2);
    for (std::size_t i = 0; i < pairs; ++i) {
      for (auto& x : p) x = rng.uniform();
      for (auto& x : q) x = rng.uniform();
      auto s = lso_samples(2, 200, rng);
      found += check_lso_property(fam, p, q, s).found;
    }
    out.require(found * 100 >= pairs * 99, str("sigma=1/", sigma.den, ": ", found, " of ", pairs));
    std::size_t ties = 0;
    for (int i = 0; i < 100000; ++i) {
      auto o = fam.ordering(rng.below(fam.size()));
      std::array<std::array<double, 2>, 3> pt;
      for (auto& a : pt)
        for (auto& x : a) x = rng.uniform();
      if (rng.below(8) == 0) {
        pt[1] = pt[0];
        ++ties;
      }
      auto less = [&](int a, int b) {
        return fam.less(o, std::span<const double>(pt[a]), a, std::span<const double>(pt[b]), b);
      };
      out.require(!less(0, 0), "irreflexive");
      out.require(less(0, 1) != less(1, 0), "total on distinct ids");
      if (less(0, 1) && less(1, 2)) out.require(less(0, 2), "transitive");
      if (less(2, 1) && less(1, 0)) out.require(less(2, 0), "transitive");
    }
    out.note(str("sigma=1/", sigma.den, ": M=", fam.size(), ", ", found, "/", pairs,
                 " pairs with a witnessing ordering; 100000 order checks (", ties, " with coincident points)"));
  }
  return out;
}

Outcome cones() {
  Outcome out;
  auto P = random_points(200, 9);
  for (auto alpha : {Ratio(1, 4), Ratio(1, 2)}) {
    CounterRng rng(split_key(9, {static_cast<std::uint64_t>(alpha.den)}));
    double tightest = 0;
    for (int t = 0; t < 100; ++t) {
      auto B = random_subset(200, 1 + rng.below(40), rng);
      auto F = cone_mark_unsafe(P, B, alpha);
      auto balls = shadow_balls_oracle(P, B, alpha).members;
      std::size_t bound = B.size() * (1 + 6 * static_cast<std::size_t>(alpha.ceil_inverse()));
      out.require(balls.subset_of(F), str("alpha=1/", alpha.den, " trial ", t, ": ball shadow not inside F"));
      out.require(B.subset_of(F), "B not inside F");
      out.require(F.size() <= bound, str("trial ", t, ": |F| = ", F.size(), " > ", bound));
      tightest = std::max(tightest, double(F.size()) / double(bound));
    }
    out.note(str("alpha=1/", alpha.den, ": 100 trials, max |F| / bound = ", tightest));
  }
  return out;
}

// ---------------------------------------------------------------------------
// Determinism through the CLI

int run(const std::string& cmd) {
  int rc = std::system((cmd + " > /dev/null 2>&1").c_str());
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

Outcome determinism() {
  Outcome out;
  auto dir = fs::temp_directory_path() / ("rspan_acceptance_" + std::to_string(::getpid()));
  fs::create_directories(dir);
  auto at = [&](const std::string& name) { return (dir / name).string(); };
  write_file(at("grid.txt"), format_points(jittered_grid(32, 16, 10)));
  write_file(at("pts.txt"), format_points(random_points(300, 10)));
  const std::vector<std::string> commands{
      "build 1d-const --n 1024 --seed 3",
      "build 1d-theta --n 1024 --theta 1/2 --c 8 --mode experimental --seed 3",
      "build 1d-theta --n 200 --theta 1/2 --seed 3",
      "build bounded-spread --points " + at("grid.txt") + " --eps 1/2 --theta 1/4 --seed 3",
      "build bounded-spread --points " + at("grid.txt") + " --eps 1/2 --theta 1/4 --degree 1 --seed 3",
      "build hd --points " + at("pts.txt") + " --eps 1/2 --theta 1/2 --variant improved --c 8 --mode experimental --seed 3",
      "build hd --points " + at("pts.txt") + " --eps 1/2 --theta 1/2 --variant simple --c 2 --mode experimental "
      "--sigma 1/2 --theta-prime 1/2 --seed 3",
      "expander bipartite --left 64 --right 96 --xi 1/4 --seed 3",
      "expander reliable --n 200 --theta 2/5 --seed 3",
  };
  std::vector<std::pair<std::string, std::string>> runners{
      {"rerun", std::string("SPANNER_THREADS=1 ") + SPANNER_BIN},
      {"threads=4", std::string("SPANNER_THREADS=4 ") + SPANNER_BIN},
  };
  const std::string second = SPANNER_SECOND_BIN;
  if (second.empty()) out.require(false, "no second-toolchain build of spanner is available");
  else runners.emplace_back("second toolchain", "SPANNER_THREADS=1 " + second);
  std::size_t bytes = 0;
  for (std::size_t i = 0; i < commands.size(); ++i) {
    std::string ref = at("ref" + std::to_string(i) + ".txt");
    if (run(std::string("SPANNER_THREADS=1 ") + SPANNER_BIN + " " + commands[i] + " -o " + ref) != 0) {
      out.require(false, "command failed: " + commands[i]);
      continue;
    }
    auto want = read_file(ref);
    bytes += want.size();
    for (std::size_t j = 0; j < runners.size(); ++j) {
      std::string alt = at("alt" + std::to_string(i) + "_" + std::to_string(j) + ".txt");
      bool ok = run(runners[j].second + " " + commands[i] + " -o " + alt) == 0 && read_file(alt) == want;
      out.require(ok, runners[j].first + " differs: " + commands[i]);
    }
  }
  fs::remove_all(dir);
  out.note(str(commands.size(), " build commands, ", bytes, " bytes of edge lists, compared against ",
               runners.size(), " reruns each (", second.empty() ? "no second toolchain" : "including " + second, ")"));
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria{
      {"1d shadow matches interval enumeration and both size bounds", shadow_exactness},
      {"bipartite and strong expanders pass exhaustive verification", expanders},
      {"reliable connectivity keeps a component of n - 28 under 20 failures", reliable_connectivity},
      {"H: shadow within 200k, monotone paths outside it, edge count within budget", line_const},
      {"G_theta: exact 1-paths of at most 24 hops outside the shadow", line_theta},
      {"bounded spread: stretch 1.5 and |B+| <= 1.25k", bounded_spread},
      {"hd improved: stretch 1.5 and |B+| <= 1.5k", hd},
      {"LSO property on sampled pairs; orderings are strict total orders", lso},
      {"cone marking contains the ball shadow within its size bound", cones},
      {"builds are byte-identical across reruns, threads and toolchains", determinism},
  };
  std::set<std::size_t> only;
  for (int i = 1; i < argc; ++i) only.insert(std::stoul(argv[i]));
  bool all = true;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    if (!only.empty() && !only.count(i + 1)) continue;
    auto t0 = std::chrono::steady_clock::now();
    Outcome o;
    try {
      o = criteria[i].second();
    } catch (const std::exception& e) {
      o.pass = false;
      o.note(std::string("error: ") + e.what());
    }
    double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
    std::printf("%s  criterion %2zu  %-78s %7.2fs\n", o.pass ? "PASS" : "FAIL", i + 1, criteria[i].first.c_str(), secs);
    for (const auto& n : o.notes) std::printf("      %s\n", n.c_str());
    std::fflush(stdout);
    all = all && o.pass;
  }
  return all ? 0 : 1;
}
