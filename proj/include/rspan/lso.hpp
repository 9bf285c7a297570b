#ifndef RSPAN_LSO_HPP
#define RSPAN_LSO_HPP

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>
#include <limits>
#include <numeric>
#include <optional>
#include <span>
#include <vector>

#include "rspan/error.hpp"
#include "rspan/graph.hpp"
#include "rspan/ratio.hpp"
#include "rspan/rng.hpp"

namespace rspan {

/// Identifies one ordering: diagonal shift j/(d+1), super-level offset and
/// the Hamiltonian path used as subcell visit order inside each super-cell.
struct LsoOrdering {
  std::size_t shift = 0;
  int offset = 0;
  std::uint64_t path = 0;
  friend bool operator==(const LsoOrdering&, const LsoOrdering&) = default;
};

/// Shifted-quadtree orderings of [0,1)^d.
///
/// Coordinates are quantized to 61 bits and shifted, giving 62 bit levels.
/// Levels are grouped into super-levels of w levels (the first group has
/// `offset` levels when offset > 0). Within a group the w*d interleaved bits
/// index one of m = 2^(wd) subcells, visited along path t of the Walecki
/// decomposition of K_m into m/2 Hamiltonian paths. Path 0 is relabelled to
/// the identity, so shift 0, path 0 is plain Z-order.
class OrderingFamily {
 public:
  static constexpr int kLevels = 62;
  static constexpr int kFracBits = 61;
  static constexpr std::size_t kMaxDim = 8;
  using Key = std::array<std::uint64_t, 8>;  // 62 * d <= 496 bits, packed MSB first

  OrderingFamily(std::size_t d, const Ratio& sigma) : d_(d), sigma_(sigma) {
    if (d < 1 || d > kMaxDim) throw Error("lso supports dimensions 1..8");
    if (sigma.num <= 0 || sigma.num >= sigma.den) throw Error("sigma must lie in (0,1)");
    // smallest w with 2^w >= 2 sqrt(d) / sigma  <=>  4^w p^2 >= 4 d q^2
    const __int128 rhs = static_cast<__int128>(4) * static_cast<__int128>(d) * sigma.den * sigma.den;
    const __int128 p2 = static_cast<__int128>(sigma.num) * sigma.num;
    w_ = 0;
    while (p2 * (static_cast<__int128>(1) << (2 * w_)) < rhs) {
      ++w_;
      if (w_ * static_cast<int>(d) > kLevels) throw Error("sigma too small for the 62-level quantization in this dimension");
    }
    w_ = std::max(w_, 1);
    if (w_ * static_cast<int>(d) > kLevels) throw Error("sigma too small for the 62-level quantization in this dimension");
    const int bits = w_ * static_cast<int>(d);
    paths_ = bits >= 1 ? (std::uint64_t{1} << (bits - 1)) : 1;
    __int128 m = static_cast<__int128>(d + 1) * w_ * paths_;
    size_ = m > static_cast<__int128>(std::numeric_limits<std::uint64_t>::max()) ? std::numeric_limits<std::uint64_t>::max()
                                                                                 : static_cast<std::uint64_t>(m);
    shift_q_.resize(d + 1);
    for (std::size_t j = 0; j <= d; ++j)
      shift_q_[j] = static_cast<std::uint64_t>((static_cast<__int128>(j) << kFracBits) / static_cast<__int128>(d + 1));
  }

  [[nodiscard]] std::size_t dim() const { return d_; }
  [[nodiscard]] const Ratio& sigma() const { return sigma_; }
  [[nodiscard]] int w() const { return w_; }
  [[nodiscard]] std::uint64_t subcells() const { return paths_ * 2; }
  [[nodiscard]] std::uint64_t paths() const { return paths_; }
  [[nodiscard]] std::size_t num_shifts() const { return d_ + 1; }
  /// M; saturates at 2^64-1 (only reachable for d = 1 with tiny sigma).
  [[nodiscard]] std::uint64_t size() const { return size_; }

  /// The shift applied to every coordinate by shift index j.
  [[nodiscard]] double shift_value(std::size_t j) const {
    return static_cast<double>(j) / static_cast<double>(d_ + 1);
  }

  [[nodiscard]] LsoOrdering ordering(std::uint64_t id) const {
    if (id >= size_) throw Error("ordering id out of range");
    LsoOrdering o;
    o.path = id % paths_;
    id /= paths_;
    o.offset = static_cast<int>(id % static_cast<std::uint64_t>(w_));
    o.shift = static_cast<std::size_t>(id / static_cast<std::uint64_t>(w_));
    return o;
  }

  [[nodiscard]] std::uint64_t id(const LsoOrdering& o) const {
    return (static_cast<std::uint64_t>(o.shift) * static_cast<std::uint64_t>(w_) + static_cast<std::uint64_t>(o.offset)) *
               paths_ +
           o.path;
  }

  /// Group boundaries (in levels) for an offset.
  [[nodiscard]] std::vector<int> bounds(int offset) const {
    std::vector<int> b{0};
    for (int x = offset > 0 ? offset : w_; x < kLevels; x += w_) b.push_back(x);
    b.push_back(kLevels);
    return b;
  }

  /// Shifted quantized coordinates (62 significant bits each).
  void quantize(std::span<const double> p, std::size_t shift, std::uint64_t* out) const {
    for (std::size_t c = 0; c < d_; ++c) {
      double x = p[c];
      if (!(x >= 0.0 && x < 1.0)) throw Error("lso points must lie in [0,1)^d");
      out[c] = static_cast<std::uint64_t>(std::ldexp(x, kFracBits)) + shift_q_[shift];
    }
  }

  [[nodiscard]] Key key(const LsoOrdering& o, std::span<const double> p) const {
    std::array<std::uint64_t, kMaxDim> q{};
    quantize(p, o.shift, q.data());
    return key_from_quantized(o, q.data());
  }

  [[nodiscard]] Key key_from_quantized(const LsoOrdering& o, const std::uint64_t* q) const {
    Key k{};
    int pos = 0;  // bits written
    auto bnd = bounds(o.offset);
    for (std::size_t g = 0; g + 1 < bnd.size(); ++g) {
      int a = bnd[g], b = bnd[g + 1];
      int width = (b - a) * static_cast<int>(d_);
      std::uint64_t idx = group_index(q, a, b);
      std::uint64_t v = visit_position(idx, width, o.path);
      // append `width` bits of v
      for (int bit = width - 1; bit >= 0; --bit, ++pos)
        if (v >> bit & 1U) k[static_cast<std::size_t>(pos / 64)] |= std::uint64_t{1} << (63 - pos % 64);
    }
    return k;
  }

  /// Strict order: key, then id.
  [[nodiscard]] bool less(const LsoOrdering& o, std::span<const double> p, std::size_t pid, std::span<const double> q,
                          std::size_t qid) const {
    auto kp = key(o, p), kq = key(o, q);
    if (kp != kq) return kp < kq;
    return pid < qid;
  }

  /// Point ids of P in this ordering.
  [[nodiscard]] std::vector<Vertex> sort(const LsoOrdering& o, const std::vector<double>& coords) const {
    const std::size_t n = coords.size() / d_;
    std::vector<std::pair<Key, Vertex>> keyed(n);
    for (std::size_t i = 0; i < n; ++i)
      keyed[i] = {key(o, std::span<const double>(coords.data() + i * d_, d_)), static_cast<Vertex>(i)};
    std::sort(keyed.begin(), keyed.end());
    std::vector<Vertex> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = keyed[i].second;
    return out;
  }

  /// One likely witness per (shift, offset): at the first super-level where
  /// p and q fall in different subcells, the path whose middle edge joins
  /// those two subcells places them next to each other.
  [[nodiscard]] std::vector<LsoOrdering> candidates(std::span<const double> p, std::span<const double> q) const {
    std::vector<LsoOrdering> out;
    std::array<std::uint64_t, kMaxDim> qp{}, qq{};
    for (std::size_t j = 0; j <= d_; ++j) {
      quantize(p, j, qp.data());
      quantize(q, j, qq.data());
      for (int off = 0; off < w_; ++off) {
        auto bnd = bounds(off);
        for (std::size_t g = 0; g + 1 < bnd.size(); ++g) {
          std::uint64_t ia = group_index(qp.data(), bnd[g], bnd[g + 1]);
          std::uint64_t ib = group_index(qq.data(), bnd[g], bnd[g + 1]);
          if (ia == ib) continue;
          int width = (bnd[g + 1] - bnd[g]) * static_cast<int>(d_);
          std::uint64_t m = std::uint64_t{1} << width;
          std::uint64_t la = walecki_label(ia, m), lb = walecki_label(ib, m);
          std::uint64_t t = ((la + lb) & (m - 1)) / 2;
          out.push_back({j, off, t % paths_});
          break;
        }
      }
    }
    return out;
  }

  /// Vertex visited at step i of the base zig-zag path 0, 1, m-1, 2, m-2, ...
  static std::uint64_t walecki_label(std::uint64_t i, std::uint64_t m) {
    if (i == 0) return 0;
    if (i % 2 == 1) return ((i + 1) / 2) & (m - 1);
    return (m - i / 2) & (m - 1);
  }

  /// Position of subcell x along path t (rotation of the zig-zag by t),
  /// with subcells first relabelled so that path 0 is the identity.
  static std::uint64_t visit_position(std::uint64_t x, int width, std::uint64_t t) {
    if (width < 1) return x;
    const std::uint64_t m = std::uint64_t{1} << width, h = m / 2;
    t %= h;
    std::uint64_t lam = walecki_label(x, m);
    std::uint64_t delta = (lam - t) & (m - 1);
    if (delta == 0) return 0;
    if (delta <= h) return 2 * delta - 1;
    return 2 * (m - delta);
  }

 private:
  [[nodiscard]] std::uint64_t group_index(const std::uint64_t* q, int a, int b) const {
    std::uint64_t idx = 0;
    for (int l = a; l < b; ++l)
      for (std::size_t c = 0; c < d_; ++c) idx = (idx << 1) | ((q[c] >> (kLevels - 1 - l)) & 1U);
    return idx;
  }

  std::size_t d_;
  Ratio sigma_;
  int w_ = 1;
  std::uint64_t paths_ = 1;
  std::uint64_t size_ = 0;
  std::vector<std::uint64_t> shift_q_;
};

inline OrderingFamily build_ordering_family(std::size_t d, const Ratio& sigma) { return OrderingFamily(d, sigma); }

struct LsoCheck {
  bool found = false;
  std::optional<std::uint64_t> ordering;
  bool from_candidates = false;
  std::size_t between = 0;      // points strictly between p and q in the witness
  std::uint64_t orderings_tried = 0;
};

/// Does ordering o put every sample strictly between p and q into
/// ball(a, r) for a prefix and ball(b, r) for the rest (a the earlier one)?
inline bool lso_ordering_passes(const OrderingFamily& fam, const LsoOrdering& o, std::span<const double> p,
                                std::span<const double> q, const std::vector<double>& samples, double r,
                                std::size_t* between = nullptr) {
  const std::size_t d = fam.dim();
  auto kp = fam.key(o, p), kq = fam.key(o, q);
  bool p_first = kp < kq || (kp == kq && std::lexicographical_compare(p.begin(), p.end(), q.begin(), q.end()));
  auto a = p_first ? p : q, b = p_first ? q : p;
  auto ka = p_first ? kp : kq, kb = p_first ? kq : kp;
  auto dist = [&](std::span<const double> x, const double* y) {
    double s = 0;
    for (std::size_t c = 0; c < d; ++c) s += (x[c] - y[c]) * (x[c] - y[c]);
    return std::sqrt(s);
  };
  std::vector<std::pair<OrderingFamily::Key, std::size_t>> mid;
  const std::size_t count = samples.size() / d;
  for (std::size_t i = 0; i < count; ++i) {
    auto kz = fam.key(o, std::span<const double>(samples.data() + i * d, d));
    if (ka < kz && kz < kb) mid.emplace_back(kz, i);
  }
  std::sort(mid.begin(), mid.end());
  if (between) *between = mid.size();
  std::size_t i = 0;
  while (i < mid.size() && dist(a, samples.data() + mid[i].second * d) <= r) ++i;
  for (; i < mid.size(); ++i)
    if (dist(b, samples.data() + mid[i].second * d) > r) return false;
  return true;
}

/// Searches the family for an ordering whose in-between samples lie in
/// ball(p, sigma l) and ball(q, sigma l), l = |p - q|. The per-shift
/// candidates are tried first, then every ordering.
inline LsoCheck check_lso_property(const OrderingFamily& fam, std::span<const double> p, std::span<const double> q,
                                   const std::vector<double>& samples) {
  const std::size_t d = fam.dim();
  double l = 0;
  for (std::size_t c = 0; c < d; ++c) l += (p[c] - q[c]) * (p[c] - q[c]);
  l = std::sqrt(l);
  if (l == 0.0) throw Error("lso check needs p != q");
  const double r = fam.sigma().value() * l;
  LsoCheck out;
  for (const auto& o : fam.candidates(p, q)) {
    ++out.orderings_tried;
    std::size_t between = 0;
    if (lso_ordering_passes(fam, o, p, q, samples, r, &between)) {
      out.found = true;
      out.from_candidates = true;
      out.ordering = fam.id(o);
      out.between = between;
      return out;
    }
  }
  for (std::uint64_t id = 0; id < fam.size(); ++id) {
    ++out.orderings_tried;
    std::size_t between = 0;
    if (lso_ordering_passes(fam, fam.ordering(id), p, q, samples, r, &between)) {
      out.found = true;
      out.ordering = id;
      out.between = between;
      return out;
    }
  }
  return out;
}

/// sample_count uniform points of [0,1)^d, followed by `extra` (flat coords).
inline std::vector<double> lso_samples(std::size_t d, std::size_t sample_count, CounterRng& rng,
                                       const std::vector<double>& extra = {}) {
  std::vector<double> s;
  s.reserve(sample_count * d + extra.size());
  for (std::size_t i = 0; i < sample_count * d; ++i) s.push_back(rng.uniform());
  for (double x : extra) s.push_back(x);
  return s;
}

}  // namespace rspan

#endif  // RSPAN_LSO_HPP
