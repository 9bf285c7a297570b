#ifndef RSPAN_IO_HPP
#define RSPAN_IO_HPP

#include <algorithm>
#include <charconv>
#include <cstdio>
#include <cstdint>
#include <fstream>
#include <iterator>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "rspan/error.hpp"
#include "rspan/graph.hpp"

namespace rspan {

/// Shortest decimal text that parses back to the same double.
inline std::string format_double(double x) {
  char buf[64];
  auto [end, ec] = std::to_chars(buf, buf + sizeof buf, x);
  if (ec != std::errc{}) throw Error("cannot format number");
  return std::string(buf, end);
}

namespace detail {

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error("cannot open '" + path + "'");
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline std::vector<std::string_view> split_ws(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t i = 0;
  while (i < line.size()) {
    while (i < line.size() && (line[i] == ' ' || line[i] == '\t' || line[i] == '\r')) ++i;
    std::size_t j = i;
    while (j < line.size() && line[j] != ' ' && line[j] != '\t' && line[j] != '\r') ++j;
    if (j > i) out.push_back(line.substr(i, j - i));
    i = j;
  }
  return out;
}

template <class T>
T parse_number(std::string_view tok, const std::string& where) {
  T value{};
  auto [ptr, ec] = std::from_chars(tok.data(), tok.data() + tok.size(), value);
  if (ec != std::errc{} || ptr != tok.data() + tok.size())
    throw Error(where + ": bad number '" + std::string(tok) + "'");
  return value;
}

/// Calls fn(line_no, tokens) for every non-empty, non-comment line.
template <class Fn>
void for_each_record(const std::string& text, Fn&& fn) {
  std::size_t line_no = 0, pos = 0;
  while (pos <= text.size()) {
    std::size_t eol = text.find('\n', pos);
    if (eol == std::string::npos) eol = text.size();
    ++line_no;
    std::string_view line(text.data() + pos, eol - pos);
    pos = eol + 1;
    if (auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    auto toks = split_ws(line);
    if (!toks.empty()) fn(line_no, toks);
    if (eol == text.size()) break;
  }
}

}  // namespace detail

inline PointSet parse_points(const std::string& text, const std::string& name = "points") {
  std::vector<double> coords;
  std::size_t dim = 0;
  detail::for_each_record(text, [&](std::size_t line_no, const std::vector<std::string_view>& toks) {
    std::string where = name + ":" + std::to_string(line_no);
    if (dim == 0) dim = toks.size();
    if (toks.size() != dim) throw Error(where + ": expected " + std::to_string(dim) + " coordinates");
    for (auto t : toks) coords.push_back(detail::parse_number<double>(t, where));
  });
  if (dim == 0) throw Error(name + ": no points");
  return PointSet(dim, std::move(coords));
}

inline PointSet read_points(const std::string& path) { return parse_points(detail::slurp(path), path); }

inline std::string format_points(const PointSet& p) {
  std::string out;
  for (std::size_t i = 0; i < p.size(); ++i) {
    auto row = p[i];
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (k) out += ' ';
      out += format_double(row[k]);
    }
    out += '\n';
  }
  return out;
}

/// "u v w" per line, u < v, sorted.
inline std::string format_edge_list(const WeightedGraph& g) {
  std::string out;
  out.reserve(g.num_edges() * 24);
  char buf[32];
  for (Vertex u = 0; u < g.n(); ++u) {
    auto row = g.neighbors(u);
    auto w = g.weights(u);
    for (std::size_t k = 0; k < row.size(); ++k) {
      if (row[k] <= u) continue;
      auto r1 = std::to_chars(buf, buf + sizeof buf, u);
      out.append(buf, r1.ptr);
      out += ' ';
      auto r2 = std::to_chars(buf, buf + sizeof buf, row[k]);
      out.append(buf, r2.ptr);
      out += ' ';
      out += format_double(w[k]);
      out += '\n';
    }
  }
  return out;
}

/// n is taken from the caller when known, else from the largest endpoint.
inline WeightedGraph parse_edge_list(const std::string& text, std::size_t n = 0, const std::string& name = "edges") {
  std::vector<Edge> edges;
  std::size_t max_id = 0;
  detail::for_each_record(text, [&](std::size_t line_no, const std::vector<std::string_view>& toks) {
    std::string where = name + ":" + std::to_string(line_no);
    if (toks.size() != 3) throw Error(where + ": expected 'u v w'");
    Edge e{detail::parse_number<Vertex>(toks[0], where), detail::parse_number<Vertex>(toks[1], where),
           detail::parse_number<double>(toks[2], where)};
    max_id = std::max<std::size_t>(max_id, std::max(e.u, e.v));
    edges.push_back(e);
  });
  if (n == 0) n = edges.empty() ? 0 : max_id + 1;
  return WeightedGraph::from_edges(n, std::move(edges));
}

inline WeightedGraph read_edge_list(const std::string& path, std::size_t n = 0) {
  return parse_edge_list(detail::slurp(path), n, path);
}

/// Whitespace-separated vertex ids.
inline VertexSet parse_vertex_set(const std::string& text, SetRole role = SetRole::generic,
                                  const std::string& name = "vertices") {
  std::vector<Vertex> ids;
  detail::for_each_record(text, [&](std::size_t line_no, const std::vector<std::string_view>& toks) {
    for (auto t : toks) ids.push_back(detail::parse_number<Vertex>(t, name + ":" + std::to_string(line_no)));
  });
  return VertexSet(std::move(ids), role);
}

inline VertexSet read_vertex_set(const std::string& path, SetRole role = SetRole::generic) {
  return parse_vertex_set(detail::slurp(path), role, path);
}

inline std::string format_vertex_set(const VertexSet& s) {
  std::string out;
  for (Vertex v : s) {
    out += std::to_string(v);
    out += '\n';
  }
  return out;
}

inline void write_file(const std::string& path, std::string_view contents) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error("cannot write '" + path + "'");
  out.write(contents.data(), static_cast<std::streamsize>(contents.size()));
  if (!out) throw Error("write failed for '" + path + "'");
}

inline std::string read_file(const std::string& path) { return detail::slurp(path); }

/// FNV-1a 64-bit, used for input fingerprints in run manifests.
inline std::uint64_t fnv1a64(std::string_view data) {
  std::uint64_t h = 0xCBF29CE484222325ULL;
  for (unsigned char c : data) {
    h ^= c;
    h *= 0x100000001B3ULL;
  }
  return h;
}

inline std::string hex64(std::uint64_t x) {
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(x));
  return buf;
}

}  // namespace rspan

#endif  // RSPAN_IO_HPP
