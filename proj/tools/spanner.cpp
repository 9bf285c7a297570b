#include <chrono>
#include <ctime>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "rspan/rspan.hpp"

using namespace rspan;
using Json = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "1.0.0";

std::string utc_now() {
  auto t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

/// Collects what a run read, wrote and was configured with.
class Manifest {
 public:
  Manifest(int argc, char** argv) : started_(utc_now()) {
    for (int i = 0; i < argc; ++i) argv_.emplace_back(argv[i]);
  }

  void set_command(const CLI::App* app) {
    command_.clear();
    config_ = Json::object();
    for (const CLI::App* a = app; a; a = a->get_subcommands().empty() ? nullptr : a->get_subcommands().front()) {
      if (a != app) command_ += command_.empty() ? a->get_name() : " " + a->get_name();
      for (const CLI::Option* opt : a->get_options()) {
        std::string key = opt->get_single_name();
        if (key == "help" || key == "version") continue;
        if (opt->count() > 0) {
          auto res = opt->results();
          std::string v;
          for (std::size_t i = 0; i < res.size(); ++i) v += (i ? "," : "") + res[i];
          config_[key] = v;
        } else if (!opt->get_default_str().empty()) {
          config_[key] = opt->get_default_str();
        }
      }
    }
  }

  std::string read(const std::string& path) {
    auto text = read_file(path);
    inputs_[path] = hex64(fnv1a64(text));
    return text;
  }

  void seed(const std::string& name, std::uint64_t s) { seeds_[name] = s; }

  [[nodiscard]] Json json() const {
    Json j;
    j["artifact_version"] = kVersion;
    j["command"] = command_;
    j["command_line"] = argv_;
    j["config"] = config_;
    j["seeds"] = seeds_;
    j["inputs"] = inputs_;
    j["outputs"] = outputs_;
    j["threads"] = thread_count();
    j["started_at"] = started_;
    j["finished_at"] = utc_now();
    return j;
  }

  /// Writes a non-JSON artifact; files get a sidecar manifest.
  void emit_text(const std::string& path, const std::string& contents) {
    if (path.empty() || path == "-") {
      std::cout << contents;
      return;
    }
    write_file(path, contents);
    outputs_[path] = hex64(fnv1a64(contents));
    write_file(path + ".manifest.json", json().dump(2) + "\n");
  }

  /// Writes a JSON report with the manifest embedded.
  void emit_json(const std::string& path, Json body) {
    body["manifest"] = json();
    auto text = body.dump(2) + "\n";
    if (path.empty() || path == "-") std::cout << text;
    else write_file(path, text);
  }

  void record_output(const std::string& path, const std::string& contents) {
    outputs_[path] = hex64(fnv1a64(contents));
  }

 private:
  std::vector<std::string> argv_;
  std::string command_, started_;
  Json config_ = Json::object(), seeds_ = Json::object(), inputs_ = Json::object(), outputs_ = Json::object();
};

Ratio ratio_arg(const std::string& s, const char* what) {
  try {
    return Ratio::parse(s);
  } catch (const Error& e) {
    throw Error(std::string(what) + ": " + e.what());
  }
}

BuildMode mode_arg(const std::string& s) {
  if (s == "faithful") return BuildMode::faithful;
  if (s == "experimental") return BuildMode::experimental;
  throw Error("mode must be 'faithful' or 'experimental'");
}

VerifyPolicy verify_arg(const std::string& s, std::size_t attempts) {
  VerifyPolicy p;
  p.max_attempts = attempts;
  if (s == "none") return p;
  if (s == "exhaustive") {
    p.mode = VerifyPolicy::Mode::exhaustive;
    return p;
  }
  if (s.rfind("sampled:", 0) == 0) {
    p.mode = VerifyPolicy::Mode::sampled;
    try {
      p.samples = std::stoull(s.substr(8));
    } catch (...) {
      throw Error("--verify sampled:K needs a number");
    }
    return p;
  }
  throw Error("--verify must be none, exhaustive or sampled:K");
}

Json info_json(const Spanner1dInfo& i) {
  Json j;
  j["construction"] = i.construction;
  j["n"] = i.n;
  j["n_padded"] = i.n_padded;
  j["xi"] = i.xi.str();
  j["degree_constant"] = i.degree_constant;
  j["expanders"] = i.expanders;
  j["edge_budget"] = i.edge_budget;
  if (i.construction == "1d-theta") {
    j["theta"] = i.theta.str();
    j["c"] = i.c;
    j["N"] = i.N;
    j["mode"] = i.mode;
    j["regime"] = i.regime;
  }
  j["warnings"] = i.warnings;
  return j;
}

Json info_json(const EuclideanInfo& i) {
  Json j;
  j["construction"] = i.construction;
  j["n"] = i.n;
  j["d"] = i.d;
  j["eps"] = i.eps.str();
  j["theta"] = i.theta.str();
  j["mode"] = i.mode;
  j["regime"] = i.regime;
  j["edge_budget"] = i.edge_budget;
  if (i.construction == "bounded-spread") {
    j["xi"] = i.xi.str();
    j["degree_constant"] = i.degree_constant;
    j["separation"] = i.separation;
    j["log2_spread"] = i.log2_spread;
    j["tree_nodes"] = i.tree_nodes;
    j["wspd_pairs"] = i.wspd_pairs;
    j["sibling_pairs"] = i.sibling_pairs;
    j["max_pairs_per_point"] = i.max_pairs_per_point;
    j["pair_constant"] = i.pair_constant;
  } else {
    j["variant"] = to_string(i.variant);
    j["c2"] = i.c2;
    j["c"] = i.c;
    j["sigma"] = i.sigma.str();
    j["lso_w"] = i.lso_w;
    j["M"] = i.M;
    j["iterations"] = i.iterations;
    if (i.theta_prime_underflow) j["theta_prime"] = nullptr;
    else j["theta_prime"] = i.theta_prime.str();
    j["theta_N"] = i.theta_N;
    j["orderings_built"] = i.orderings_built;
  }
  j["warnings"] = i.warnings;
  return j;
}

Json expander_json(const ExpanderBuild& b) {
  Json j;
  j["c"] = b.c;
  j["per_left"] = b.per_left;
  if (b.per_right) j["per_right"] = b.per_right;
  if (b.alpha) {
    j["alpha"] = b.alpha;
    j["beta"] = b.beta.str();
  }
  j["experimental"] = b.experimental;
  j["seed"] = b.seed;
  j["attempts"] = b.attempts;
  j["n"] = b.graph.n();
  j["edges"] = b.graph.num_edges();
  if (b.verification) {
    const auto& v = *b.verification;
    j["verification"] = {{"pass", v.pass},          {"exhaustive", v.exhaustive}, {"subsets_checked", v.subsets_checked},
                         {"side", v.side},          {"violating", v.violating},   {"neighborhood", v.neighborhood}};
  } else {
    j["verification"] = nullptr;
  }
  return j;
}

Json shadow_json(const std::string& kind, const Ratio& threshold, const VertexSet& B, const VertexSet& members) {
  Json j;
  j["kind"] = kind;
  j["threshold"] = threshold.str();
  j["failures"] = B.size();
  j["size"] = members.size();
  j["members"] = members.ids();
  return j;
}

/// Graph, meta and (for geometric constructions) points of a built graph.
struct LoadedGraph {
  WeightedGraph graph;
  std::optional<PointSet> points;
  CertifyContext ctx;
};

void load_graph(LoadedGraph& out, Manifest& man, const std::string& graph_path, const std::string& meta_path,
                const std::string& points_path) {
  auto mj = nlohmann::json::parse(man.read(meta_path), nullptr, false);
  if (mj.is_discarded()) throw Error(meta_path + ": not valid JSON");
  out.ctx.meta = meta_from_json(mj.contains("meta") ? mj["meta"] : mj);
  out.graph = parse_edge_list(man.read(graph_path), out.ctx.meta.n, graph_path);
  std::string pp = points_path.empty() ? out.ctx.meta.points : points_path;
  if (is_geometric_construction(out.ctx.meta.construction)) {
    if (pp.empty()) throw Error("construction '" + out.ctx.meta.construction + "' needs --points");
    out.points = parse_points(man.read(pp), pp);
    out.ctx.points = &*out.points;
  }
  out.ctx.graph = &out.graph;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Reliable geometric spanners: builders, shadows, attacks and certification"};
  app.set_version_flag("--version", std::string("spanner ") + kVersion);
  app.require_subcommand(1);
  unsigned threads = 0;
  app.add_option("--threads", threads, "Worker thread cap (0: SPANNER_THREADS or all cores)");
  Manifest man(argc, argv);

  // ---- build
  auto* build = app.add_subcommand("build", "Build a spanner and write its edge list and meta");
  build->require_subcommand(1);
  std::uint64_t seed = 0;
  std::string out, meta_out, points, xi_s = "1/16", theta_s, eps_s, mode_s = "faithful", variant_s = "simple";
  std::string sigma_s, theta_prime_s;
  std::size_t n = 0;
  std::int64_t c = kFaithfulC, c2 = 16;
  std::optional<std::int64_t> degree;
  std::uint64_t max_orderings = std::uint64_t{1} << 16;
  auto common_build = [&](CLI::App* s) {
    s->add_option("--seed", seed, "Master seed")->capture_default_str();
    s->add_option("-o,--out", out, "Edge list output")->required();
    s->add_option("--meta-out", meta_out, "Meta output (default: <out>.meta.json)");
  };
  auto* b_const = build->add_subcommand("1d-const", "O(1)-reliable exact 1D spanner H");
  common_build(b_const);
  b_const->add_option("--n", n, "Number of points on the line")->required();
  b_const->add_option("--xi", xi_s, "Expander parameter")->capture_default_str();
  b_const->add_option("--degree", degree, "Override the expander degree constant (experimental)");
  auto* b_theta = build->add_subcommand("1d-theta", "theta-reliable exact 1D spanner G_theta");
  common_build(b_theta);
  b_theta->add_option("--n", n, "Number of points on the line")->required();
  b_theta->add_option("--theta", theta_s, "Reliability parameter in (0,1)")->required();
  b_theta->add_option("--c", c, "Degree constant")->capture_default_str();
  b_theta->add_option("--mode", mode_s, "faithful | experimental")->capture_default_str();
  auto* b_hd = build->add_subcommand("hd", "(1+eps) reliable spanner from locality-sensitive orderings");
  common_build(b_hd);
  b_hd->add_option("--points", points, "Point file")->required();
  b_hd->add_option("--eps", eps_s, "Stretch parameter in (0,1)")->required();
  b_hd->add_option("--theta", theta_s, "Reliability parameter in (0,1)")->required();
  b_hd->add_option("--variant", variant_s, "simple | improved")->capture_default_str();
  b_hd->add_option("--c", c, "Per-ordering degree constant")->capture_default_str();
  b_hd->add_option("--c2", c2, "Ordering precision constant")->capture_default_str();
  b_hd->add_option("--mode", mode_s, "faithful | experimental")->capture_default_str();
  b_hd->add_option("--sigma", sigma_s, "Override the ordering precision (experimental)");
  b_hd->add_option("--theta-prime", theta_prime_s, "Override the per-ordering theta (experimental)");
  b_hd->add_option("--max-orderings", max_orderings, "Refuse larger ordering families")->capture_default_str();
  auto* b_bs = build->add_subcommand("bounded-spread", "theta-reliable (1+eps) spanner for bounded spread");
  common_build(b_bs);
  b_bs->add_option("--points", points, "Point file")->required();
  b_bs->add_option("--eps", eps_s, "Stretch parameter in (0,1)")->required();
  b_bs->add_option("--theta", theta_s, "Reliability parameter in (0, 1/2)")->required();
  b_bs->add_option("--degree", degree, "Override the expander degree constant (experimental)");

  // ---- expander
  auto* expander = app.add_subcommand("expander", "Build and verify expanders");
  expander->require_subcommand(1);
  std::size_t left = 0, right = 0, attempts = 20;
  std::int64_t alpha_i = 2;
  std::string beta_s, verify_s = "none", report;
  auto common_exp = [&](CLI::App* s) {
    s->add_option("--seed", seed, "Seed")->capture_default_str();
    s->add_option("--degree", degree, "Override the degree constant (experimental)");
    s->add_option("--verify", verify_s, "none | exhaustive | sampled:K")->capture_default_str();
    s->add_option("--max-attempts", attempts, "Resampling attempts when verifying")->capture_default_str();
    s->add_option("-o,--out", out, "Edge list output");
    s->add_option("--report", report, "Summary JSON output (default: stdout)");
  };
  auto* e_bip = expander->add_subcommand("bipartite", "Bipartite xi-expander on L = [0,left), R = [left,left+right)");
  common_exp(e_bip);
  e_bip->add_option("--left", left, "Left side size")->required();
  e_bip->add_option("--right", right, "Right side size")->required();
  e_bip->add_option("--xi", xi_s, "Expansion parameter")->capture_default_str();
  auto* e_strong = expander->add_subcommand("strong", "Strong (alpha, beta)-expander");
  common_exp(e_strong);
  e_strong->add_option("--n", n, "Vertices")->required();
  e_strong->add_option("--alpha", alpha_i, "Expansion factor")->capture_default_str();
  e_strong->add_option("--beta", beta_s, "Set size threshold")->required();
  auto* e_rel = expander->add_subcommand("reliable", "theta-reliable connectivity expander");
  common_exp(e_rel);
  e_rel->add_option("--n", n, "Vertices")->required();
  e_rel->add_option("--theta", theta_s, "Reliability parameter in (0, 1/2)")->required();

  // ---- shadow
  auto* shadow = app.add_subcommand("shadow", "Compute failure shadows");
  shadow->require_subcommand(1);
  std::string bad, threshold_s, side_s = "both";
  auto common_shadow = [&](CLI::App* s, const char* thr) {
    s->add_option("--bad", bad, "Failure set file")->required();
    s->add_option(thr, threshold_s, "Threshold in (0,1]")->required();
    s->add_option("-o,--out", out, "JSON output (default: stdout)");
  };
  auto* s_1d = shadow->add_subcommand("1d", "Left/right shadows on the integer line");
  common_shadow(s_1d, "--alpha");
  s_1d->add_option("--n", n, "Number of points")->required();
  s_1d->add_option("--side", side_s, "left | right | both")->capture_default_str();
  auto* s_qt = shadow->add_subcommand("quadtree", "Quadtree gamma-shadow");
  common_shadow(s_qt, "--gamma");
  s_qt->add_option("--points", points, "Point file")->required();
  auto* s_balls = shadow->add_subcommand("balls", "Euclidean ball shadow (exact, quadratic)");
  common_shadow(s_balls, "--alpha");
  s_balls->add_option("--points", points, "Point file")->required();
  auto* s_cones = shadow->add_subcommand("cones", "Cone-marking superset of the ball shadow");
  common_shadow(s_cones, "--alpha");
  s_cones->add_option("--points", points, "Point file")->required();

  // ---- attack / certify / loss-curve
  std::string graph, meta, kind_s = "random-k";
  std::size_t k = 0, trials = 10, full_limit = 2048;
  std::uint64_t pairs = 1000000;
  std::vector<std::size_t> ks;
  auto graph_opts = [&](CLI::App* s) {
    s->add_option("--graph", graph, "Edge list")->required();
    s->add_option("--meta", meta, "Construction meta JSON")->required();
    s->add_option("--points", points, "Point file (default: the one named in the meta)");
  };
  auto* attack = app.add_subcommand("attack", "Generate a failure set");
  graph_opts(attack);
  attack->add_option("--kind", kind_s, "random-k | interval | prefix | ball | greedy-shadow")->capture_default_str();
  attack->add_option("--k", k, "Failure budget")->required();
  attack->add_option("--seed", seed, "Seed")->capture_default_str();
  attack->add_option("-o,--out", out, "Failure set output (default: stdout)");
  auto* certify_cmd = app.add_subcommand("certify", "Certify reliability against a failure set");
  graph_opts(certify_cmd);
  certify_cmd->add_option("--bad", bad, "Failure set file")->required();
  certify_cmd->add_option("--pairs", pairs, "Sampled pair budget beyond the full-check limit")->capture_default_str();
  certify_cmd->add_option("--full-pairs-limit", full_limit, "Check all pairs up to this many survivors")
      ->capture_default_str();
  certify_cmd->add_option("--seed", seed, "Pair sampling seed")->capture_default_str();
  certify_cmd->add_option("-o,--out", out, "Report JSON (default: stdout)");
  auto* curve = app.add_subcommand("loss-curve", "Certify repeated attacks and tabulate the loss");
  graph_opts(curve);
  curve->add_option("--kind", kind_s, "Attack kind")->capture_default_str();
  curve->add_option("--ks", ks, "Failure budgets, comma separated")->required()->delimiter(',');
  curve->add_option("--trials", trials, "Trials per budget")->capture_default_str();
  curve->add_option("--seed", seed, "Seed")->capture_default_str();
  curve->add_option("--pairs", pairs, "Sampled pair budget")->capture_default_str();
  curve->add_option("--full-pairs-limit", full_limit, "Check all pairs up to this many survivors")->capture_default_str();
  curve->add_option("-o,--out", out, "CSV output (default: stdout)");

  // ---- lso
  auto* lso = app.add_subcommand("lso", "Locality-sensitive ordering family");
  lso->require_subcommand(1);
  std::size_t dim = 2, samples = 200;
  std::optional<std::uint64_t> ordering_id;
  auto* l_inspect = lso->add_subcommand("inspect", "Family parameters, optionally one ordering of a point set");
  l_inspect->add_option("--d", dim, "Dimension")->capture_default_str();
  l_inspect->add_option("--sigma", sigma_s, "Precision")->required();
  l_inspect->add_option("--points", points, "Point file to order");
  l_inspect->add_option("--ordering", ordering_id, "Ordering id (with --points)");
  l_inspect->add_option("-o,--out", out, "JSON output (default: stdout)");
  auto* l_check = lso->add_subcommand("check", "Sampled check of the ordering property");
  l_check->add_option("--d", dim, "Dimension")->capture_default_str();
  l_check->add_option("--sigma", sigma_s, "Precision")->required();
  l_check->add_option("--pairs", pairs, "Random pairs")->capture_default_str();
  l_check->add_option("--samples", samples, "In-between sample points per pair")->capture_default_str();
  l_check->add_option("--seed", seed, "Seed")->capture_default_str();
  l_check->add_option("-o,--out", out, "JSON output (default: stdout)");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    if (e.get_exit_code() == 0) return app.exit(e);
    std::cerr << "error: " << e.what() << "\n\n" << app.help();
    return 2;
  }

  try {
    if (threads > 0) set_thread_count(threads);
    man.set_command(&app);

    if (build->parsed()) {
      man.seed("seed", seed);
      if (meta_out.empty()) meta_out = out + ".meta.json";
      WeightedGraph g;
      Json info;
      GraphMeta gm;
      if (b_const->parsed()) {
        auto b = build_H(n, ratio_arg(xi_s, "--xi"), seed, degree);
        info = info_json(b.info);
        gm = meta_from(b.info, seed);
        if (degree) gm.mode = "experimental";
        g = std::move(b.graph);
      } else if (b_theta->parsed()) {
        auto b = build_G_theta(n, ratio_arg(theta_s, "--theta"), c, seed, mode_arg(mode_s));
        info = info_json(b.info);
        gm = meta_from(b.info, seed);
        g = std::move(b.graph);
      } else {
        auto P = parse_points(man.read(points), points);
        if (b_hd->parsed()) {
          HdOptions opt;
          opt.c = c;
          opt.c2 = c2;
          opt.mode = mode_arg(mode_s);
          opt.max_orderings = max_orderings;
          if (!sigma_s.empty()) opt.sigma_override = ratio_arg(sigma_s, "--sigma");
          if (!theta_prime_s.empty()) opt.theta_prime_override = ratio_arg(theta_prime_s, "--theta-prime");
          HdVariant v = variant_s == "improved" ? HdVariant::improved
                        : variant_s == "simple" ? HdVariant::simple
                                                : throw Error("--variant must be simple or improved");
          auto b = build_hd_spanner(P, ratio_arg(eps_s, "--eps"), ratio_arg(theta_s, "--theta"), v, seed, opt);
          info = info_json(b.info);
          gm = meta_from(b.info, seed, points);
          g = std::move(b.graph);
        } else {
          auto b = build_bounded_spread_spanner(P, ratio_arg(eps_s, "--eps"), ratio_arg(theta_s, "--theta"), seed,
                                                degree);
          info = info_json(b.info);
          gm = meta_from(b.info, seed, points);
          g = std::move(b.graph);
        }
      }
      auto edges = format_edge_list(g);
      write_file(out, edges);
      man.record_output(out, edges);
      info["edges"] = g.num_edges();
      Json side;
      side["meta"] = to_json(gm);
      side["info"] = info;
      side["manifest"] = man.json();
      write_file(meta_out, side.dump(2) + "\n");
      std::cerr << gm.construction << ": n=" << g.n() << " edges=" << g.num_edges() << " -> " << out << "\n";
      return 0;
    }

    if (expander->parsed()) {
      man.seed("seed", seed);
      auto policy = verify_arg(verify_s, attempts);
      ExpanderBuild b;
      Json body;
      if (e_bip->parsed()) {
        b = build_bipartite_expander(left, right, ratio_arg(xi_s, "--xi"), seed, degree, policy);
        body["kind"] = "bipartite";
        body["left"] = left;
        body["right"] = right;
        body["xi"] = ratio_arg(xi_s, "--xi").str();
      } else if (e_strong->parsed()) {
        b = build_strong_expander(n, alpha_i, ratio_arg(beta_s, "--beta"), seed, degree, policy);
        body["kind"] = "strong";
      } else {
        auto theta = ratio_arg(theta_s, "--theta");
        b = build_reliable_connectivity(n, theta, seed, degree, policy);
        body["kind"] = "reliable";
        body["theta"] = theta.str();
        if (!out.empty()) {
          Json side;
          side["meta"] = to_json(meta_reliable(n, theta, b.seed));
          side["manifest"] = man.json();
          write_file(out + ".meta.json", side.dump(2) + "\n");
        }
      }
      body.update(expander_json(b));
      if (!out.empty()) {
        auto edges = format_edge_list(b.graph);
        write_file(out, edges);
        man.record_output(out, edges);
      }
      man.emit_json(report, body);
      return b.verification && !b.verification->pass ? 1 : 0;
    }

    if (shadow->parsed()) {
      auto thr = ratio_arg(threshold_s, "threshold");
      auto B = parse_vertex_set(man.read(bad), SetRole::failure, bad);
      Json body;
      if (s_1d->parsed()) {
        auto r = shadow_1d(n, B, thr);
        const VertexSet& chosen = side_s == "left" ? r.left : side_s == "right" ? r.right : r.members;
        if (side_s != "left" && side_s != "right" && side_s != "both") throw Error("--side must be left, right or both");
        body = shadow_json("1d", thr, B, chosen);
        body["side"] = side_s;
        auto chk = check_shadow_bounds(r, B, thr);
        body["general_bound"] = chk.general_bound;
        body["general_ok"] = chk.general_ok;
        if (chk.sharp_applies) {
          body["sharp_bound"] = chk.sharp_bound;
          body["sharp_ok"] = chk.sharp_ok;
        }
      } else {
        auto P = parse_points(man.read(points), points);
        if (s_qt->parsed()) {
          body = shadow_json("quadtree", thr, B, shadow_quadtree(Quadtree(P), B, thr).members);
        } else if (s_balls->parsed()) {
          body = shadow_json("balls", thr, B, shadow_balls_oracle(P, B, thr).members);
        } else {
          auto F = cone_mark_unsafe(P, B, thr);
          body = shadow_json("cones", thr, B, F);
          auto bound = static_cast<std::int64_t>(B.size()) * (1 + cone_count(P.dim()) * thr.ceil_inverse());
          body["bound"] = bound;
          body["bound_ok"] = static_cast<std::int64_t>(F.size()) <= bound;
        }
      }
      man.emit_json(out, body);
      return 0;
    }

    if (attack->parsed()) {
      man.seed("seed", seed);
      LoadedGraph lg;
      load_graph(lg, man, graph, meta, points);
      auto B = generate_attack({parse_attack_kind(kind_s), k, seed}, lg.ctx);
      man.emit_text(out, format_vertex_set(B));
      return 0;
    }

    if (certify_cmd->parsed()) {
      man.seed("pair_sampling", seed);
      LoadedGraph lg;
      load_graph(lg, man, graph, meta, points);
      auto B = parse_vertex_set(man.read(bad), SetRole::failure, bad);
      CertifyOptions opt;
      opt.pair_budget = pairs;
      opt.full_pairs_limit = full_limit;
      opt.seed = seed;
      auto rep = certify(lg.ctx, B, opt);
      man.emit_json(out, to_json(rep));
      std::cerr << (rep.pass ? "PASS" : "FAIL") << ": |B|=" << rep.failures << " |B+|=" << rep.harmed.size()
                << " bound=" << rep.bound << " failing_outside=" << rep.failing_outside << "\n";
      return rep.pass ? 0 : 1;
    }

    if (curve->parsed()) {
      man.seed("seed", seed);
      LoadedGraph lg;
      load_graph(lg, man, graph, meta, points);
      CertifyOptions opt;
      opt.pair_budget = pairs;
      opt.full_pairs_limit = full_limit;
      auto rows = loss_curve(lg.ctx, parse_attack_kind(kind_s), ks, trials, seed, opt);
      man.emit_text(out, format_loss_csv(rows));
      return 0;
    }

    if (lso->parsed()) {
      auto fam = build_ordering_family(dim, ratio_arg(sigma_s, "--sigma"));
      Json body;
      body["d"] = dim;
      body["sigma"] = fam.sigma().str();
      body["w"] = fam.w();
      body["shifts"] = fam.num_shifts();
      body["paths"] = fam.paths();
      body["M"] = fam.size();
      if (l_inspect->parsed()) {
        std::vector<Json> shifts;
        for (std::size_t j = 0; j < fam.num_shifts(); ++j) shifts.emplace_back(fam.shift_value(j));
        body["shift_values"] = shifts;
        if (!points.empty()) {
          auto P = parse_points(man.read(points), points);
          if (P.dim() != dim) throw Error("point dimension does not match --d");
          std::uint64_t id = ordering_id.value_or(0);
          auto o = fam.ordering(id);
          body["ordering"] = {{"id", id}, {"shift", o.shift}, {"offset", o.offset}, {"path", o.path}};
          body["order"] = fam.sort(o, normalize_points(P).coords);
        }
      } else {
        man.seed("seed", seed);
        CounterRng rng(seed);
        std::uint64_t found = 0, from_cand = 0, worst_tried = 0;
        std::vector<double> p(dim), q(dim);
        for (std::uint64_t i = 0; i < pairs; ++i) {
          for (auto& x : p) x = rng.uniform();
          for (auto& x : q) x = rng.uniform();
          auto s = lso_samples(dim, samples, rng);
          auto r = check_lso_property(fam, p, q, s);
          found += r.found;
          from_cand += r.from_candidates;
          worst_tried = std::max<std::uint64_t>(worst_tried, r.orderings_tried);
        }
        body["pairs"] = pairs;
        body["samples"] = samples;
        body["found"] = found;
        body["from_candidates"] = from_cand;
        body["rate"] = pairs ? static_cast<double>(found) / static_cast<double>(pairs) : 1.0;
        body["max_orderings_tried"] = worst_tried;
      }
      man.emit_json(out, body);
      return 0;
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  std::cerr << app.help();
  return 2;
}
