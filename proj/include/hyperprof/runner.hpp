#pragma once

#include <chrono>
#include <cmath>
#include <filesystem>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <json.hpp>

#include "hyperprof/cache.hpp"
#include "hyperprof/cayley.hpp"
#include "hyperprof/error.hpp"
#include "hyperprof/hyperbolicity.hpp"
#include "hyperprof/metric.hpp"
#include "hyperprof/spec_parser.hpp"
#include "hyperprof/towers.hpp"

namespace hyperprof {

using Json = nlohmann::ordered_json;

inline constexpr int kReportSchemaVersion = 1;

enum class Command { delta, tower, compare, growth };

struct ExperimentConfig {
  Command command = Command::delta;

  std::string engine;
  std::optional<std::uint32_t> radius;

  bool exact_basepoints = true;
  bool slim = false;
  bool naive_oracle = false;

  std::string family;  // cyclic-p | exponent-p
  std::uint64_t p = 0;
  std::size_t levels = 0;
  std::vector<std::uint32_t> level_radii;

  std::string left, right;

  std::string out;
  std::string graph_out;
  std::string csv_out;
  std::string cache_dir;

  unsigned threads = 1;
  std::size_t max_vertices = kDefaultMaxVertices;
  std::size_t naive_cap = kDefaultNaiveCap;
  std::size_t slim_cap = kDefaultSlimCap;
};

inline void validate_config(ExperimentConfig const& c) {
  if (c.threads == 0) throw ConfigError("--threads must be at least 1");
  if (c.max_vertices == 0) throw ConfigError("--max-vertices must be positive");
  switch (c.command) {
    case Command::delta:
    case Command::growth:
      if (c.engine.empty()) throw ConfigError("--engine is required");
      if (!c.radius) throw ConfigError("--radius is required");
      break;
    case Command::compare:
      if (c.left.empty() || c.right.empty()) throw ConfigError("--left and --right are required");
      if (!c.radius) throw ConfigError("--radius is required");
      break;
    case Command::tower:
      if (c.family != "cyclic-p" && c.family != "exponent-p") {
        throw ConfigError("--family must be cyclic-p or exponent-p");
      }
      if (c.p == 0) throw ConfigError("--p is required");
      if (c.family == "cyclic-p" && c.levels == 0) throw ConfigError("--levels is required for cyclic-p");
      break;
  }
  if (c.command != Command::tower && !c.level_radii.empty()) {
    throw ConfigError("--level-radii only applies to tower");
  }
}

namespace detail {

inline double round_ms(double ms) { return std::round(ms * 1000.0) / 1000.0; }

inline Json to_json(std::array<std::uint32_t, 3> const& a) { return Json::array({a[0], a[1], a[2]}); }
inline Json to_json(std::array<std::uint32_t, 4> const& a) { return Json::array({a[0], a[1], a[2], a[3]}); }

inline void emit(std::string const& path, std::string const& text) {
  if (path.empty()) {
    std::cout << text;
    std::cout.flush();
  } else {
    write_file_atomic(path, text);
  }
}

inline std::string companion_csv_path(ExperimentConfig const& c) {
  if (!c.csv_out.empty()) return c.csv_out;
  if (c.out.empty()) return {};
  return std::filesystem::path(c.out).replace_extension(".csv").string();
}

}  // namespace detail

// Result of one subcommand: the report plus an optional CSV companion.
struct RunResult {
  Json report;
  std::string csv;
};

inline std::string render_report(Json const& report) { return report.dump(2) + "\n"; }

inline RunResult run_delta(ExperimentConfig const& c) {
  validate_config(c);
  auto start = std::chrono::steady_clock::now();
  EnginePtr engine = parse_engine_spec(c.engine);
  std::uint32_t const radius = *c.radius;

  std::optional<BallCache> cache;
  std::string key;
  if (!c.cache_dir.empty()) {
    cache.emplace(c.cache_dir);
    key = BallCache::key(engine->render(), radius);
  }

  std::optional<CayleyBall> ball;
  std::optional<DistanceMatrix> dist;
  if (cache) {
    ball = cache->load_ball(key);
    if (ball) dist = cache->load_distances(key, *ball, c.slim);
  }
  bool const hit = ball.has_value();
  if (!ball) ball = build_ball(*engine, radius, c.max_vertices);
  if (!dist) {
    dist = apsp(*ball, {.all_rows = c.slim, .core = std::nullopt, .threads = c.threads});
    if (cache) cache->store(key, *ball, *dist);
  }
  std::clog << "delta: " << engine->render() << " r=" << radius << " n=" << ball->size()
            << (cache ? (hit ? " (cache hit)" : " (cache miss)") : "") << '\n';

  HyperbolicityOptions opts;
  opts.all_basepoints = c.exact_basepoints;
  opts.slim = c.slim;
  opts.naive_oracle = c.naive_oracle;
  opts.naive_cap = c.naive_cap;
  opts.slim_cap = c.slim_cap;
  opts.threads = c.threads;
  HyperbolicityReport h = compute_hyperbolicity(*dist, opts);
  if (!h.naive_agrees()) throw Error("naive quadruple oracle disagrees with the max-min computation");

  if (!c.graph_out.empty()) {
    std::ostringstream g;
    write_graph(*ball, g);
    write_file_atomic(c.graph_out, g.str());
  }

  Json r;
  r["schema_version"] = kReportSchemaVersion;
  r["command"] = "delta";
  r["engine"] = engine->render();
  r["radius"] = radius;
  r["core_radius"] = ball->trusted_radius;
  r["n_vertices"] = ball->size();
  r["n_edges"] = ball->edges.size();
  r["core_size"] = h.core_size;
  r["delta_base_x2"] = h.base.delta.doubled();
  r["delta_all_x2"] = h.all ? Json(h.all->delta.doubled()) : Json(nullptr);
  r["delta_slim_x2"] = h.slim ? Json(h.slim->delta.doubled()) : Json(nullptr);
  r["witness_base"] = detail::to_json(h.base.xyz);
  r["witness_all"] = h.all ? detail::to_json(h.all->wxyz) : Json(nullptr);
  r["witness_slim"] = h.slim ? detail::to_json(h.slim->xyzm) : Json(nullptr);
  r["naive_delta_all_x2"] = h.naive ? Json(h.naive->delta.doubled()) : Json(nullptr);
  r["naive_agrees"] = h.naive ? Json(true) : Json(nullptr);
  r["method"] = h.method();
  r["elapsed_ms"] = detail::round_ms(
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  return {std::move(r), {}};
}

inline RunResult run_tower(ExperimentConfig const& c) {
  validate_config(c);
  auto start = std::chrono::steady_clock::now();
  QuotientTower t = c.family == "cyclic-p" ? tower_cyclic_p(c.p, c.levels, c.max_vertices) : tower_exponent_p(c.p);

  HyperbolicityOptions opts;
  opts.slim = c.slim;
  opts.naive_oracle = c.naive_oracle;
  opts.naive_cap = c.naive_cap;
  opts.slim_cap = c.slim_cap;
  opts.threads = c.threads;
  TowerReport tr = tower_delta_profile(t, RadiusPolicy{c.level_radii}, opts, c.max_vertices);
  for (auto const& lv : tr.levels) {
    if (!lv.hyperbolicity.naive_agrees()) throw Error("naive quadruple oracle disagrees at level " +
                                                      std::to_string(lv.level));
  }

  Json r;
  r["schema_version"] = kReportSchemaVersion;
  r["command"] = "tower";
  r["family"] = t.family;
  r["p"] = c.p;
  r["levels_requested"] = tr.requested_levels;
  Json levels = Json::array();
  std::ostringstream csv;
  csv << "level,order,delta_all_x2\n";
  for (auto const& lv : tr.levels) {
    auto const& h = lv.hyperbolicity;
    Json l;
    l["level"] = lv.level;
    l["order"] = lv.order;
    l["radius"] = lv.radius;
    l["core_size"] = lv.core_size;
    l["delta_base_x2"] = h.base.delta.doubled();
    l["delta_all_x2"] = h.all->delta.doubled();
    l["delta_slim_x2"] = h.slim ? Json(h.slim->delta.doubled()) : Json(nullptr);
    l["witness_all"] = detail::to_json(h.all->wxyz);
    l["naive_delta_all_x2"] = h.naive ? Json(h.naive->delta.doubled()) : Json(nullptr);
    l["elapsed_ms"] = detail::round_ms(h.elapsed_ms);
    levels.push_back(std::move(l));
    csv << lv.level << ',' << lv.order << ',' << h.all->delta.doubled() << '\n';
  }
  r["levels"] = std::move(levels);
  r["truncated"] = tr.truncated;
  r["truncation_reason"] = tr.truncated ? Json(tr.truncation_reason) : Json(nullptr);
  r["verdict"] = tr.verdict;
  r["verdict_note"] = kTowerVerdictNote;
  r["elapsed_ms"] = detail::round_ms(
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  return {std::move(r), csv.str()};
}

inline RunResult run_compare(ExperimentConfig const& c) {
  validate_config(c);
  auto start = std::chrono::steady_clock::now();
  EnginePtr left = parse_engine_spec(c.left);
  EnginePtr right = parse_engine_spec(c.right);
  FreeProductComparison cmp = compare_free_product(left, right, *c.radius, c.max_vertices, c.threads);

  Json r;
  r["schema_version"] = kReportSchemaVersion;
  r["command"] = "compare";
  r["left"] = cmp.left;
  r["right"] = cmp.right;
  r["product"] = cmp.product;
  r["radius"] = cmp.radius;
  r["core_radius"] = cmp.radius / 2;
  r["left_delta_all_x2"] = cmp.left_delta.delta.doubled();
  r["right_delta_all_x2"] = cmp.right_delta.delta.doubled();
  r["product_delta_all_x2"] = cmp.product_delta.delta.doubled();
  r["left_witness"] = detail::to_json(cmp.left_delta.wxyz);
  r["right_witness"] = detail::to_json(cmp.right_delta.wxyz);
  r["product_witness"] = detail::to_json(cmp.product_delta.wxyz);
  r["consistent"] = cmp.consistent;
  r["gap_x2"] = cmp.gap.doubled();
  r["method"] = "four-point max-min product, all core basepoints";
  r["elapsed_ms"] = detail::round_ms(
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  return {std::move(r), {}};
}

inline RunResult run_growth(ExperimentConfig const& c) {
  validate_config(c);
  auto start = std::chrono::steady_clock::now();
  EnginePtr engine = parse_engine_spec(c.engine);
  auto counts = ball_growth(*engine, *c.radius, c.max_vertices);

  std::ostringstream csv;
  csv << "radius,count\n";
  for (std::size_t i = 0; i < counts.size(); ++i) csv << i << ',' << counts[i] << '\n';

  Json r;
  r["schema_version"] = kReportSchemaVersion;
  r["command"] = "growth";
  r["engine"] = engine->render();
  r["radius"] = *c.radius;
  r["growth"] = counts;
  r["elapsed_ms"] = detail::round_ms(
      std::chrono::duration<double, std::milli>(std::chrono::steady_clock::now() - start).count());
  return {std::move(r), csv.str()};
}

inline RunResult run_experiment(ExperimentConfig const& c) {
  switch (c.command) {
    case Command::delta: return run_delta(c);
    case Command::tower: return run_tower(c);
    case Command::compare: return run_compare(c);
    case Command::growth: return run_growth(c);
  }
  throw ConfigError("unknown command");
}

// Runs the experiment and writes the report to --out (stdout when absent)
// plus the CSV companion to --csv or next to --out.  growth is CSV-first:
// without --out its CSV goes to stdout and no report is printed.
inline RunResult run_and_write(ExperimentConfig const& c) {
  RunResult res = run_experiment(c);
  bool const csv_only = c.command == Command::growth && c.out.empty();
  if (!csv_only) detail::emit(c.out, render_report(res.report));
  if (!res.csv.empty()) {
    std::string csv_path = detail::companion_csv_path(c);
    if (!csv_path.empty()) {
      write_file_atomic(csv_path, res.csv);
    } else if (csv_only) {
      std::cout << res.csv;
    }
  }
  return res;
}

// 2: configuration, 3: size cap, 4: I/O, 1: anything else.
inline int exit_code_for(std::exception const& e) {
  if (dynamic_cast<ConfigError const*>(&e) || dynamic_cast<ParseError const*>(&e) ||
      dynamic_cast<ValidationError const*>(&e)) {
    return 2;
  }
  if (dynamic_cast<SizeError const*>(&e)) return 3;
  if (dynamic_cast<IoError const*>(&e) || dynamic_cast<FormatError const*>(&e)) return 4;
  return 1;
}

}  // namespace hyperprof
