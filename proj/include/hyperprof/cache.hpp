#pragma once

#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <optional>
#include <sstream>
#include <string>
#include <system_error>
#include <vector>

#include "hyperprof/cayley.hpp"
#include "hyperprof/error.hpp"
#include "hyperprof/metric.hpp"

namespace hyperprof {

// Writes `contents` to a sibling temp file and renames it over `path`.
inline void write_file_atomic(std::filesystem::path const& path, std::string const& contents) {
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw IoError("cannot write " + tmp.string());
    out << contents;
    if (!out.flush()) throw IoError("write failed for " + tmp.string());
  }
  std::error_code ec;
  std::filesystem::rename(tmp, path, ec);
  if (ec) throw IoError("cannot rename " + tmp.string() + " to " + path.string() + ": " + ec.message());
}

inline std::string read_file(std::filesystem::path const& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline std::uint64_t fnv1a64(std::string const& s) {
  std::uint64_t h = 1469598103934665603ull;
  for (unsigned char ch : s) {
    h ^= ch;
    h *= 1099511628211ull;
  }
  return h;
}

// Distance sidecar:
//   dist v1 n=<N> rows=<R>
//   rows <v_1> ... <v_R>
//   R lines of N space-separated decimal distances (row-major)
inline void write_distances(DistanceMatrix const& d, std::ostream& out) {
  out << "dist v1 n=" << d.size() << " rows=" << d.row_vertices().size() << '\n' << "rows";
  for (auto v : d.row_vertices()) out << ' ' << v;
  out << '\n';
  for (auto v : d.row_vertices()) {
    auto row = d.row(v);
    for (std::size_t j = 0; j < row.size(); ++j) out << (j ? " " : "") << row[j];
    out << '\n';
  }
}

// Rebuilds a distance matrix over `ball` from a sidecar produced by
// write_distances.  The core comes from the ball.
inline DistanceMatrix read_distances(std::istream& in, CayleyBall const& ball) {
  std::string line;
  std::size_t lineno = 1;
  unsigned long long n = 0, r = 0;
  if (!std::getline(in, line) || std::sscanf(line.c_str(), "dist v1 n=%llu rows=%llu", &n, &r) != 2) {
    throw FormatError("missing header", lineno);
  }
  if (n != ball.size()) throw FormatError("vertex count does not match the graph", lineno);
  ++lineno;
  if (!std::getline(in, line)) throw FormatError("missing rows line", lineno);
  std::istringstream rs(line);
  std::string tag;
  rs >> tag;
  if (tag != "rows") throw FormatError("expected rows line", lineno);
  std::vector<std::uint32_t> row_vertices;
  unsigned long long v;
  while (rs >> v) {
    if (v >= n) throw FormatError("row vertex out of range", lineno);
    row_vertices.push_back(static_cast<std::uint32_t>(v));
  }
  if (row_vertices.size() != r) throw FormatError("row count mismatch", lineno);
  std::vector<Distance> rows;
  rows.reserve(r * n);
  for (std::size_t i = 0; i < r; ++i) {
    ++lineno;
    if (!std::getline(in, line)) throw FormatError("missing distance row", lineno);
    std::istringstream ss(line);
    unsigned long long x;
    std::size_t count = 0;
    while (ss >> x) {
      if (x >= kUnreachable) throw FormatError("distance out of range", lineno);
      rows.push_back(static_cast<Distance>(x));
      ++count;
    }
    if (count != n) throw FormatError("expected " + std::to_string(n) + " distances", lineno);
  }
  return DistanceMatrix(n, std::move(row_vertices), std::move(rows), ball.core(), ball.adjacency());
}

// Graph plus distance sidecar, keyed by (engine spec, radius).
class BallCache {
 public:
  explicit BallCache(std::filesystem::path dir) : dir_(std::move(dir)) {
    std::error_code ec;
    std::filesystem::create_directories(dir_, ec);
    if (ec) throw IoError("cannot create cache directory " + dir_.string() + ": " + ec.message());
  }

  static std::string key(std::string const& spec, std::uint32_t radius) {
    std::ostringstream ss;
    ss << std::hex << std::setw(16) << std::setfill('0') << fnv1a64(spec + "|r=" + std::to_string(radius));
    return ss.str();
  }

  std::filesystem::path graph_path(std::string const& k) const { return dir_ / (k + ".graph"); }
  std::filesystem::path dist_path(std::string const& k) const { return dir_ / (k + ".dist"); }

  std::optional<CayleyBall> load_ball(std::string const& k) const {
    if (!std::filesystem::exists(graph_path(k))) return std::nullopt;
    std::istringstream in(read_file(graph_path(k)));
    return read_graph(in);
  }

  // Returns nullopt when absent or when it lacks rows for some core vertex
  // (or for every vertex, if `need_all_rows`).
  std::optional<DistanceMatrix> load_distances(std::string const& k, CayleyBall const& ball,
                                               bool need_all_rows) const {
    if (!std::filesystem::exists(dist_path(k))) return std::nullopt;
    std::istringstream in(read_file(dist_path(k)));
    try {
      DistanceMatrix d = read_distances(in, ball);
      if (need_all_rows && !d.full()) return std::nullopt;
      return d;
    } catch (StructureError const&) {
      return std::nullopt;
    }
  }

  void store(std::string const& k, CayleyBall const& ball, DistanceMatrix const& d) const {
    std::ostringstream g, m;
    write_graph(ball, g);
    write_distances(d, m);
    write_file_atomic(graph_path(k), g.str());
    write_file_atomic(dist_path(k), m.str());
  }

 private:
  std::filesystem::path dir_;
};

}  // namespace hyperprof
