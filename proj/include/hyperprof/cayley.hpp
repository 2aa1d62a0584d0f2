#pragma once

#include <algorithm>
#include <cstdint>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hyperprof/engine.hpp"
#include "hyperprof/error.hpp"

namespace hyperprof {

inline constexpr std::size_t kDefaultMaxVertices = 20000;

// Undirected edge u -- v with v = u * generator^sign.
struct Edge {
  std::uint32_t u = 0;
  std::uint32_t v = 0;
  std::uint32_t generator = 0;
  int sign = 1;

  friend bool operator==(Edge const&, Edge const&) = default;
};

// Compressed adjacency lists.
struct Adjacency {
  std::vector<std::uint32_t> offsets;  // size n + 1
  std::vector<std::uint32_t> targets;

  std::size_t size() const { return offsets.empty() ? 0 : offsets.size() - 1; }

  std::pair<std::uint32_t const*, std::uint32_t const*> neighbors(std::uint32_t v) const {
    return {targets.data() + offsets[v], targets.data() + offsets[v + 1]};
  }
};

// Finite ball of a Cayley graph around the identity (vertex 0).
//
// Vertices are numbered by depth, then by first discovery scanning
// generators in order with +1 before -1.  `elements` is empty for balls
// read back from a graph file.  When the ball is the whole (finite) group
// every distance is exact, and the trusted radius equals the radius.
struct CayleyBall {
  std::vector<Element> elements;
  std::vector<std::uint32_t> depth;
  std::vector<Edge> edges;
  std::uint32_t radius = 0;
  std::uint32_t trusted_radius = 0;
  std::uint32_t generator_count = 0;

  std::size_t size() const { return depth.size(); }

  Adjacency adjacency() const {
    Adjacency adj;
    std::size_t const n = size();
    std::vector<std::uint32_t> degree(n, 0);
    for (Edge const& e : edges) {
      ++degree[e.u];
      ++degree[e.v];
    }
    adj.offsets.assign(n + 1, 0);
    for (std::size_t i = 0; i < n; ++i) adj.offsets[i + 1] = adj.offsets[i] + degree[i];
    adj.targets.resize(adj.offsets[n]);
    std::vector<std::uint32_t> fill(adj.offsets.begin(), adj.offsets.end() - 1);
    for (Edge const& e : edges) {
      adj.targets[fill[e.u]++] = e.v;
      adj.targets[fill[e.v]++] = e.u;
    }
    for (std::size_t i = 0; i < n; ++i) {
      std::sort(adj.targets.begin() + adj.offsets[i], adj.targets.begin() + adj.offsets[i + 1]);
    }
    return adj;
  }

  // Vertices within the trusted radius.  BFS numbering makes this a prefix.
  std::vector<std::uint32_t> core() const {
    std::vector<std::uint32_t> out;
    for (std::uint32_t i = 0; i < size(); ++i) {
      if (depth[i] <= trusted_radius) out.push_back(i);
    }
    return out;
  }

  bool is_closed() const { return trusted_radius == radius; }
};

namespace detail {

struct PairHash {
  std::size_t operator()(std::pair<std::uint32_t, std::uint32_t> p) const noexcept {
    return std::hash<std::uint64_t>{}((std::uint64_t{p.first} << 32) | p.second);
  }
};

inline constexpr std::uint32_t kUnbounded = std::numeric_limits<std::uint32_t>::max();

inline CayleyBall breadth_first_ball(GroupEngine const& engine, std::uint32_t radius, std::size_t max_vertices) {
  CayleyBall ball;
  ball.generator_count = static_cast<std::uint32_t>(engine.rank());

  std::unordered_map<Element, std::uint32_t, ElementHash> index;
  std::unordered_set<std::pair<std::uint32_t, std::uint32_t>, PairHash> seen_edges;
  auto add_vertex = [&](Element e, std::uint32_t d) {
    if (ball.elements.size() >= max_vertices) {
      throw SizeError("Cayley ball exceeds the vertex cap of " + std::to_string(max_vertices), ball.elements.size());
    }
    auto id = static_cast<std::uint32_t>(ball.elements.size());
    index.emplace(e, id);
    ball.elements.push_back(std::move(e));
    ball.depth.push_back(d);
    return id;
  };

  add_vertex(engine.identity(), 0);
  bool closed = true;
  std::uint32_t max_depth = 0;
  for (std::size_t head = 0; head < ball.elements.size(); ++head) {
    auto u = static_cast<std::uint32_t>(head);
    std::uint32_t du = ball.depth[u];
    for (std::uint32_t g = 0; g < engine.rank(); ++g) {
      for (int sign : {1, -1}) {
        Element next = engine.multiply_gen(ball.elements[u], {g, sign});
        auto it = index.find(next);
        std::uint32_t v;
        if (it != index.end()) {
          v = it->second;
        } else if (du < radius) {
          v = add_vertex(std::move(next), du + 1);
          max_depth = std::max(max_depth, du + 1);
        } else {
          closed = false;
          continue;
        }
        if (u == v) continue;
        auto key = std::minmax(u, v);
        if (seen_edges.insert({key.first, key.second}).second) ball.edges.push_back({u, v, g, sign});
      }
    }
  }

  ball.radius = radius == kUnbounded ? max_depth : radius;
  ball.trusted_radius = closed ? ball.radius : ball.radius / 2;
  return ball;
}

}  // namespace detail

// Radius-r ball around the identity.  Throws SizeError past max_vertices.
inline CayleyBall build_ball(GroupEngine const& engine, std::uint32_t radius,
                             std::size_t max_vertices = kDefaultMaxVertices) {
  return detail::breadth_first_ball(engine, radius, max_vertices);
}

// Whole Cayley graph of a finite group; its radius is the eccentricity of
// the identity.  Infinite engines run into the vertex cap.
inline CayleyBall build_full_graph(GroupEngine const& engine, std::size_t max_vertices = kDefaultMaxVertices) {
  if (auto ord = engine.order(); !ord || *ord > max_vertices) {
    throw SizeError("group " + engine.render() + " exceeds the vertex cap of " + std::to_string(max_vertices),
                    max_vertices);
  }
  return detail::breadth_first_ball(engine, detail::kUnbounded, max_vertices);
}

// |B_0|, ..., |B_r|.
inline std::vector<std::size_t> ball_growth(GroupEngine const& engine, std::uint32_t radius,
                                            std::size_t max_vertices = kDefaultMaxVertices) {
  CayleyBall ball = build_ball(engine, radius, max_vertices);
  std::vector<std::size_t> counts(radius + 1, 0);
  for (auto d : ball.depth) ++counts[d];
  for (std::size_t i = 1; i < counts.size(); ++i) counts[i] += counts[i - 1];
  return counts;
}

// Builds a ball-shaped graph from an explicit edge list, rooted at vertex 0.
// The whole graph is treated as exact (trusted radius = radius).
inline CayleyBall ball_from_edges(std::size_t n, std::vector<std::pair<std::uint32_t, std::uint32_t>> const& pairs) {
  CayleyBall ball;
  for (auto [u, v] : pairs) {
    if (u >= n || v >= n) throw StructureError("edge endpoint out of range");
    ball.edges.push_back({u, v, 0, 1});
  }
  ball.generator_count = 1;
  ball.depth.assign(n, detail::kUnbounded);
  Adjacency adj = ball.adjacency();
  std::vector<std::uint32_t> queue{0};
  ball.depth[0] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    auto [first, last] = adj.neighbors(queue[head]);
    for (auto p = first; p != last; ++p) {
      if (ball.depth[*p] != detail::kUnbounded) continue;
      ball.depth[*p] = ball.depth[queue[head]] + 1;
      queue.push_back(*p);
    }
  }
  if (queue.size() != n) throw StructureError("graph is disconnected");
  ball.radius = *std::max_element(ball.depth.begin(), ball.depth.end());
  ball.trusted_radius = ball.radius;
  return ball;
}

// Text format:
//   cayley v1 n=<N> r=<R> t=<T> gens=<K>
//   v <index> <depth>        (N lines, indices 0..N-1 in order)
//   e <u> <v> <gen> <sign>   (one per undirected edge)
inline void write_graph(CayleyBall const& ball, std::ostream& out) {
  out << "cayley v1 n=" << ball.size() << " r=" << ball.radius << " t=" << ball.trusted_radius
      << " gens=" << ball.generator_count << '\n';
  for (std::size_t i = 0; i < ball.size(); ++i) out << "v " << i << ' ' << ball.depth[i] << '\n';
  for (Edge const& e : ball.edges) out << "e " << e.u << ' ' << e.v << ' ' << e.generator << ' ' << e.sign << '\n';
}

inline CayleyBall read_graph(std::istream& in) {
  CayleyBall ball;
  std::string line;
  std::size_t lineno = 0;

  if (!std::getline(in, line)) throw FormatError("missing header", 1);
  ++lineno;
  unsigned long long n = 0, r = 0, t = 0, k = 0;
  {
    std::istringstream ss(line);
    std::string magic, version, fn, fr, ft, fk;
    if (!(ss >> magic >> version >> fn >> fr >> ft >> fk) || magic != "cayley" || version != "v1") {
      throw FormatError(line.empty() ? "missing header" : "malformed header", lineno);
    }
    auto field = [&](std::string const& f, std::string const& key, unsigned long long& dst) {
      if (f.rfind(key, 0) != 0) throw FormatError("expected field " + key, lineno);
      std::istringstream fs(f.substr(key.size()));
      if (!(fs >> dst) || !fs.eof()) throw FormatError("bad value for " + key, lineno);
    };
    field(fn, "n=", n);
    field(fr, "r=", r);
    field(ft, "t=", t);
    field(fk, "gens=", k);
    std::string extra;
    if (ss >> extra) throw FormatError("trailing header fields", lineno);
  }
  ball.radius = static_cast<std::uint32_t>(r);
  ball.trusted_radius = static_cast<std::uint32_t>(t);
  ball.generator_count = static_cast<std::uint32_t>(k);
  ball.depth.reserve(n);

  std::unordered_set<std::pair<std::uint32_t, std::uint32_t>, detail::PairHash> seen;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty()) continue;
    std::istringstream ss(line);
    std::string tag;
    ss >> tag;
    if (tag == "v") {
      unsigned long long idx, d;
      if (!(ss >> idx >> d)) throw FormatError("malformed vertex line", lineno);
      if (!ball.edges.empty()) throw FormatError("vertex line after edges", lineno);
      if (idx != ball.depth.size()) throw FormatError("vertex index out of order", lineno);
      if (idx >= n) throw FormatError("more than n vertices", lineno);
      ball.depth.push_back(static_cast<std::uint32_t>(d));
    } else if (tag == "e") {
      unsigned long long u, v, g;
      int sign;
      if (!(ss >> u >> v >> g >> sign)) throw FormatError("malformed edge line", lineno);
      if (u >= n || v >= n) throw FormatError("edge references a vertex >= n", lineno);
      if (g >= k) throw FormatError("edge references a generator >= gens", lineno);
      if (sign != 1 && sign != -1) throw FormatError("edge sign must be 1 or -1", lineno);
      if (u == v) throw FormatError("self-loop", lineno);
      auto lo = static_cast<std::uint32_t>(std::min(u, v));
      auto hi = static_cast<std::uint32_t>(std::max(u, v));
      if (!seen.insert({lo, hi}).second) throw FormatError("duplicate edge", lineno);
      ball.edges.push_back(
          {static_cast<std::uint32_t>(u), static_cast<std::uint32_t>(v), static_cast<std::uint32_t>(g), sign});
    } else {
      throw FormatError("unknown record '" + tag + "'", lineno);
    }
    std::string extra;
    if (ss >> extra) throw FormatError("trailing fields", lineno);
  }
  if (ball.depth.size() != n) throw FormatError("expected " + std::to_string(n) + " vertices", lineno);
  if (n > 0 && ball.depth[0] != 0) throw FormatError("vertex 0 must have depth 0", lineno);
  return ball;
}

}  // namespace hyperprof
