#pragma once

#include <algorithm>
#include <array>
#include <compare>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "hyperprof/cayley.hpp"
#include "hyperprof/error.hpp"
#include "hyperprof/parallel.hpp"

namespace hyperprof {

inline constexpr std::size_t kDefaultNaiveCap = 80;
inline constexpr std::size_t kDefaultSlimCap = 200;

// Exact half-integer stored as twice its value.
class HalfInt {
 public:
  constexpr HalfInt() = default;
  static constexpr HalfInt from_doubled(std::int64_t doubled) { return HalfInt(doubled); }
  static constexpr HalfInt from_int(std::int64_t v) { return HalfInt(2 * v); }

  constexpr std::int64_t doubled() const { return doubled_; }
  constexpr double value() const { return static_cast<double>(doubled_) / 2.0; }

  friend constexpr auto operator<=>(HalfInt, HalfInt) = default;
  friend constexpr HalfInt operator+(HalfInt a, HalfInt b) { return HalfInt(a.doubled_ + b.doubled_); }
  friend constexpr HalfInt operator-(HalfInt a, HalfInt b) { return HalfInt(a.doubled_ - b.doubled_); }

  std::string to_string() const {
    std::int64_t whole = doubled_ / 2;
    std::string s = std::to_string(whole);
    if (doubled_ % 2 != 0) {
      if (doubled_ < 0 && whole == 0) s = "-0";
      s += ".5";
    }
    return s;
  }

 private:
  constexpr explicit HalfInt(std::int64_t d) : doubled_(d) {}
  std::int64_t doubled_ = 0;
};

template <typename T>
class SquareMatrix {
 public:
  SquareMatrix() = default;
  explicit SquareMatrix(std::size_t n, T fill = T{}) : n_(n), data_(n * n, fill) {}

  std::size_t size() const { return n_; }
  T& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  T const& operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }
  std::span<T const> row(std::size_t i) const { return {data_.data() + i * n_, n_}; }

  friend bool operator==(SquareMatrix const&, SquareMatrix const&) = default;

 private:
  std::size_t n_ = 0;
  std::vector<T> data_;
};

// (A (x) B)[x][y] = max_z min(A[x][z], B[z][y]).
template <typename T>
SquareMatrix<T> max_min_product(SquareMatrix<T> const& a, SquareMatrix<T> const& b) {
  if (a.size() != b.size()) throw StructureError("max-min product of matrices with different sizes");
  std::size_t const n = a.size();
  SquareMatrix<T> out(n);
  for (std::size_t x = 0; x < n; ++x) {
    auto ax = a.row(x);
    for (std::size_t y = 0; y < n; ++y) {
      T best = std::numeric_limits<T>::lowest();
      for (std::size_t z = 0; z < n; ++z) best = std::max(best, std::min(ax[z], b(z, y)));
      out(x, y) = best;
    }
  }
  return out;
}

using Distance = std::uint16_t;
inline constexpr Distance kUnreachable = std::numeric_limits<Distance>::max();

// Graph distances from a set of source rows to every vertex, together with
// the core on which hyperbolicity is evaluated.  Every core vertex has a row.
class DistanceMatrix {
 public:
  DistanceMatrix(std::size_t n, std::vector<std::uint32_t> row_vertices, std::vector<Distance> rows,
                 std::vector<std::uint32_t> core, Adjacency adjacency)
      : n_(n),
        row_vertices_(std::move(row_vertices)),
        rows_(std::move(rows)),
        core_(std::move(core)),
        adjacency_(std::move(adjacency)) {
    row_of_.assign(n_, -1);
    for (std::size_t i = 0; i < row_vertices_.size(); ++i) row_of_[row_vertices_[i]] = static_cast<std::int32_t>(i);
    for (auto c : core_) {
      if (c >= n_ || row_of_[c] < 0) throw StructureError("core vertex without a distance row");
    }
  }

  std::size_t size() const { return n_; }
  std::vector<std::uint32_t> const& core() const { return core_; }
  std::vector<std::uint32_t> const& row_vertices() const { return row_vertices_; }
  Adjacency const& adjacency() const { return adjacency_; }
  bool has_row(std::uint32_t v) const { return v < n_ && row_of_[v] >= 0; }
  bool full() const { return row_vertices_.size() == n_; }

  std::span<Distance const> row(std::uint32_t v) const {
    if (!has_row(v)) throw StructureError("no distance row for vertex " + std::to_string(v));
    return {rows_.data() + static_cast<std::size_t>(row_of_[v]) * n_, n_};
  }

  std::uint32_t operator()(std::uint32_t x, std::uint32_t y) const {
    if (x >= n_ || y >= n_) throw StructureError("vertex index out of range");
    if (row_of_[x] >= 0) return rows_[static_cast<std::size_t>(row_of_[x]) * n_ + y];
    if (row_of_[y] >= 0) return rows_[static_cast<std::size_t>(row_of_[y]) * n_ + x];
    throw StructureError("no distance row for vertices " + std::to_string(x) + ", " + std::to_string(y));
  }

  // Same distances, evaluated on a different core.
  DistanceMatrix with_core(std::vector<std::uint32_t> core) const {
    DistanceMatrix copy = *this;
    for (auto c : core) {
      if (!has_row(c)) throw StructureError("core vertex without a distance row");
    }
    std::sort(core.begin(), core.end());
    core.erase(std::unique(core.begin(), core.end()), core.end());
    copy.core_ = std::move(core);
    return copy;
  }

 private:
  std::size_t n_;
  std::vector<std::uint32_t> row_vertices_;
  std::vector<Distance> rows_;
  std::vector<std::uint32_t> core_;
  Adjacency adjacency_;
  std::vector<std::int32_t> row_of_;
};

inline void bfs_distances(Adjacency const& adj, std::uint32_t source, std::span<Distance> out) {
  std::fill(out.begin(), out.end(), kUnreachable);
  std::vector<std::uint32_t> queue;
  queue.reserve(out.size());
  queue.push_back(source);
  out[source] = 0;
  for (std::size_t head = 0; head < queue.size(); ++head) {
    std::uint32_t u = queue[head];
    auto [first, last] = adj.neighbors(u);
    for (auto p = first; p != last; ++p) {
      if (out[*p] != kUnreachable) continue;
      out[*p] = static_cast<Distance>(out[u] + 1);
      queue.push_back(*p);
    }
  }
}

struct ApspOptions {
  // false: rows only for core vertices, enough for the four-point values
  // and the slim-triangle scan.
  bool all_rows = true;
  std::optional<std::vector<std::uint32_t>> core;  // default: depth <= trusted radius
  unsigned threads = 1;
};

inline DistanceMatrix apsp(CayleyBall const& ball, ApspOptions const& opts = {}) {
  std::size_t const n = ball.size();
  if (n == 0) throw StructureError("empty graph");
  if (n >= kUnreachable) throw SizeError("graph too large for 16-bit distances", n);
  std::vector<std::uint32_t> core = opts.core ? *opts.core : ball.core();
  std::sort(core.begin(), core.end());
  core.erase(std::unique(core.begin(), core.end()), core.end());
  for (auto c : core) {
    if (c >= n) throw StructureError("core vertex " + std::to_string(c) + " out of range");
  }

  std::vector<std::uint32_t> sources;
  if (opts.all_rows) {
    sources.resize(n);
    for (std::uint32_t i = 0; i < n; ++i) sources[i] = i;
  } else {
    sources = core;
  }

  Adjacency adj = ball.adjacency();
  std::vector<Distance> rows(sources.size() * n);
  parallel_for(sources.size(), opts.threads, [&](std::size_t i) {
    bfs_distances(adj, sources[i], std::span<Distance>(rows.data() + i * n, n));
  });
  if (std::find(rows.begin(), rows.end(), kUnreachable) != rows.end()) {
    throw StructureError("graph is disconnected");
  }
  return DistanceMatrix(n, std::move(sources), std::move(rows), std::move(core), std::move(adj));
}

// (x.y)_w = (d(x,w) + d(y,w) - d(x,y)) / 2.
inline HalfInt gromov_product(DistanceMatrix const& d, std::uint32_t x, std::uint32_t y, std::uint32_t w) {
  return HalfInt::from_doubled(static_cast<std::int64_t>(d(x, w)) + d(y, w) - d(x, y));
}

// Gromov products at basepoint w over the core, in doubled units.
// Entry (i, j) belongs to core()[i], core()[j].
struct GromovMatrix {
  std::uint32_t basepoint = 0;
  std::vector<std::uint32_t> core;
  SquareMatrix<std::int32_t> doubled;
};

inline GromovMatrix gromov_matrix(DistanceMatrix const& d, std::uint32_t w) {
  auto const& core = d.core();
  GromovMatrix g{w, core, SquareMatrix<std::int32_t>(core.size())};
  std::vector<std::int32_t> dw(core.size());
  for (std::size_t i = 0; i < core.size(); ++i) dw[i] = static_cast<std::int32_t>(d(core[i], w));
  for (std::size_t i = 0; i < core.size(); ++i) {
    auto row = d.row(core[i]);
    for (std::size_t j = 0; j < core.size(); ++j) {
      g.doubled(i, j) = dw[i] + dw[j] - static_cast<std::int32_t>(row[core[j]]);
    }
  }
  return g;
}

struct TripleWitness {
  HalfInt delta;
  std::array<std::uint32_t, 3> xyz{};  // vertex indices
};

struct QuadrupleWitness {
  HalfInt delta;
  std::array<std::uint32_t, 4> wxyz{};
};

struct SlimWitness {
  HalfInt delta;
  std::array<std::uint32_t, 4> xyzm{};
};

// Four-point delta at one basepoint: max over core x, y of
// (A (x) A)[x][y] - A[x][y] with A the Gromov matrix at w.
inline TripleWitness delta_base(DistanceMatrix const& d, std::uint32_t w) {
  auto const& core = d.core();
  if (!std::binary_search(core.begin(), core.end(), w)) {
    throw StructureError("basepoint " + std::to_string(w) + " is not in the core");
  }
  GromovMatrix g = gromov_matrix(d, w);
  auto const& a = g.doubled;
  SquareMatrix<std::int32_t> m = max_min_product(a, a);
  std::size_t const c = core.size();

  std::int32_t best = std::numeric_limits<std::int32_t>::min();
  std::size_t bx = 0, by = 0;
  for (std::size_t x = 0; x < c; ++x) {
    for (std::size_t y = 0; y < c; ++y) {
      std::int32_t v = m(x, y) - a(x, y);
      if (v > best) {
        best = v;
        bx = x;
        by = y;
      }
    }
  }
  std::size_t bz = 0;
  while (std::min(a(bx, bz), a(bz, by)) != m(bx, by)) ++bz;
  return {HalfInt::from_doubled(best), {core[bx], core[by], core[bz]}};
}

// Maximum of delta_base over all core basepoints.  Ties resolve to the
// lexicographically smallest (w, x, y, z) whatever the thread count.
inline QuadrupleWitness delta_all(DistanceMatrix const& d, unsigned threads = 1) {
  auto const& core = d.core();
  if (core.empty()) throw StructureError("empty core");
  std::vector<TripleWitness> per(core.size());
  parallel_for(core.size(), threads, [&](std::size_t i) { per[i] = delta_base(d, core[i]); });
  std::size_t best = 0;
  for (std::size_t i = 1; i < per.size(); ++i) {
    if (per[i].delta > per[best].delta) best = i;
  }
  auto const& t = per[best];
  return {t.delta, {core[best], t.xyz[0], t.xyz[1], t.xyz[2]}};
}

// Direct scan of every core quadruple.
inline QuadrupleWitness naive_delta_all(DistanceMatrix const& d, std::size_t cap = kDefaultNaiveCap) {
  auto const& core = d.core();
  if (core.empty()) throw StructureError("empty core");
  if (core.size() > cap) {
    throw SizeError("naive four-point scan limited to " + std::to_string(cap) + " core vertices", core.size());
  }
  QuadrupleWitness best{HalfInt::from_doubled(std::numeric_limits<std::int32_t>::min()), {}};
  for (auto w : core)
    for (auto x : core)
      for (auto y : core) {
        HalfInt xy = gromov_product(d, x, y, w);
        for (auto z : core) {
          HalfInt v = std::min(gromov_product(d, x, z, w), gromov_product(d, y, z, w)) - xy;
          if (v > best.delta) best = {v, {w, x, y, z}};
        }
      }
  return best;
}

// Union of all geodesics between x and y: { m : d(x,m) + d(m,y) = d(x,y) }.
inline std::vector<std::uint32_t> geodesic_points(DistanceMatrix const& d, std::uint32_t x, std::uint32_t y) {
  std::vector<std::uint32_t> out;
  std::uint32_t const dxy = d(x, y);
  for (std::uint32_t m = 0; m < d.size(); ++m) {
    if (d(x, m) + d(m, y) == dxy) out.push_back(m);
  }
  return out;
}

// Slim-triangle constant against unions of all geodesics: max over core
// triples (x, y, z) and m on a geodesic x--y of the distance from m to the
// geodesic points of y--z and z--x.
inline SlimWitness delta_slim(DistanceMatrix const& d, std::size_t cap = kDefaultSlimCap, unsigned threads = 1) {
  auto const& core = d.core();
  std::size_t const c = core.size();
  if (c == 0) throw StructureError("empty core");
  if (c > cap) throw SizeError("slim-triangle scan limited to " + std::to_string(cap) + " core vertices", c);
  std::size_t const n = d.size();

  // Per unordered core pair: geodesic points, then BFS distance to them
  // recorded only on vertices that lie on some core geodesic.
  auto pair_index = [c](std::size_t i, std::size_t j) {
    if (i > j) std::swap(i, j);
    return i * c - i * (i + 1) / 2 + j;
  };
  std::size_t const pairs = c * (c + 1) / 2;
  std::vector<std::vector<std::uint32_t>> geo(pairs);
  parallel_for(c, threads, [&](std::size_t i) {
    for (std::size_t j = i; j < c; ++j) geo[pair_index(i, j)] = geodesic_points(d, core[i], core[j]);
  });

  std::vector<std::int32_t> slot(n, -1);
  std::size_t slots = 0;
  for (auto const& g : geo) {
    for (auto m : g) {
      if (slot[m] < 0) slot[m] = static_cast<std::int32_t>(slots++);
    }
  }

  std::vector<Distance> to_geo(pairs * slots);
  parallel_for(c, threads, [&](std::size_t i) {
    std::vector<Distance> dist(n);
    std::vector<std::uint32_t> queue;
    for (std::size_t j = i; j < c; ++j) {
      std::size_t p = pair_index(i, j);
      std::fill(dist.begin(), dist.end(), kUnreachable);
      queue.assign(geo[p].begin(), geo[p].end());
      for (auto m : queue) dist[m] = 0;
      for (std::size_t head = 0; head < queue.size(); ++head) {
        std::uint32_t u = queue[head];
        auto [first, last] = d.adjacency().neighbors(u);
        for (auto q = first; q != last; ++q) {
          if (dist[*q] != kUnreachable) continue;
          dist[*q] = static_cast<Distance>(dist[u] + 1);
          queue.push_back(*q);
        }
      }
      for (std::uint32_t m = 0; m < n; ++m) {
        if (slot[m] >= 0) to_geo[p * slots + static_cast<std::size_t>(slot[m])] = dist[m];
      }
    }
  });

  std::vector<SlimWitness> per(c, SlimWitness{HalfInt::from_doubled(-1), {}});
  parallel_for(c, threads, [&](std::size_t xi) {
    SlimWitness& best = per[xi];
    for (std::size_t yi = 0; yi < c; ++yi) {
      auto const& side = geo[pair_index(xi, yi)];
      for (std::size_t zi = 0; zi < c; ++zi) {
        Distance const* yz = to_geo.data() + pair_index(yi, zi) * slots;
        Distance const* zx = to_geo.data() + pair_index(zi, xi) * slots;
        for (auto m : side) {
          auto s = static_cast<std::size_t>(slot[m]);
          auto v = HalfInt::from_int(std::min(yz[s], zx[s]));
          if (v > best.delta) best = {v, {core[xi], core[yi], core[zi], m}};
        }
      }
    }
  });
  std::size_t best = 0;
  for (std::size_t i = 1; i < c; ++i) {
    if (per[i].delta > per[best].delta) best = i;
  }
  return per[best];
}

}  // namespace hyperprof
