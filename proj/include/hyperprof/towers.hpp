#pragma once

#include <chrono>
#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "hyperprof/cayley.hpp"
#include "hyperprof/engines.hpp"
#include "hyperprof/error.hpp"
#include "hyperprof/hyperbolicity.hpp"
#include "hyperprof/metric.hpp"
#include "hyperprof/surjection.hpp"

namespace hyperprof {

// Chain of finite quotients G_1 <- G_2 <- ... of a group with a fixed
// generating set.  bonds[i] maps levels[i + 1] onto levels[i];
// generator_images[i] is the image of the generating set in levels[i].
struct QuotientTower {
  std::string family;
  std::vector<EnginePtr> levels;
  std::vector<Surjection> bonds;
  std::vector<std::vector<Element>> generator_images;
};

namespace detail {

// A finite group viewed through a different generating set.
class RegeneratedEngine final : public GroupEngine {
 public:
  RegeneratedEngine(EnginePtr base, std::vector<Element> gens) : base_(std::move(base)), gens_(std::move(gens)) {}

  EngineKind kind() const override { return base_->kind(); }
  std::size_t rank() const override { return gens_.size(); }
  Element identity() const override { return base_->identity(); }
  Element multiply_gen(Element const& g, Letter s) const override {
    check_letter(s, rank());
    Element const& x = gens_[s.generator];
    return base_->multiply(g, s.sign > 0 ? x : base_->inverse(x));
  }
  Element multiply(Element const& a, Element const& b) const override { return base_->multiply(a, b); }
  Element inverse(Element const& g) const override { return base_->inverse(g); }
  Word word_of(Element const&) const override {
    throw ValidationError("regenerated engines do not provide words");
  }
  std::optional<std::uint64_t> order() const override { return base_->order(); }
  std::string render() const override { return base_->render(); }
  std::string format(Element const& g) const override { return base_->format(g); }

 private:
  EnginePtr base_;
  std::vector<Element> gens_;
};

}  // namespace detail

// The Cayley graph at `level` is taken with respect to the tower's
// generating set, not the level engine's own generators.
inline EnginePtr level_engine(QuotientTower const& t, std::size_t level) {
  return std::make_shared<detail::RegeneratedEngine>(t.levels.at(level), t.generator_images.at(level));
}

// Throws ValidationError naming the failing level (1-based) on any
// violation: non-finite or non-increasing orders, bad bonds, incompatible
// or non-generating generator images.
inline void validate_tower(QuotientTower const& t, SurjectionCheckOptions const& opts = {}) {
  if (t.levels.empty()) throw ValidationError("a tower needs at least one level");
  if (t.bonds.size() + 1 != t.levels.size()) throw ValidationError("a tower with k levels needs k - 1 bonds");
  if (t.generator_images.size() != t.levels.size()) {
    throw ValidationError("generator images are required at every level");
  }
  std::size_t const rank = t.generator_images[0].size();
  if (rank == 0) throw ValidationError("the generating set is empty");

  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    std::string const where = "level " + std::to_string(i + 1);
    auto order = t.levels[i]->order();
    if (!order) throw ValidationError(where + " is not a finite group");
    if (i > 0 && *order <= *t.levels[i - 1]->order()) {
      throw ValidationError(where + ": level orders must strictly increase");
    }
    if (t.generator_images[i].size() != rank) throw ValidationError(where + ": wrong number of generator images");

    // The generating set must generate each level.
    Surjection from_free{engine_free(rank), t.levels[i], t.generator_images[i]};
    SurjectionCheckOptions gen_opts = opts;
    gen_opts.sample_radius = 0;
    auto rep = check_surjection(from_free, gen_opts);
    if (!rep.generates) throw ValidationError(where + ": generator images do not generate: " + rep.message);
  }

  for (std::size_t i = 0; i < t.bonds.size(); ++i) {
    Surjection const& b = t.bonds[i];
    std::string const where = "bond from level " + std::to_string(i + 2) + " to level " + std::to_string(i + 1);
    if (b.source != t.levels[i + 1] || b.target != t.levels[i]) {
      throw ValidationError(where + ": endpoints do not match the levels");
    }
    auto rep = check_surjection(b, opts);
    if (!rep.valid) throw ValidationError(where + ": " + rep.message);
    for (std::size_t g = 0; g < rank; ++g) {
      if (b.apply(t.generator_images[i + 1][g]) != t.generator_images[i][g]) {
        throw ValidationError("incompatible generator images: gen " + std::to_string(g) + " at level " +
                              std::to_string(i + 2));
      }
    }
  }
}

inline QuotientTower tower_custom(std::vector<EnginePtr> levels, std::vector<Surjection> bonds,
                                  std::vector<std::vector<Element>> generator_images) {
  QuotientTower t{"custom", std::move(levels), std::move(bonds), std::move(generator_images)};
  validate_tower(t);
  return t;
}

// Z/p <- Z/p^2 <- ... <- Z/p^K with reduction bonds; the generator maps to 1.
inline QuotientTower tower_cyclic_p(std::uint64_t p, std::size_t levels,
                                    std::size_t max_order = kDefaultMaxVertices) {
  if (!detail::is_prime(p)) throw ValidationError("p must be prime");
  if (levels == 0) throw ValidationError("a tower needs at least one level");
  QuotientTower t;
  t.family = "cyclic-p";
  std::uint64_t order = 1;
  for (std::size_t k = 0; k < levels; ++k) {
    order *= p;
    if (order > max_order) {
      throw SizeError("level " + std::to_string(k + 1) + " of order " + std::to_string(order) +
                          " exceeds the size cap of " + std::to_string(max_order),
                      k);
    }
    t.levels.push_back(engine_cyclic(order));
    t.generator_images.push_back({Element{1 % static_cast<std::int64_t>(order)}});
  }
  for (std::size_t k = 0; k + 1 < levels; ++k) {
    t.bonds.push_back({t.levels[k + 1], t.levels[k], {Element{1 % static_cast<std::int64_t>(p)}}});
  }
  validate_tower(t);
  return t;
}

// The two smallest exponent-p quotients of the rank-2 free group:
// (Z/p)^2 <- heis:p, bonded by (a, b, c) -> (a, b).
inline QuotientTower tower_exponent_p(std::uint64_t p) {
  if (p == 2 || !detail::is_prime(p)) throw ValidationError("p must be an odd prime");
  QuotientTower t;
  t.family = "exponent-p";
  EnginePtr abel = engine_direct_product(engine_cyclic(p), engine_cyclic(p));
  EnginePtr heis = engine_heisenberg_p(p);
  Element x = DirectProductEngine::pack({1}, {0});
  Element y = DirectProductEngine::pack({0}, {1});
  t.levels = {abel, heis};
  t.bonds = {{heis, abel, {x, y}}};
  t.generator_images = {{x, y}, {Element{1, 0, 0}, Element{0, 1, 0}}};
  validate_tower(t);
  return t;
}

struct LevelReport {
  std::size_t level = 0;  // 1-based
  std::uint64_t order = 0;
  std::uint32_t radius = 0;
  std::size_t core_size = 0;
  HyperbolicityReport hyperbolicity;
};

struct TowerReport {
  std::string family;
  std::vector<LevelReport> levels;
  std::size_t requested_levels = 0;
  bool truncated = false;
  std::string truncation_reason;
  std::string verdict;
};

// Empty: whole Cayley graph of every level.  Otherwise one radius per level.
struct RadiusPolicy {
  std::vector<std::uint32_t> radii;
};

inline constexpr char const* kTowerVerdictNote =
    "finite evidence only: no finite computation certifies one delta for every level";

// "growing" iff delta_all strictly increases across the final min(3, K)
// computed levels.
inline std::string tower_verdict(std::vector<HalfInt> const& deltas) {
  if (deltas.empty()) return "no levels computed";
  std::size_t const k = std::min<std::size_t>(3, deltas.size());
  bool growing = k >= 2;
  for (std::size_t i = deltas.size() - k + 1; i < deltas.size() && growing; ++i) {
    growing = deltas[i] > deltas[i - 1];
  }
  if (growing) return "growing (strictly increasing over last " + std::to_string(k) + " levels)";
  return "uniform-so-far (max δ = " + std::max_element(deltas.begin(), deltas.end())->to_string() + ")";
}

inline TowerReport tower_delta_profile(QuotientTower const& t, RadiusPolicy const& policy = {},
                                       HyperbolicityOptions opts = {},
                                       std::size_t max_vertices = kDefaultMaxVertices) {
  if (!policy.radii.empty() && policy.radii.size() != t.levels.size()) {
    throw ValidationError("radius policy must give one radius per level");
  }
  opts.all_basepoints = true;
  TowerReport rep;
  rep.family = t.family;
  rep.requested_levels = t.levels.size();
  std::vector<HalfInt> deltas;
  for (std::size_t i = 0; i < t.levels.size(); ++i) {
    try {
      EnginePtr e = level_engine(t, i);
      CayleyBall ball = policy.radii.empty() ? build_full_graph(*e, max_vertices)
                                             : build_ball(*e, policy.radii[i], max_vertices);
      DistanceMatrix d = apsp(ball, {.all_rows = opts.slim, .core = std::nullopt, .threads = opts.threads});
      LevelReport lr;
      lr.level = i + 1;
      lr.order = *t.levels[i]->order();
      lr.radius = ball.radius;
      lr.core_size = d.core().size();
      lr.hyperbolicity = compute_hyperbolicity(d, opts);
      deltas.push_back(lr.hyperbolicity.all->delta);
      rep.levels.push_back(std::move(lr));
    } catch (SizeError const& err) {
      rep.truncated = true;
      rep.truncation_reason = "level " + std::to_string(i + 1) + ": " + err.what();
      break;
    }
  }
  rep.verdict = tower_verdict(deltas);
  return rep;
}

struct FreeProductComparison {
  std::string left, right, product;
  std::uint32_t radius = 0;
  QuadrupleWitness left_delta, right_delta, product_delta;
  bool consistent = false;  // product delta <= max factor delta
  HalfInt gap;              // product delta - max factor delta
};

// Four-point delta on the trusted cores of the radius-r balls of both
// factors and of their free product.
inline FreeProductComparison compare_free_product(EnginePtr const& left, EnginePtr const& right, std::uint32_t radius,
                                                  std::size_t max_vertices = kDefaultMaxVertices,
                                                  unsigned threads = 1) {
  EnginePtr product = engine_free_product(left, right);
  auto delta_of = [&](GroupEngine const& e) {
    CayleyBall ball = build_ball(e, radius, max_vertices);
    return delta_all(apsp(ball, {.all_rows = false, .core = std::nullopt, .threads = threads}), threads);
  };
  FreeProductComparison c;
  c.left = left->render();
  c.right = right->render();
  c.product = product->render();
  c.radius = radius;
  c.left_delta = delta_of(*left);
  c.right_delta = delta_of(*right);
  c.product_delta = delta_of(*product);
  HalfInt factor_max = std::max(c.left_delta.delta, c.right_delta.delta);
  c.consistent = c.product_delta.delta <= factor_max;
  c.gap = c.product_delta.delta - factor_max;
  return c;
}

}  // namespace hyperprof
