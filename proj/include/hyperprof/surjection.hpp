#pragma once

#include <cstdint>
#include <string>
#include <unordered_map>
#include <unordered_set>
#include <utility>
#include <vector>

#include "hyperprof/cayley.hpp"
#include "hyperprof/engine.hpp"
#include "hyperprof/error.hpp"

namespace hyperprof {

// Homomorphism between engines determined by the images of the source
// generators.
struct Surjection {
  EnginePtr source;
  EnginePtr target;
  std::vector<Element> generator_images;

  Element image(Letter s) const {
    Element const& g = generator_images.at(s.generator);
    return s.sign > 0 ? g : target->inverse(g);
  }

  // Evaluates a word for `g` in the target.
  Element apply(Element const& g) const {
    Element out = target->identity();
    for (Letter l : source->word_of(g)) out = target->multiply(out, image(l));
    return out;
  }
};

struct SurjectionReport {
  bool valid = false;
  bool generates = false;
  bool homomorphism = false;
  std::size_t target_order = 0;
  std::size_t image_size = 0;
  std::size_t checked_elements = 0;
  std::size_t checked_pairs = 0;
  std::string message;
};

struct SurjectionCheckOptions {
  // Ball radius used to sample an infinite source.
  std::uint32_t sample_radius = 6;
  // All-pairs homomorphism check runs while (#elements)^2 stays below this.
  std::size_t pair_budget = std::size_t{1} << 22;
  std::size_t max_vertices = kDefaultMaxVertices;
};

// Validates a bond.  Never throws for a bad map; the report explains what
// failed and on which elements.
inline SurjectionReport check_surjection(Surjection const& s, SurjectionCheckOptions const& opts = {}) {
  SurjectionReport rep;
  auto fail = [&](std::string msg) {
    rep.message = std::move(msg);
    rep.valid = false;
    return rep;
  };

  if (!s.source || !s.target) return fail("source and target engines are required");
  auto target_order = s.target->order();
  if (!target_order) return fail("target " + s.target->render() + " is not finite");
  if (s.generator_images.size() != s.source->rank()) {
    return fail("expected " + std::to_string(s.source->rank()) + " generator images, got " +
                std::to_string(s.generator_images.size()));
  }
  rep.target_order = static_cast<std::size_t>(*target_order);

  CayleyBall target_graph;
  CayleyBall source_sample;
  try {
    target_graph = build_full_graph(*s.target, opts.max_vertices);
    source_sample = s.source->is_finite() ? build_full_graph(*s.source, opts.max_vertices)
                                          : build_ball(*s.source, opts.sample_radius, opts.max_vertices);
  } catch (SizeError const& e) {
    return fail(e.what());
  }
  std::unordered_set<Element, ElementHash> target_elements(target_graph.elements.begin(),
                                                           target_graph.elements.end());
  for (std::size_t i = 0; i < s.generator_images.size(); ++i) {
    if (!target_elements.contains(s.generator_images[i])) {
      return fail("image of generator " + std::to_string(i) + " is not an element of " + s.target->render());
    }
  }

  // Orbit of the identity under right multiplication by the images.
  std::unordered_set<Element, ElementHash> orbit{s.target->identity()};
  std::vector<Element> queue{s.target->identity()};
  for (std::size_t head = 0; head < queue.size(); ++head) {
    for (std::uint32_t g = 0; g < s.source->rank(); ++g) {
      for (int sign : {1, -1}) {
        Element next = s.target->multiply(queue[head], s.image({g, sign}));
        if (orbit.insert(next).second) queue.push_back(std::move(next));
      }
    }
  }
  rep.image_size = orbit.size();
  rep.generates = orbit.size() == rep.target_order;

  std::unordered_map<Element, Element, ElementHash> images;
  for (Element const& g : source_sample.elements) images.emplace(g, s.apply(g));
  rep.checked_elements = images.size();

  // Edge consistency: phi(g s) = phi(g) phi(s).
  rep.homomorphism = true;
  for (Element const& g : source_sample.elements) {
    for (std::uint32_t gen = 0; gen < s.source->rank() && rep.homomorphism; ++gen) {
      for (int sign : {1, -1}) {
        Element gs = s.source->multiply_gen(g, {gen, sign});
        auto it = images.find(gs);
        Element lhs = it != images.end() ? it->second : s.apply(gs);
        if (lhs != s.target->multiply(images.at(g), s.image({gen, sign}))) {
          rep.homomorphism = false;
          rep.message = "not a homomorphism at element " + s.source->format(g) + " times generator " +
                        std::to_string(gen) + (sign > 0 ? "" : "^-1");
          break;
        }
      }
    }
    if (!rep.homomorphism) break;
  }

  std::size_t const m = source_sample.elements.size();
  if (rep.homomorphism && m * m <= opts.pair_budget) {
    for (Element const& x : source_sample.elements) {
      for (Element const& y : source_sample.elements) {
        Element xy = s.source->multiply(x, y);
        auto it = images.find(xy);
        Element lhs = it != images.end() ? it->second : s.apply(xy);
        ++rep.checked_pairs;
        if (lhs != s.target->multiply(images.at(x), images.at(y))) {
          rep.homomorphism = false;
          rep.message = "not a homomorphism on the pair (" + s.source->format(x) + ", " + s.source->format(y) + ")";
          break;
        }
      }
      if (!rep.homomorphism) break;
    }
  }

  if (!rep.generates && rep.message.empty()) {
    rep.message = "generator images generate " + std::to_string(rep.image_size) + " of " +
                  std::to_string(rep.target_order) + " target elements";
  }
  rep.valid = rep.generates && rep.homomorphism;
  if (rep.valid) rep.message = "ok";
  return rep;
}

}  // namespace hyperprof
