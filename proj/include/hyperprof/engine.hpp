#pragma once

#include <cstdint>
#include <memory>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "hyperprof/word.hpp"

namespace hyperprof {

// Canonical normal form of a group element.  The encoding is private to
// the engine that produced it; two elements of one engine are equal iff
// their encodings are identical.
using Element = std::vector<std::int64_t>;

struct ElementHash {
  std::size_t operator()(Element const& e) const noexcept {
    // FNV-1a over the 64-bit limbs.
    std::uint64_t h = 1469598103934665603ull;
    for (std::int64_t v : e) {
      auto u = static_cast<std::uint64_t>(v);
      for (int i = 0; i < 8; ++i) {
        h ^= (u >> (8 * i)) & 0xffu;
        h *= 1099511628211ull;
      }
    }
    return static_cast<std::size_t>(h);
  }
};

enum class EngineKind { free, cyclic, finite_table, heisenberg_p, free_product, direct_product };

inline std::string_view to_string(EngineKind k) {
  switch (k) {
    case EngineKind::free: return "free";
    case EngineKind::cyclic: return "cyclic";
    case EngineKind::finite_table: return "finite-table";
    case EngineKind::heisenberg_p: return "heisenberg-p";
    case EngineKind::free_product: return "free-product";
    case EngineKind::direct_product: return "direct-product";
  }
  return "unknown";
}

// A group with decidable equality, presented by a finite ordered
// generating set.  Engines are immutable once constructed.
class GroupEngine {
 public:
  virtual ~GroupEngine() = default;

  virtual EngineKind kind() const = 0;
  virtual std::size_t rank() const = 0;
  virtual Element identity() const = 0;

  // g * s^sign for generator s.
  virtual Element multiply_gen(Element const& g, Letter s) const = 0;
  virtual Element multiply(Element const& a, Element const& b) const = 0;
  virtual Element inverse(Element const& g) const = 0;

  // Some word over the generators evaluating to g.
  virtual Word word_of(Element const& g) const = 0;

  // nullopt for infinite groups.
  virtual std::optional<std::uint64_t> order() const = 0;

  // Canonical engine spec string; parse_engine_spec(render()) rebuilds it.
  virtual std::string render() const = 0;

  virtual std::string format(Element const& g) const = 0;

  bool is_finite() const { return order().has_value(); }

  Element evaluate(Word const& w) const {
    Element g = identity();
    for (Letter l : w) g = multiply_gen(g, l);
    return g;
  }
};

using EnginePtr = std::shared_ptr<GroupEngine const>;

}  // namespace hyperprof
