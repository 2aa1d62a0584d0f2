#pragma once

#include <cstdint>
#include <cstdlib>
#include <memory>
#include <optional>
#include <string>
#include <utility>

#include "hyperprof/engine.hpp"
#include "hyperprof/error.hpp"
#include "hyperprof/word.hpp"

namespace hyperprof {

namespace detail {

inline void check_letter(Letter s, std::size_t rank) {
  if (s.generator >= rank || (s.sign != 1 && s.sign != -1)) {
    throw ValidationError("letter refers to generator " + std::to_string(s.generator) +
                          " of an engine with rank " + std::to_string(rank));
  }
}

inline std::int64_t mod(std::int64_t a, std::int64_t n) {
  std::int64_t r = a % n;
  return r < 0 ? r + n : r;
}

inline bool is_prime(std::uint64_t n) {
  if (n < 2) return false;
  for (std::uint64_t d = 2; d * d <= n; ++d) {
    if (n % d == 0) return false;
  }
  return true;
}

}  // namespace detail

// Free group on `rank` generators.  Elements are reduced words with
// letter i^+1 stored as i+1 and i^-1 as -(i+1).
class FreeEngine final : public GroupEngine {
 public:
  explicit FreeEngine(std::size_t rank) : rank_(rank) {
    if (rank == 0) throw ValidationError("free group rank must be positive");
  }

  EngineKind kind() const override { return EngineKind::free; }
  std::size_t rank() const override { return rank_; }
  Element identity() const override { return {}; }

  Element multiply_gen(Element const& g, Letter s) const override {
    detail::check_letter(s, rank_);
    Element out = g;
    std::int64_t code = s.sign * static_cast<std::int64_t>(s.generator + 1);
    if (!out.empty() && out.back() == -code) {
      out.pop_back();
    } else {
      out.push_back(code);
    }
    return out;
  }

  Element multiply(Element const& a, Element const& b) const override {
    Element out = a;
    for (std::int64_t code : b) {
      if (!out.empty() && out.back() == -code) {
        out.pop_back();
      } else {
        out.push_back(code);
      }
    }
    return out;
  }

  Element inverse(Element const& g) const override {
    Element out(g.rbegin(), g.rend());
    for (auto& c : out) c = -c;
    return out;
  }

  Word word_of(Element const& g) const override {
    Word w;
    w.reserve(g.size());
    for (std::int64_t c : g) {
      w.push_back({static_cast<std::uint32_t>(std::llabs(c) - 1), c > 0 ? 1 : -1});
    }
    return w;
  }

  std::optional<std::uint64_t> order() const override { return std::nullopt; }
  std::string render() const override { return "free:" + std::to_string(rank_); }
  std::string format(Element const& g) const override { return to_string(word_of(g)); }

 private:
  std::size_t rank_;
};

// Cyclic group of order n on one generator; n == 0 is the integers.
class CyclicEngine final : public GroupEngine {
 public:
  explicit CyclicEngine(std::uint64_t n) : n_(static_cast<std::int64_t>(n)) {}

  EngineKind kind() const override { return EngineKind::cyclic; }
  std::size_t rank() const override { return 1; }
  Element identity() const override { return {0}; }

  Element multiply_gen(Element const& g, Letter s) const override {
    detail::check_letter(s, 1);
    return {reduce(g[0] + s.sign)};
  }

  Element multiply(Element const& a, Element const& b) const override { return {reduce(a[0] + b[0])}; }
  Element inverse(Element const& g) const override { return {reduce(-g[0])}; }

  Word word_of(Element const& g) const override {
    std::int64_t r = g[0];
    if (n_ > 0 && 2 * r > n_) r -= n_;
    return Word(static_cast<std::size_t>(std::llabs(r)), Letter{0, r < 0 ? -1 : 1});
  }

  std::optional<std::uint64_t> order() const override {
    if (n_ == 0) return std::nullopt;
    return static_cast<std::uint64_t>(n_);
  }

  std::string render() const override { return "cyclic:" + std::to_string(n_); }
  std::string format(Element const& g) const override { return std::to_string(g[0]); }

  std::uint64_t modulus() const { return static_cast<std::uint64_t>(n_); }

 private:
  std::int64_t reduce(std::int64_t v) const { return n_ == 0 ? v : detail::mod(v, n_); }

  std::int64_t n_;
};

// Free group of exponent p and nilpotency class 2 on two generators,
// realized as upper unitriangular 3x3 matrices over Z/p.  Elements are
// triples (a, b, c) with (a1,b1,c1)(a2,b2,c2) = (a1+a2, b1+b2, c1+c2+a1*b2).
class HeisenbergEngine final : public GroupEngine {
 public:
  explicit HeisenbergEngine(std::uint64_t p) : p_(static_cast<std::int64_t>(p)) {
    if (p == 2 || !detail::is_prime(p)) throw ValidationError("p must be an odd prime");
  }

  EngineKind kind() const override { return EngineKind::heisenberg_p; }
  std::size_t rank() const override { return 2; }
  Element identity() const override { return {0, 0, 0}; }

  Element multiply_gen(Element const& g, Letter s) const override {
    detail::check_letter(s, 2);
    Element gen = s.generator == 0 ? Element{s.sign, 0, 0} : Element{0, s.sign, 0};
    return multiply(g, gen);
  }

  Element multiply(Element const& x, Element const& y) const override {
    return {detail::mod(x[0] + y[0], p_), detail::mod(x[1] + y[1], p_),
            detail::mod(x[2] + y[2] + x[0] * y[1], p_)};
  }

  Element inverse(Element const& g) const override {
    return {detail::mod(-g[0], p_), detail::mod(-g[1], p_), detail::mod(g[0] * g[1] - g[2], p_)};
  }

  // x^a y^b [x,y]^(c - ab), with [x,y] = x y x^-1 y^-1 = (0,0,1) central.
  Word word_of(Element const& g) const override {
    Word w;
    w.insert(w.end(), static_cast<std::size_t>(g[0]), Letter{0, 1});
    w.insert(w.end(), static_cast<std::size_t>(g[1]), Letter{1, 1});
    std::int64_t k = detail::mod(g[2] - g[0] * g[1], p_);
    for (std::int64_t i = 0; i < k; ++i) {
      w.insert(w.end(), {Letter{0, 1}, Letter{1, 1}, Letter{0, -1}, Letter{1, -1}});
    }
    return w;
  }

  std::optional<std::uint64_t> order() const override {
    auto p = static_cast<std::uint64_t>(p_);
    return p * p * p;
  }

  std::string render() const override { return "heis:" + std::to_string(p_); }
  std::string format(Element const& g) const override {
    return "(" + std::to_string(g[0]) + "," + std::to_string(g[1]) + "," + std::to_string(g[2]) + ")";
  }

  std::uint64_t prime() const { return static_cast<std::uint64_t>(p_); }

 private:
  std::int64_t p_;
};

// Direct product.  Generators are those of the left factor followed by
// those of the right.  Encoding: [len(left), left..., right...].
class DirectProductEngine final : public GroupEngine {
 public:
  DirectProductEngine(EnginePtr left, EnginePtr right) : left_(std::move(left)), right_(std::move(right)) {}

  EngineKind kind() const override { return EngineKind::direct_product; }
  std::size_t rank() const override { return left_->rank() + right_->rank(); }
  Element identity() const override { return pack(left_->identity(), right_->identity()); }

  Element multiply_gen(Element const& g, Letter s) const override {
    detail::check_letter(s, rank());
    auto [l, r] = split(g);
    if (s.generator < left_->rank()) {
      l = left_->multiply_gen(l, s);
    } else {
      r = right_->multiply_gen(r, {static_cast<std::uint32_t>(s.generator - left_->rank()), s.sign});
    }
    return pack(l, r);
  }

  Element multiply(Element const& a, Element const& b) const override {
    auto [al, ar] = split(a);
    auto [bl, br] = split(b);
    return pack(left_->multiply(al, bl), right_->multiply(ar, br));
  }

  Element inverse(Element const& g) const override {
    auto [l, r] = split(g);
    return pack(left_->inverse(l), right_->inverse(r));
  }

  Word word_of(Element const& g) const override {
    auto [l, r] = split(g);
    Word w = left_->word_of(l);
    auto shift = static_cast<std::uint32_t>(left_->rank());
    for (Letter x : right_->word_of(r)) w.push_back({x.generator + shift, x.sign});
    return w;
  }

  std::optional<std::uint64_t> order() const override {
    auto a = left_->order();
    auto b = right_->order();
    if (!a || !b) return std::nullopt;
    return *a * *b;
  }

  std::string render() const override { return "dp(" + left_->render() + "," + right_->render() + ")"; }
  std::string format(Element const& g) const override {
    auto [l, r] = split(g);
    return "(" + left_->format(l) + "," + right_->format(r) + ")";
  }

  EnginePtr const& left() const { return left_; }
  EnginePtr const& right() const { return right_; }

  std::pair<Element, Element> split(Element const& g) const {
    auto n = static_cast<std::size_t>(g[0]);
    return {Element(g.begin() + 1, g.begin() + 1 + static_cast<std::ptrdiff_t>(n)),
            Element(g.begin() + 1 + static_cast<std::ptrdiff_t>(n), g.end())};
  }

  static Element pack(Element const& l, Element const& r) {
    Element out;
    out.reserve(1 + l.size() + r.size());
    out.push_back(static_cast<std::int64_t>(l.size()));
    out.insert(out.end(), l.begin(), l.end());
    out.insert(out.end(), r.begin(), r.end());
    return out;
  }

 private:
  EnginePtr left_;
  EnginePtr right_;
};

// One maximal run of letters from a single factor of a free product.
struct Syllable {
  int factor = 0;  // 0 = left, 1 = right
  Element value;   // never the factor identity

  friend bool operator==(Syllable const&, Syllable const&) = default;
};

// Free product.  Elements are alternating sequences of non-identity
// syllables, encoded as [factor, len, data...] repeated.
class FreeProductEngine final : public GroupEngine {
 public:
  FreeProductEngine(EnginePtr left, EnginePtr right) : left_(std::move(left)), right_(std::move(right)) {}

  EngineKind kind() const override { return EngineKind::free_product; }
  std::size_t rank() const override { return left_->rank() + right_->rank(); }
  Element identity() const override { return {}; }

  Element multiply_gen(Element const& g, Letter s) const override {
    detail::check_letter(s, rank());
    auto syl = syllables(g);
    if (s.generator < left_->rank()) {
      append(syl, 0, [&](Element const& v) { return left_->multiply_gen(v, s); });
    } else {
      Letter local{static_cast<std::uint32_t>(s.generator - left_->rank()), s.sign};
      append(syl, 1, [&](Element const& v) { return right_->multiply_gen(v, local); });
    }
    return encode(syl);
  }

  Element multiply(Element const& a, Element const& b) const override {
    auto syl = syllables(a);
    for (Syllable const& t : syllables(b)) {
      append(syl, t.factor, [&](Element const& v) { return factor(t.factor).multiply(v, t.value); });
    }
    return encode(syl);
  }

  Element inverse(Element const& g) const override {
    auto syl = syllables(g);
    std::vector<Syllable> out;
    out.reserve(syl.size());
    for (auto it = syl.rbegin(); it != syl.rend(); ++it) {
      out.push_back({it->factor, factor(it->factor).inverse(it->value)});
    }
    return encode(out);
  }

  Word word_of(Element const& g) const override {
    Word w;
    auto shift = static_cast<std::uint32_t>(left_->rank());
    for (Syllable const& s : syllables(g)) {
      for (Letter x : factor(s.factor).word_of(s.value)) {
        w.push_back({s.factor == 0 ? x.generator : x.generator + shift, x.sign});
      }
    }
    return w;
  }

  std::optional<std::uint64_t> order() const override {
    auto a = left_->order();
    auto b = right_->order();
    if (a == std::optional<std::uint64_t>{1}) return b;
    if (b == std::optional<std::uint64_t>{1}) return a;
    return std::nullopt;
  }

  std::string render() const override { return "fp(" + left_->render() + "," + right_->render() + ")"; }

  std::string format(Element const& g) const override {
    auto syl = syllables(g);
    if (syl.empty()) return "1";
    std::string out;
    for (std::size_t i = 0; i < syl.size(); ++i) {
      if (i != 0) out += " * ";
      out += (syl[i].factor == 0 ? "L" : "R") + std::string("[") + factor(syl[i].factor).format(syl[i].value) + "]";
    }
    return out;
  }

  EnginePtr const& left() const { return left_; }
  EnginePtr const& right() const { return right_; }
  GroupEngine const& factor(int f) const { return f == 0 ? *left_ : *right_; }

  static std::vector<Syllable> syllables(Element const& g) {
    std::vector<Syllable> out;
    std::size_t i = 0;
    while (i < g.size()) {
      int f = static_cast<int>(g[i]);
      auto len = static_cast<std::size_t>(g[i + 1]);
      auto first = g.begin() + static_cast<std::ptrdiff_t>(i + 2);
      out.push_back({f, Element(first, first + static_cast<std::ptrdiff_t>(len))});
      i += 2 + len;
    }
    return out;
  }

  static Element encode(std::vector<Syllable> const& syl) {
    Element out;
    for (Syllable const& s : syl) {
      out.push_back(s.factor);
      out.push_back(static_cast<std::int64_t>(s.value.size()));
      out.insert(out.end(), s.value.begin(), s.value.end());
    }
    return out;
  }

 private:
  // Multiplies the tail of `syl` by an element of factor `f`, merging with
  // the last syllable when it lives in the same factor.
  template <typename Op>
  void append(std::vector<Syllable>& syl, int f, Op op) const {
    GroupEngine const& fac = factor(f);
    if (!syl.empty() && syl.back().factor == f) {
      Element merged = op(syl.back().value);
      if (merged == fac.identity()) {
        syl.pop_back();
      } else {
        syl.back().value = std::move(merged);
      }
    } else {
      Element v = op(fac.identity());
      if (v != fac.identity()) syl.push_back({f, std::move(v)});
    }
  }

  EnginePtr left_;
  EnginePtr right_;
};

inline EnginePtr engine_free(std::size_t rank) { return std::make_shared<FreeEngine>(rank); }
inline EnginePtr engine_cyclic(std::uint64_t n) { return std::make_shared<CyclicEngine>(n); }
inline EnginePtr engine_heisenberg_p(std::uint64_t p) { return std::make_shared<HeisenbergEngine>(p); }

inline EnginePtr engine_direct_product(EnginePtr left, EnginePtr right) {
  return std::make_shared<DirectProductEngine>(std::move(left), std::move(right));
}

inline EnginePtr engine_free_product(EnginePtr left, EnginePtr right) {
  return std::make_shared<FreeProductEngine>(std::move(left), std::move(right));
}

}  // namespace hyperprof
