#pragma once

#include <cstdint>
#include <fstream>
#include <memory>
#include <optional>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "hyperprof/engine.hpp"
#include "hyperprof/engines.hpp"
#include "hyperprof/error.hpp"

namespace hyperprof {

// Row-major multiplication table: product(i, j) = entries[i * order + j].
struct MultiplicationTable {
  std::size_t order = 0;
  std::vector<std::uint32_t> entries;
  std::vector<std::uint32_t> generators;

  std::uint32_t product(std::size_t i, std::size_t j) const { return entries[i * order + j]; }
};

// Tables whose cube fits under this bound get an exhaustive associativity
// check; larger ones are sampled.
inline constexpr std::size_t kExhaustiveAssociativityTriples = std::size_t{1} << 21;
inline constexpr std::size_t kSampledAssociativityTriples = std::size_t{1} << 20;

// Finite group given by its Cayley table.  Elements are [index].
class TableEngine final : public GroupEngine {
 public:
  explicit TableEngine(MultiplicationTable table, std::string source = {})
      : table_(std::move(table)), source_(std::move(source)) {
    validate();
  }

  EngineKind kind() const override { return EngineKind::finite_table; }
  std::size_t rank() const override { return table_.generators.size(); }
  Element identity() const override { return {identity_}; }

  Element multiply_gen(Element const& g, Letter s) const override {
    detail::check_letter(s, rank());
    std::uint32_t gen = table_.generators[s.generator];
    if (s.sign < 0) gen = inverse_[gen];
    return {table_.product(static_cast<std::size_t>(g[0]), gen)};
  }

  Element multiply(Element const& a, Element const& b) const override {
    return {table_.product(static_cast<std::size_t>(a[0]), static_cast<std::size_t>(b[0]))};
  }

  Element inverse(Element const& g) const override { return {inverse_[static_cast<std::size_t>(g[0])]}; }
  Word word_of(Element const& g) const override { return words_[static_cast<std::size_t>(g[0])]; }
  std::optional<std::uint64_t> order() const override { return table_.order; }

  std::string render() const override { return "table:" + source_; }
  std::string format(Element const& g) const override { return "#" + std::to_string(g[0]); }

  MultiplicationTable const& table() const { return table_; }

 private:
  void validate() {
    std::size_t const n = table_.order;
    if (n == 0) throw ValidationError("table order must be positive");
    if (table_.entries.size() != n * n) throw ValidationError("table must have order^2 entries");
    for (std::size_t i = 0; i < n * n; ++i) {
      if (table_.entries[i] >= n) {
        throw ValidationError("closure fails: entry " + std::to_string(table_.entries[i]) + " at row " +
                              std::to_string(i / n) + " column " + std::to_string(i % n));
      }
    }

    std::optional<std::uint32_t> id;
    for (std::uint32_t e = 0; e < n && !id; ++e) {
      bool ok = true;
      for (std::size_t x = 0; x < n && ok; ++x) ok = table_.product(e, x) == x && table_.product(x, e) == x;
      if (ok) id = e;
    }
    if (!id) throw ValidationError("no identity element");
    identity_ = *id;

    inverse_.assign(n, 0);
    for (std::size_t k = 0; k < n; ++k) {
      bool found = false;
      for (std::uint32_t j = 0; j < n && !found; ++j) {
        if (table_.product(k, j) == identity_ && table_.product(j, k) == identity_) {
          inverse_[k] = j;
          found = true;
        }
      }
      if (!found) throw ValidationError("no inverse for element " + std::to_string(k));
    }

    auto check_triple = [&](std::size_t a, std::size_t b, std::size_t c) {
      if (table_.product(table_.product(a, b), c) != table_.product(a, table_.product(b, c))) {
        throw ValidationError("associativity fails for (" + std::to_string(a) + ", " + std::to_string(b) + ", " +
                              std::to_string(c) + ")");
      }
    };
    if (n * n * n <= kExhaustiveAssociativityTriples) {
      for (std::size_t a = 0; a < n; ++a)
        for (std::size_t b = 0; b < n; ++b)
          for (std::size_t c = 0; c < n; ++c) check_triple(a, b, c);
    } else {
      std::mt19937_64 rng(0x5eed);
      std::uniform_int_distribution<std::size_t> pick(0, n - 1);
      for (std::size_t i = 0; i < kSampledAssociativityTriples; ++i) check_triple(pick(rng), pick(rng), pick(rng));
    }

    if (table_.generators.empty()) throw ValidationError("at least one generator is required");
    for (std::uint32_t g : table_.generators) {
      if (g >= n) throw ValidationError("generator " + std::to_string(g) + " is not an element");
    }

    // Breadth-first words double as the generation check.
    words_.assign(n, Word{});
    std::vector<bool> seen(n, false);
    std::vector<std::uint32_t> queue{identity_};
    seen[identity_] = true;
    for (std::size_t head = 0; head < queue.size(); ++head) {
      std::uint32_t x = queue[head];
      for (std::uint32_t i = 0; i < table_.generators.size(); ++i) {
        for (int sign : {1, -1}) {
          std::uint32_t gen = sign > 0 ? table_.generators[i] : inverse_[table_.generators[i]];
          std::uint32_t y = table_.product(x, gen);
          if (seen[y]) continue;
          seen[y] = true;
          words_[y] = words_[x];
          words_[y].push_back({i, sign});
          queue.push_back(y);
        }
      }
    }
    if (queue.size() != n) {
      throw ValidationError("generators do not generate the group (reached " + std::to_string(queue.size()) +
                            " of " + std::to_string(n) + " elements)");
    }
  }

  MultiplicationTable table_;
  std::string source_;
  std::uint32_t identity_ = 0;
  std::vector<std::uint32_t> inverse_;
  std::vector<Word> words_;
};

inline EnginePtr engine_finite_table(MultiplicationTable table, std::string source = {}) {
  return std::make_shared<TableEngine>(std::move(table), std::move(source));
}

// Reads the text table format:
//   order k
//   k rows of k space-separated indices
//   gens i1 i2 ...
inline MultiplicationTable read_table(std::istream& in) {
  MultiplicationTable t;
  std::string line;
  std::size_t lineno = 0;

  auto next_line = [&]() -> bool {
    while (std::getline(in, line)) {
      ++lineno;
      if (line.find_first_not_of(" \t\r") != std::string::npos) return true;
    }
    return false;
  };

  if (!next_line()) throw FormatError("missing header", lineno + 1);
  {
    std::istringstream ss(line);
    std::string word;
    long long k = -1;
    if (!(ss >> word >> k) || word != "order" || k <= 0) throw FormatError("expected \"order <k>\"", lineno);
    t.order = static_cast<std::size_t>(k);
  }
  t.entries.reserve(t.order * t.order);
  for (std::size_t row = 0; row < t.order; ++row) {
    if (!next_line()) throw FormatError("missing table row " + std::to_string(row), lineno + 1);
    std::istringstream ss(line);
    long long v;
    std::size_t count = 0;
    while (ss >> v) {
      if (v < 0) throw FormatError("negative element index", lineno);
      t.entries.push_back(static_cast<std::uint32_t>(v));
      ++count;
    }
    if (!ss.eof() || count != t.order) {
      throw FormatError("expected " + std::to_string(t.order) + " indices in row " + std::to_string(row), lineno);
    }
  }
  if (!next_line()) throw FormatError("missing \"gens\" line", lineno + 1);
  std::istringstream ss(line);
  std::string word;
  if (!(ss >> word) || word != "gens") throw FormatError("expected \"gens ...\"", lineno);
  long long v;
  while (ss >> v) {
    if (v < 0) throw FormatError("negative generator index", lineno);
    t.generators.push_back(static_cast<std::uint32_t>(v));
  }
  if (!ss.eof()) throw FormatError("malformed generator list", lineno);
  return t;
}

inline void write_table(std::ostream& out, MultiplicationTable const& t) {
  out << "order " << t.order << '\n';
  for (std::size_t i = 0; i < t.order; ++i) {
    for (std::size_t j = 0; j < t.order; ++j) out << (j ? " " : "") << t.product(i, j);
    out << '\n';
  }
  out << "gens";
  for (auto g : t.generators) out << ' ' << g;
  out << '\n';
}

inline EnginePtr load_table_engine(std::string const& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open table file: " + path);
  return engine_finite_table(read_table(in), path);
}

}  // namespace hyperprof
