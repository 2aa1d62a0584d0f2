#pragma once

#include <charconv>
#include <cstdint>
#include <string>
#include <string_view>

#include "hyperprof/engine.hpp"
#include "hyperprof/engines.hpp"
#include "hyperprof/error.hpp"
#include "hyperprof/table.hpp"

namespace hyperprof {

// Engine spec grammar:
//   spec := "free:" INT | "cyclic:" INT | "heis:" INT
//         | "fp(" spec "," spec ")" | "dp(" spec "," spec ")"
//         | "table:" PATH
// PATH runs up to the next ',' or ')' or the end of input.
class EngineSpecParser {
 public:
  explicit EngineSpecParser(std::string_view text) : text_(text) {}

  EnginePtr parse() {
    EnginePtr e = parse_spec();
    if (pos_ != text_.size()) fail("unexpected trailing input");
    return e;
  }

 private:
  EnginePtr parse_spec() {
    if (eat("free:")) return engine_free(parse_int());
    if (eat("cyclic:")) return engine_cyclic(parse_int());
    if (eat("heis:")) return engine_heisenberg_p(parse_int());
    if (eat("table:")) {
      std::size_t start = pos_;
      while (pos_ < text_.size() && text_[pos_] != ',' && text_[pos_] != ')') ++pos_;
      if (pos_ == start) fail("expected a table path");
      return load_table_engine(std::string(text_.substr(start, pos_ - start)));
    }
    bool is_fp = eat("fp(");
    if (is_fp || eat("dp(")) {
      EnginePtr left = parse_spec();
      expect(',');
      EnginePtr right = parse_spec();
      expect(')');
      return is_fp ? engine_free_product(left, right) : engine_direct_product(left, right);
    }
    fail("expected one of free:, cyclic:, heis:, table:, fp(, dp(");
  }

  std::uint64_t parse_int() {
    std::size_t start = pos_;
    while (pos_ < text_.size() && text_[pos_] >= '0' && text_[pos_] <= '9') ++pos_;
    if (pos_ == start) fail("expected a non-negative integer");
    std::uint64_t v = 0;
    auto [ptr, ec] = std::from_chars(text_.data() + start, text_.data() + pos_, v);
    if (ec != std::errc{}) {
      pos_ = start;
      fail("integer out of range");
    }
    return v;
  }

  bool eat(std::string_view token) {
    if (text_.substr(pos_, token.size()) != token) return false;
    pos_ += token.size();
    return true;
  }

  void expect(char c) {
    if (pos_ >= text_.size() || text_[pos_] != c) fail(std::string("expected '") + c + "'");
    ++pos_;
  }

  [[noreturn]] void fail(std::string const& what) const { throw ParseError("engine spec: " + what, pos_); }

  std::string_view text_;
  std::size_t pos_ = 0;
};

inline EnginePtr parse_engine_spec(std::string_view text) { return EngineSpecParser(text).parse(); }

}  // namespace hyperprof
