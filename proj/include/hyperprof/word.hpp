#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace hyperprof {

// One generator or its inverse.
struct Letter {
  std::uint32_t generator = 0;
  int sign = 1;  // +1 or -1

  friend bool operator==(Letter, Letter) = default;
};

inline constexpr Letter inverse(Letter l) noexcept { return {l.generator, -l.sign}; }

using Word = std::vector<Letter>;

inline Word inverse(Word const& w) {
  Word out;
  out.reserve(w.size());
  for (auto it = w.rbegin(); it != w.rend(); ++it) out.push_back(inverse(*it));
  return out;
}

// Free reduction: cancels adjacent x x^-1 pairs until none remain.
inline Word free_reduce(Word const& w) {
  Word out;
  out.reserve(w.size());
  for (Letter l : w) {
    if (!out.empty() && out.back() == inverse(l)) {
      out.pop_back();
    } else {
      out.push_back(l);
    }
  }
  return out;
}

inline bool is_reduced(Word const& w) {
  for (std::size_t i = 1; i < w.size(); ++i) {
    if (w[i] == inverse(w[i - 1])) return false;
  }
  return true;
}

// Generators 0..25 print as a..z, inverses as uppercase; larger ranks fall
// back to g<i> / g<i>^-1.
inline std::string to_string(Word const& w) {
  if (w.empty()) return "1";
  std::string out;
  for (std::size_t i = 0; i < w.size(); ++i) {
    if (i != 0) out += '.';
    Letter l = w[i];
    if (l.generator < 26) {
      out += static_cast<char>((l.sign > 0 ? 'a' : 'A') + l.generator);
    } else {
      out += "g" + std::to_string(l.generator);
      if (l.sign < 0) out += "^-1";
    }
  }
  return out;
}

}  // namespace hyperprof
