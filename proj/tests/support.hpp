#pragma once

// Test-only helpers: random corpora and independent oracles.

#include <cmath>
#include <random>
#include <string>
#include <vector>

#include "braillecam/braille.hpp"
#include "braillecam/layout.hpp"

namespace braillecam::testing {

// Random text over the supported alphabet. Avoids a lowercase a-j directly
// after a digit (rejected in strict mode). First and last characters are
// never spaces: a blank cell leaves no mark on paper.
inline std::string random_text(std::mt19937& rng, std::size_t max_len,
                               bool allow_newlines = false) {
  static const std::string lower = "abcdefghijklmnopqrstuvwxyz";
  static const std::string upper = "ABCDEFGHIJKLMNOPQRSTUVWXYZ";
  static const std::string digits = "0123456789";
  const std::string punct(supported_punctuation());
  std::uniform_int_distribution<std::size_t> len_dist(1, max_len);
  std::uniform_int_distribution<int> kind_dist(0, 99);
  const std::size_t len = len_dist(rng);
  auto pick = [&](const std::string& s) {
    return s[std::uniform_int_distribution<std::size_t>(0, s.size() - 1)(rng)];
  };
  std::string out;
  while (out.size() < len) {
    const int kind = kind_dist(rng);
    const bool edge = out.empty() || out.size() + 1 == len;
    const bool after_digit = !out.empty() && std::isdigit(static_cast<unsigned char>(out.back()));
    char c;
    if (kind < 45) {
      c = pick(lower);
      if (after_digit && c <= 'j') c = static_cast<char>(c + 10);
    } else if (kind < 60) {
      c = pick(upper);
    } else if (kind < 75) {
      c = pick(digits);
    } else if (kind < 88) {
      c = edge ? pick(lower) : ' ';
      if (after_digit && c >= 'a' && c <= 'j') c = static_cast<char>(c + 10);
    } else if (kind < 98 || !allow_newlines) {
      c = pick(punct);
    } else {
      if (edge || out.back() == '\n') continue;
      c = '\n';
    }
    out.push_back(c);
  }
  return out;
}

// Mask from a list of dot numbers, e.g. "1245".
inline unsigned mask_from_dots(const std::string& dots) {
  unsigned m = 0;
  for (char d : dots) m |= 1u << (d - '1');
  return m;
}

// Mirror by permuting individual dots: 1<->4, 2<->5, 3<->6.
inline unsigned mirror_by_dots(unsigned mask) {
  unsigned out = 0;
  for (int dot = 1; dot <= 6; ++dot) {
    if (mask & (1u << (dot - 1))) {
      const int partner = dot <= 3 ? dot + 3 : dot - 3;
      out |= 1u << (partner - 1);
    }
  }
  return out;
}

// Largest n with (n-1)*cell_pitch + dot_pitch <= usable, by enumeration.
inline std::size_t brute_force_capacity(double usable, double dot_pitch, double cell_pitch) {
  std::size_t n = 0;
  while (static_cast<double>(n) * cell_pitch + dot_pitch <= usable + 1e-9) ++n;
  return n;
}

}  // namespace braillecam::testing
