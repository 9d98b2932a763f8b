#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>
#include <vector>

namespace pac {

// Bits are stored one per byte, value 0 or 1.
using BitVector = std::vector<std::uint8_t>;

inline BitVector bits_from_string(const std::string& s) {
  BitVector v;
  v.reserve(s.size());
  for (char c : s) {
    if (c == '0' || c == '1')
      v.push_back(static_cast<std::uint8_t>(c - '0'));
    else if (c != ' ' && c != ',')
      throw std::invalid_argument("bits_from_string: bad character");
  }
  return v;
}

inline std::string to_string(const BitVector& v) {
  std::string s;
  s.reserve(v.size());
  for (auto b : v) s.push_back(b ? '1' : '0');
  return s;
}

inline BitVector xor_bits(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("xor_bits: length mismatch");
  BitVector r(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) r[i] = a[i] ^ b[i];
  return r;
}

inline int hamming_distance(const BitVector& a, const BitVector& b) {
  if (a.size() != b.size()) throw std::invalid_argument("hamming_distance: length mismatch");
  int d = 0;
  for (std::size_t i = 0; i < a.size(); ++i) d += (a[i] != b[i]);
  return d;
}

inline int hamming_weight(const BitVector& v) {
  int w = 0;
  for (auto b : v) w += (b != 0);
  return w;
}

}  // namespace pac
