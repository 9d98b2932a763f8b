#pragma once

#include <bit>
#include <cstdint>
#include <stdexcept>
#include <string>
#include <utility>

#include "pac/bits.hpp"

namespace pac {

// Impulse response of the standard precoder, 0o133.
inline BitVector default_taps() { return BitVector{1, 0, 1, 1, 0, 1, 1}; }

// Shift register state, most recent input first: state[0] = v[i-1].
using ConvState = BitVector;

// One step of the rate-1 convolution. Returns the output bit and the
// advanced register.
inline std::pair<std::uint8_t, ConvState> subconv(std::uint8_t v, const ConvState& state,
                                                  const BitVector& taps) {
  if (taps.empty() || state.size() + 1 != taps.size())
    throw std::invalid_argument("subconv: state length must be taps length - 1");
  std::uint8_t u = static_cast<std::uint8_t>(v & taps[0]);
  for (std::size_t j = 1; j < taps.size(); ++j)
    u ^= static_cast<std::uint8_t>(taps[j] & state[j - 1]);
  ConvState next(state.size());
  if (!next.empty()) {
    next[0] = static_cast<std::uint8_t>(v & 1);
    for (std::size_t j = 1; j < next.size(); ++j) next[j] = state[j - 1];
  }
  return {u, next};
}

// Packed variant used in decoder hot loops; bit j-1 of the mask is taps[j].
inline std::uint64_t taps_state_mask(const BitVector& taps) {
  std::uint64_t m = 0;
  for (std::size_t j = 1; j < taps.size(); ++j)
    if (taps[j]) m |= (std::uint64_t{1} << (j - 1));
  return m;
}

inline std::uint8_t conv_output(std::uint8_t v, std::uint64_t reg, std::uint64_t state_mask) {
  return static_cast<std::uint8_t>((v ^ std::popcount(reg & state_mask)) & 1);
}

inline std::uint64_t conv_advance(std::uint64_t reg, std::uint8_t v, int memory) {
  if (memory == 0) return 0;
  return ((reg << 1) | (v & 1)) & ((std::uint64_t{1} << memory) - 1);
}

// Full-block convolution, zero initial state.
inline BitVector conv(const BitVector& v, const BitVector& taps) {
  if (taps.empty() || taps.front() != 1 || taps.back() != 1)
    throw std::invalid_argument("conv: taps must start and end with 1");
  ConvState state(taps.size() - 1, 0);
  BitVector u(v.size());
  for (std::size_t i = 0; i < v.size(); ++i) {
    auto [out, next] = subconv(v[i], state, taps);
    u[i] = out;
    state = std::move(next);
  }
  return u;
}

// Inverse of conv: taps[0] = 1 makes the precoder causally invertible.
inline BitVector deconv(const BitVector& u, const BitVector& taps) {
  if (taps.empty() || taps.front() != 1 || taps.back() != 1)
    throw std::invalid_argument("deconv: taps must start and end with 1");
  std::size_t m = taps.size() - 1;
  BitVector v(u.size());
  for (std::size_t i = 0; i < u.size(); ++i) {
    std::uint8_t acc = u[i];
    for (std::size_t j = 1; j <= m && j <= i; ++j)
      acc ^= static_cast<std::uint8_t>(taps[j] & v[i - j]);
    v[i] = acc;
  }
  return v;
}

// Taps given either as an octal literal ("133" -> 1011011, read msb-first as
// taps[0]..taps[m]) or as an explicit comma-separated bit list.
inline BitVector taps_from_octal(const std::string& s) {
  if (s.empty()) throw std::invalid_argument("taps_from_octal: empty literal");
  std::uint64_t value = 0;
  for (char c : s) {
    if (c < '0' || c > '7') throw std::invalid_argument("taps_from_octal: bad octal digit");
    if (value > (~std::uint64_t{0} >> 3)) throw std::invalid_argument("taps_from_octal: overflow");
    value = (value << 3) | static_cast<std::uint64_t>(c - '0');
  }
  if (value == 0) throw std::invalid_argument("taps_from_octal: zero taps");
  int top = 63;
  while (((value >> top) & 1) == 0) --top;
  BitVector taps(static_cast<std::size_t>(top) + 1);
  for (int j = 0; j <= top; ++j)
    taps[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((value >> (top - j)) & 1);
  return taps;
}

inline BitVector parse_taps(const std::string& s) {
  if (s.find(',') != std::string::npos) return bits_from_string(s);
  return taps_from_octal(s);
}

}  // namespace pac
