#pragma once

#include <algorithm>
#include <bit>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "pac/bits.hpp"
#include "pac/conv_precoder.hpp"

namespace pac {

enum class LlrMode { min_sum, exact };

// Reed-Muller rate profile: the K indices of largest binary weight.
// Within the boundary weight class, larger indices win, so profiles are
// nested in K and the choice is deterministic.
inline std::vector<int> rm_profile(int block_len, int msg_len) {
  if (block_len < 2 || (block_len & (block_len - 1)) != 0)
    throw std::invalid_argument("rm_profile: block length must be a power of two >= 2");
  if (msg_len < 1 || msg_len > block_len)
    throw std::invalid_argument("rm_profile: message length out of range");
  std::vector<int> idx(block_len);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [](int a, int b) {
    int wa = std::popcount(static_cast<unsigned>(a));
    int wb = std::popcount(static_cast<unsigned>(b));
    if (wa != wb) return wa > wb;
    return a > b;
  });
  std::vector<int> info(idx.begin(), idx.begin() + msg_len);
  std::sort(info.begin(), info.end());
  return info;
}

struct CodeConfig {
  int n = 0;          // log2 of block length
  int block_len = 0;  // N
  int msg_len = 0;    // K
  std::vector<int> info_set;
  BitVector taps;     // convolution impulse response, taps.front() = taps.back() = 1
  int list_size = 1;
  double alpha = 1.25;  // confidence exponent
  int max_flips = 5;    // flip budget per decode
  LlrMode llr_mode = LlrMode::min_sum;
  std::vector<std::uint8_t> is_info;  // per-index flag derived from info_set
};

inline void validate_config(const CodeConfig& cfg) {
  if (cfg.n < 1 || cfg.block_len != (1 << cfg.n))
    throw std::invalid_argument("config: block length must equal 2^n, n >= 1");
  if (cfg.msg_len < 1 || cfg.msg_len > cfg.block_len)
    throw std::invalid_argument("config: message length out of range");
  if (static_cast<int>(cfg.info_set.size()) != cfg.msg_len)
    throw std::invalid_argument("config: info set size must equal message length");
  for (std::size_t j = 0; j < cfg.info_set.size(); ++j) {
    int i = cfg.info_set[j];
    if (i < 0 || i >= cfg.block_len)
      throw std::invalid_argument("config: info index out of range");
    if (j > 0 && cfg.info_set[j - 1] >= i)
      throw std::invalid_argument("config: info set must be strictly increasing");
  }
  if (cfg.taps.empty() || cfg.taps.front() != 1 || cfg.taps.back() != 1)
    throw std::invalid_argument("config: taps must start and end with 1");
  for (auto t : cfg.taps)
    if (t > 1) throw std::invalid_argument("config: taps must be binary");
  if (static_cast<int>(cfg.taps.size()) > 64)
    throw std::invalid_argument("config: taps longer than 64 not supported");
  if (cfg.list_size < 1 || (cfg.list_size & (cfg.list_size - 1)) != 0)
    throw std::invalid_argument("config: list size must be a power of two >= 1");
  if (!(cfg.alpha >= 1.0))
    throw std::invalid_argument("config: alpha must be >= 1");
  if (cfg.max_flips < 0)
    throw std::invalid_argument("config: flip budget must be >= 0");
  if (cfg.is_info.size() != static_cast<std::size_t>(cfg.block_len))
    throw std::invalid_argument("config: stale info flags");
}

inline CodeConfig make_code_config(int block_len, int msg_len,
                                   BitVector taps = default_taps(),
                                   int list_size = 1, double alpha = 1.25,
                                   int max_flips = 5,
                                   LlrMode llr_mode = LlrMode::min_sum,
                                   std::vector<int> info_set = {}) {
  CodeConfig cfg;
  cfg.block_len = block_len;
  cfg.n = (block_len > 0) ? std::bit_width(static_cast<unsigned>(block_len)) - 1 : 0;
  cfg.msg_len = msg_len;
  cfg.info_set = info_set.empty() ? rm_profile(block_len, msg_len) : std::move(info_set);
  cfg.taps = std::move(taps);
  cfg.list_size = list_size;
  cfg.alpha = alpha;
  cfg.max_flips = max_flips;
  cfg.llr_mode = llr_mode;
  cfg.is_info.assign(static_cast<std::size_t>(std::max(block_len, 0)), 0);
  for (int i : cfg.info_set)
    if (i >= 0 && i < block_len) cfg.is_info[static_cast<std::size_t>(i)] = 1;
  validate_config(cfg);
  return cfg;
}

// Scatter message bits onto the information indices; frozen positions stay 0.
inline BitVector profile_map(const BitVector& d, const CodeConfig& cfg) {
  if (d.size() != static_cast<std::size_t>(cfg.msg_len))
    throw std::invalid_argument("profile_map: message length mismatch");
  BitVector v(static_cast<std::size_t>(cfg.block_len), 0);
  for (int j = 0; j < cfg.msg_len; ++j)
    v[static_cast<std::size_t>(cfg.info_set[static_cast<std::size_t>(j)])] = d[static_cast<std::size_t>(j)];
  return v;
}

inline BitVector demapping(const BitVector& v, const CodeConfig& cfg) {
  if (v.size() != static_cast<std::size_t>(cfg.block_len))
    throw std::invalid_argument("demapping: block length mismatch");
  BitVector d(static_cast<std::size_t>(cfg.msg_len));
  for (int j = 0; j < cfg.msg_len; ++j)
    d[static_cast<std::size_t>(j)] = v[static_cast<std::size_t>(cfg.info_set[static_cast<std::size_t>(j)])];
  return d;
}

// x = u * F^(n), F = [[1,0],[1,1]], natural order (no bit reversal).
// Self-inverse over GF(2).
inline BitVector polar_transform(const BitVector& u) {
  std::size_t n = u.size();
  if (n == 0 || (n & (n - 1)) != 0)
    throw std::invalid_argument("polar_transform: length must be a power of two");
  BitVector x = u;
  for (std::size_t step = 1; step < n; step <<= 1)
    for (std::size_t i = 0; i < n; i += step << 1)
      for (std::size_t j = i; j < i + step; ++j)
        x[j] ^= x[j + step];
  return x;
}

}  // namespace pac
