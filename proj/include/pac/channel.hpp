#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <span>
#include <stdexcept>
#include <vector>

#include "pac/bits.hpp"

namespace pac {

using RealVector = std::vector<double>;

// Eb/N0 in dB to noise standard deviation for unit-energy BPSK.
inline double compute_sigma(double rate, double snr_db) {
  if (!(rate > 0.0) || rate > 1.0) throw std::invalid_argument("compute_sigma: rate out of range");
  return (1.0 / std::sqrt(2.0 * rate)) * std::pow(10.0, -snr_db / 20.0);
}

inline RealVector bpsk_modulate(const BitVector& x) {
  RealVector s(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) s[i] = x[i] ? -1.0 : 1.0;
  return s;
}

inline std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ull;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ull;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebull;
  return x ^ (x >> 31);
}

// Independent, reproducible stream seed per (master seed, stream index).
// Trial outcomes depend only on this pair, never on scheduling.
inline std::uint64_t derive_stream_seed(std::uint64_t master, std::uint64_t stream) {
  return splitmix64(master + 0x9e3779b97f4a7c15ull * (stream + 1));
}

// mt19937_64 plus explicit Box-Muller so that a seed reproduces the same
// draws everywhere; std::normal_distribution is implementation-defined.
class GaussianSource {
 public:
  explicit GaussianSource(std::uint64_t seed) : eng_(seed) {}

  std::uint8_t next_bit() { return static_cast<std::uint8_t>(eng_() & 1u); }

  // 53-bit uniform in [0,1)
  double next_uniform() { return static_cast<double>(eng_() >> 11) * 0x1.0p-53; }

  double next_gaussian() {
    if (have_spare_) {
      have_spare_ = false;
      return spare_;
    }
    double u1 = static_cast<double>((eng_() >> 11) + 1) * 0x1.0p-53;  // (0,1]
    double u2 = static_cast<double>(eng_() >> 11) * 0x1.0p-53;        // [0,1)
    double r = std::sqrt(-2.0 * std::log(u1));
    double t = 2.0 * 3.141592653589793238462643383279502884 * u2;
    spare_ = r * std::sin(t);
    have_spare_ = true;
    return r * std::cos(t);
  }

  std::mt19937_64& engine() { return eng_; }

 private:
  std::mt19937_64 eng_;
  double spare_ = 0.0;
  bool have_spare_ = false;
};

inline RealVector add_awgn(const RealVector& s, double sigma, GaussianSource& rng) {
  if (!(sigma > 0.0)) throw std::invalid_argument("add_awgn: sigma must be positive");
  RealVector y(s.size());
  for (std::size_t i = 0; i < s.size(); ++i) y[i] = s[i] + sigma * rng.next_gaussian();
  return y;
}

inline RealVector channel_llr(const RealVector& y, double sigma) {
  if (!(sigma > 0.0)) throw std::invalid_argument("channel_llr: sigma must be positive");
  RealVector llr(y.size());
  double scale = 2.0 / (sigma * sigma);
  for (std::size_t i = 0; i < y.size(); ++i) llr[i] = scale * y[i];
  return llr;
}

}  // namespace pac
