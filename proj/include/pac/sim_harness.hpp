#pragma once

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdint>
#include <limits>
#include <memory>
#include <span>
#include <stdexcept>
#include <string>
#include <thread>
#include <utility>
#include <vector>

#include "pac/channel.hpp"
#include "pac/codec_core.hpp"
#include "pac/conv_precoder.hpp"
#include "pac/flip_decoder.hpp"
#include "pac/list_decoder.hpp"

namespace pac {

enum class DecoderKind { sc, scl, sclf };

inline const char* decoder_name(DecoderKind k) {
  switch (k) {
    case DecoderKind::sc: return "sc";
    case DecoderKind::scl: return "scl";
    case DecoderKind::sclf: return "sclf";
  }
  return "?";
}

inline DecoderKind parse_decoder(const std::string& s) {
  if (s == "sc") return DecoderKind::sc;
  if (s == "scl") return DecoderKind::scl;
  if (s == "sclf") return DecoderKind::sclf;
  throw std::invalid_argument("unknown decoder: " + s);
}

struct TrialResult {
  bool frame_error = false;
  int bit_errors = 0;     // over message bits
  int attempts_used = 0;  // flip attempts; 0 for sc/scl
};

// Everything one trial observes, fully determined by (master_seed,
// trial_index). Draw order: message bits first, then one gaussian per
// channel use.
struct TrialData {
  BitVector message;
  BitVector v;  // rate-profiled word, the decoder's ground truth
  RealVector llrs;
  double sigma = 0.0;
};

inline TrialData make_trial_data(const CodeConfig& cfg, double snr_db,
                                 std::uint64_t master_seed, std::uint64_t trial_index,
                                 bool noiseless = false) {
  GaussianSource rng(derive_stream_seed(master_seed, trial_index));
  TrialData td;
  td.message.resize(static_cast<std::size_t>(cfg.msg_len));
  for (auto& b : td.message) b = rng.next_bit();
  td.v = profile_map(td.message, cfg);
  BitVector u = conv(td.v, cfg.taps);
  BitVector x = polar_transform(u);
  RealVector s = bpsk_modulate(x);
  double rate = static_cast<double>(cfg.msg_len) / cfg.block_len;
  td.sigma = compute_sigma(rate, snr_db);
  RealVector y = noiseless ? s : add_awgn(s, td.sigma, rng);
  td.llrs = channel_llr(y, td.sigma);
  return td;
}

// Runs trials; reusable so decoder workspaces are allocated once.
class TrialRunner {
 public:
  TrialRunner(const CodeConfig& cfg, DecoderKind kind) : cfg_(cfg), kind_(kind) {
    validate_config(cfg_);
    if (kind_ != DecoderKind::sc) dec_ = std::make_unique<PacListDecoder>(cfg_);
  }

  TrialResult run(double snr_db, std::uint64_t master_seed, std::uint64_t trial_index,
                  bool noiseless = false) {
    TrialData td = make_trial_data(cfg_, snr_db, master_seed, trial_index, noiseless);
    BitVector v_hat;
    int attempts = 0;
    switch (kind_) {
      case DecoderKind::sc:
        v_hat = pac_sc_decode(td.llrs, cfg_);
        break;
      case DecoderKind::scl:
        v_hat = dec_->decode(td.llrs).v_hat;
        break;
      case DecoderKind::sclf: {
        const BitVector& truth = td.v;
        SclfResult r = pac_sclf_decode(
            *dec_, td.llrs, [&truth](const BitVector& cand) { return cand != truth; });
        v_hat = std::move(r.v_hat);
        attempts = r.attempts_used;
        break;
      }
    }
    BitVector d_hat = demapping(v_hat, cfg_);
    int be = hamming_distance(td.message, d_hat);
    return {be != 0, be, attempts};
  }

 private:
  CodeConfig cfg_;
  DecoderKind kind_;
  std::unique_ptr<PacListDecoder> dec_;
};

inline TrialResult run_trial(const CodeConfig& cfg, DecoderKind kind, double snr_db,
                             std::uint64_t master_seed, std::uint64_t trial_index,
                             bool noiseless = false) {
  TrialRunner runner(cfg, kind);
  return runner.run(snr_db, master_seed, trial_index, noiseless);
}

// Exhaustive maximum-likelihood reference under the same path metric.
// Ties resolve to the smallest message read as an integer, bit 0 = lsb.
inline BitVector ml_oracle_decode(std::span<const double> llrs, const CodeConfig& cfg) {
  validate_config(cfg);
  if (cfg.msg_len > 16)
    throw std::invalid_argument("ml_oracle_decode: message length above 16");
  if (static_cast<int>(llrs.size()) != cfg.block_len)
    throw std::invalid_argument("ml_oracle_decode: llr length mismatch");
  BitVector best_v;
  double best_pm = std::numeric_limits<double>::infinity();
  BitVector d(static_cast<std::size_t>(cfg.msg_len));
  for (std::uint32_t m = 0; m < (std::uint32_t{1} << cfg.msg_len); ++m) {
    for (int j = 0; j < cfg.msg_len; ++j)
      d[static_cast<std::size_t>(j)] = static_cast<std::uint8_t>((m >> j) & 1);
    BitVector v = profile_map(d, cfg);
    BitVector u = conv(v, cfg.taps);
    double pm = sc_sequence_metric(llrs, u, cfg.llr_mode);
    if (pm < best_pm) {
      best_pm = pm;
      best_v = std::move(v);
    }
  }
  return best_v;
}

// 95% Wilson score interval.
inline std::pair<double, double> wilson_ci(long long errors, long long trials) {
  if (trials <= 0 || errors < 0 || errors > trials)
    throw std::invalid_argument("wilson_ci: bad counts");
  const double z = 1.959963984540054;
  double n = static_cast<double>(trials);
  double p = static_cast<double>(errors) / n;
  double z2 = z * z;
  double denom = 1.0 + z2 / n;
  double center = (p + z2 / (2.0 * n)) / denom;
  double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  // the boundary cases are exact; don't let rounding lift them off 0 or 1
  double lo = errors == 0 ? 0.0 : std::max(0.0, center - half);
  double hi = errors == trials ? 1.0 : std::min(1.0, center + half);
  return {lo, hi};
}

struct StopRule {
  long long fixed_trials = 0;        // > 0: run exactly this many trials
  long long min_frame_errors = 200;  // otherwise: stop once this many errors...
  long long max_trials = 10000000;   // ...or this many trials, whichever first
};

struct SweepRow {
  double snr_db = 0.0;
  long long trials = 0;
  long long frame_errors = 0;
  long long bit_errors = 0;
  double fer = 0.0;
  double ber = 0.0;
  double ci_lo = 0.0;
  double ci_hi = 0.0;
  double mean_attempts = 0.0;
  double wall_seconds = 0.0;
};

// Monte Carlo at one SNR point. Trials are scheduled in fixed-size chunks and
// each trial depends only on (master_seed, trial_index), so the row is
// identical for any thread count.
inline SweepRow run_point(const CodeConfig& cfg, DecoderKind kind, double snr_db,
                          std::uint64_t master_seed, const StopRule& stop,
                          int threads = 1, bool noiseless = false) {
  validate_config(cfg);
  if (stop.fixed_trials <= 0 && stop.min_frame_errors <= 0)
    throw std::invalid_argument("run_point: stop rule needs a target");
  if (stop.fixed_trials <= 0 && stop.max_trials <= 0)
    throw std::invalid_argument("run_point: max trials must be positive");
  threads = std::max(1, threads);
  const long long chunk = 256;  // fixed: results must not depend on threads
  const long long limit = stop.fixed_trials > 0 ? stop.fixed_trials : stop.max_trials;

  std::vector<std::unique_ptr<TrialRunner>> runners;
  runners.reserve(static_cast<std::size_t>(threads));
  for (int t = 0; t < threads; ++t) runners.push_back(std::make_unique<TrialRunner>(cfg, kind));

  struct Acc {
    long long fe = 0, be = 0, att = 0;
  };

  auto t0 = std::chrono::steady_clock::now();
  long long trials = 0, frame_errors = 0, bit_errors = 0, attempts = 0;
  while (trials < limit) {
    if (stop.fixed_trials <= 0 && frame_errors >= stop.min_frame_errors) break;
    const long long begin = trials;
    const long long end = std::min(begin + chunk, limit);
    std::atomic<long long> next{begin};
    std::vector<Acc> accs(static_cast<std::size_t>(threads));
    auto work = [&](int t) {
      TrialRunner& runner = *runners[static_cast<std::size_t>(t)];
      Acc& acc = accs[static_cast<std::size_t>(t)];
      for (;;) {
        long long i = next.fetch_add(1, std::memory_order_relaxed);
        if (i >= end) break;
        TrialResult tr = runner.run(snr_db, master_seed, static_cast<std::uint64_t>(i), noiseless);
        acc.fe += tr.frame_error ? 1 : 0;
        acc.be += tr.bit_errors;
        acc.att += tr.attempts_used;
      }
    };
    if (threads == 1) {
      work(0);
    } else {
      std::vector<std::thread> pool;
      pool.reserve(static_cast<std::size_t>(threads));
      for (int t = 0; t < threads; ++t) pool.emplace_back(work, t);
      for (auto& th : pool) th.join();
    }
    for (const auto& a : accs) {
      frame_errors += a.fe;
      bit_errors += a.be;
      attempts += a.att;
    }
    trials = end;
  }
  auto t1 = std::chrono::steady_clock::now();

  SweepRow row;
  row.snr_db = snr_db;
  row.trials = trials;
  row.frame_errors = frame_errors;
  row.bit_errors = bit_errors;
  row.fer = static_cast<double>(frame_errors) / static_cast<double>(trials);
  row.ber = static_cast<double>(bit_errors) /
            (static_cast<double>(trials) * static_cast<double>(cfg.msg_len));
  auto ci = wilson_ci(frame_errors, trials);
  row.ci_lo = ci.first;
  row.ci_hi = ci.second;
  row.mean_attempts = static_cast<double>(attempts) / static_cast<double>(trials);
  row.wall_seconds = std::chrono::duration<double>(t1 - t0).count();
  return row;
}

inline std::vector<SweepRow> run_sweep(const CodeConfig& cfg, DecoderKind kind,
                                       const std::vector<double>& snrs,
                                       std::uint64_t master_seed, const StopRule& stop,
                                       int threads = 1, bool noiseless = false) {
  std::vector<SweepRow> rows;
  rows.reserve(snrs.size());
  for (double snr : snrs)
    rows.push_back(run_point(cfg, kind, snr, master_seed, stop, threads, noiseless));
  return rows;
}

}  // namespace pac
