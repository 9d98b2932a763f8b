#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <functional>
#include <limits>
#include <numeric>
#include <span>
#include <stdexcept>
#include <utility>
#include <vector>

#include "pac/codec_core.hpp"
#include "pac/conv_precoder.hpp"

namespace pac {

// Check-node update. Exact mode is the boxplus identity
// 2*atanh(tanh(a/2)*tanh(b/2)) in a form that cannot overflow.
inline double llr_f(double a, double b, LlrMode mode = LlrMode::min_sum) {
  double m = std::min(std::abs(a), std::abs(b));
  double v = ((a < 0.0) != (b < 0.0)) ? -m : m;
  if (mode == LlrMode::exact)
    v += std::log1p(std::exp(-std::abs(a + b))) - std::log1p(std::exp(-std::abs(a - b)));
  return v;
}

inline double llr_g(double a, double b, std::uint8_t left_bit) {
  return left_bit ? b - a : b + a;
}

// Path metric update: free when the hard decision agrees with the llr sign
// (sign(0) = +1), otherwise pay the magnitude.
inline double calc_pm(double pm, double llr, std::uint8_t u) {
  std::uint8_t agree = llr < 0.0 ? 1 : 0;
  return (u == agree) ? pm : pm + std::abs(llr);
}

namespace detail {

inline double log_sum_exp_neg(std::span<const double> pms) {
  double lo = pms[0];
  for (double p : pms) lo = std::min(lo, p);
  double acc = 0.0;
  for (double p : pms) acc += std::exp(-(p - lo));
  return -lo + std::log(acc);
}

inline double confidence_from_pms(std::span<const double> survivors,
                                  std::span<const double> removed, double alpha) {
  double e = log_sum_exp_neg(survivors) - alpha * log_sum_exp_neg(removed);
  const double cap = 1e300;
  if (!(e > -cap)) e = -cap;
  if (e > cap) e = cap;
  return e;
}

}  // namespace detail

// Stable selection: candidates sorted by (metric, creation order); the first
// `keep` survive. Inverted selection returns the complement, i.e. exactly the
// candidates a standard prune would discard.
inline std::vector<int> select_survivors(std::span<const double> metrics, int keep,
                                         bool invert = false) {
  const int c = static_cast<int>(metrics.size());
  if (keep < 0 || keep > c) throw std::invalid_argument("select_survivors: keep out of range");
  std::vector<int> order(static_cast<std::size_t>(c));
  std::iota(order.begin(), order.end(), 0);
  std::stable_sort(order.begin(), order.end(),
                   [&](int a, int b) { return metrics[static_cast<std::size_t>(a)] < metrics[static_cast<std::size_t>(b)]; });
  if (invert) return std::vector<int>(order.begin() + keep, order.end());
  return std::vector<int>(order.begin(), order.begin() + keep);
}

struct CompetitionRecord {
  int index = 0;  // information bit index where the prune happened
  std::vector<double> survivor_pms;
  std::vector<double> removed_pms;
  double confidence = 0.0;
};

struct FinalPath {
  BitVector v_hat;
  double pm = 0.0;
};

struct DecodeResult {
  BitVector v_hat;  // lowest-metric survivor, ties to the earliest path
  std::vector<FinalPath> finalists;
  std::vector<CompetitionRecord> records;
};

struct BitTraceEvent {
  int index = 0;
  bool is_info = false;
  std::vector<double> pms;            // survivor metrics after this bit
  std::vector<BitVector> prefixes;    // survivor v prefixes, only if requested
};

constexpr int kNoFlip = -1;

struct DecodeOptions {
  int flip_index = kNoFlip;  // invert the prune at this bit index
  std::function<void(const BitTraceEvent&)> on_bit;
  bool capture_prefixes = false;
};

// Successive-cancellation list decoder over the precoded polar code.
// Each path owns its llr/partial-sum workspaces; duplication copies them.
// An instance is reusable across decodes but not shareable across threads.
class PacListDecoder {
 public:
  explicit PacListDecoder(CodeConfig cfg)
      : cfg_(std::move(cfg)),
        state_mask_(taps_state_mask(cfg_.taps)),
        memory_(static_cast<int>(cfg_.taps.size()) - 1) {
    validate_config(cfg_);
    paths_.resize(static_cast<std::size_t>(cfg_.list_size));
    next_paths_.resize(static_cast<std::size_t>(cfg_.list_size));
    for (auto& p : paths_) init_path(p);
    for (auto& p : next_paths_) init_path(p);
  }

  const CodeConfig& config() const { return cfg_; }

  DecodeResult decode(std::span<const double> channel_llrs) {
    return decode(channel_llrs, DecodeOptions{});
  }

  DecodeResult decode(std::span<const double> channel_llrs, const DecodeOptions& opts) {
    if (static_cast<int>(channel_llrs.size()) != cfg_.block_len)
      throw std::invalid_argument("decode: llr length mismatch");
    channel_ = channel_llrs.data();
    flip_index_ = opts.flip_index;
    trace_ = opts.on_bit ? &opts.on_bit : nullptr;
    capture_prefixes_ = opts.capture_prefixes;
    records_.clear();
    active_ = 1;
    paths_[0].pm = 0.0;
    paths_[0].reg = 0;
    decode_subtree(0, 0, 0);

    DecodeResult res;
    res.records = std::move(records_);
    records_.clear();
    res.finalists.reserve(static_cast<std::size_t>(active_));
    int best = 0;
    for (int l = 0; l < active_; ++l) {
      res.finalists.push_back({paths_[static_cast<std::size_t>(l)].v_hat,
                               paths_[static_cast<std::size_t>(l)].pm});
      if (paths_[static_cast<std::size_t>(l)].pm < paths_[static_cast<std::size_t>(best)].pm)
        best = l;
    }
    res.v_hat = paths_[static_cast<std::size_t>(best)].v_hat;
    return res;
  }

 private:
  struct Path {
    std::vector<double> llr;   // stages 1..n, active node per stage
    BitVector cw;              // partial-sum scratch: root block + one left block per stage
    BitVector v_hat, u_hat;
    std::uint64_t reg = 0;
    double pm = 0.0;
  };

  void init_path(Path& p) const {
    p.llr.assign(static_cast<std::size_t>(cfg_.block_len - 1), 0.0);
    p.cw.assign(static_cast<std::size_t>(2 * cfg_.block_len - 1), 0);
    p.v_hat.assign(static_cast<std::size_t>(cfg_.block_len), 0);
    p.u_hat.assign(static_cast<std::size_t>(cfg_.block_len), 0);
  }

  int llr_off(int depth) const { return cfg_.block_len - (cfg_.block_len >> (depth - 1)); }
  int left_off(int depth) const { return 2 * cfg_.block_len - (cfg_.block_len >> (depth - 1)); }

  void decode_subtree(int depth, int first_leaf, int out_off) {
    const int len = cfg_.block_len >> depth;
    if (len == 1) {
      process_leaf(first_leaf, out_off);
      return;
    }
    const int half = len >> 1;
    const int child_off = llr_off(depth + 1);
    const int in_off = (depth == 0) ? 0 : llr_off(depth);
    const LlrMode mode = cfg_.llr_mode;

    for (int l = 0; l < active_; ++l) {
      Path& p = paths_[static_cast<std::size_t>(l)];
      const double* in = (depth == 0) ? channel_ : p.llr.data() + in_off;
      double* out = p.llr.data() + child_off;
      for (int j = 0; j < half; ++j) out[j] = llr_f(in[j], in[j + half], mode);
    }
    decode_subtree(depth + 1, first_leaf, left_off(depth + 1));

    for (int l = 0; l < active_; ++l) {
      Path& p = paths_[static_cast<std::size_t>(l)];
      const double* in = (depth == 0) ? channel_ : p.llr.data() + in_off;
      double* out = p.llr.data() + child_off;
      const std::uint8_t* lcw = p.cw.data() + left_off(depth + 1);
      for (int j = 0; j < half; ++j) out[j] = llr_g(in[j], in[j + half], lcw[j]);
    }
    decode_subtree(depth + 1, first_leaf + half, out_off + half);

    for (int l = 0; l < active_; ++l) {
      Path& p = paths_[static_cast<std::size_t>(l)];
      std::uint8_t* oc = p.cw.data() + out_off;
      const std::uint8_t* lcw = p.cw.data() + left_off(depth + 1);
      for (int j = 0; j < half; ++j) oc[j] = lcw[j] ^ oc[half + j];
    }
  }

  void process_leaf(int i, int out_off) {
    const int leaf_off = cfg_.block_len - 2;

    if (!cfg_.is_info[static_cast<std::size_t>(i)]) {
      for (int l = 0; l < active_; ++l) {
        Path& p = paths_[static_cast<std::size_t>(l)];
        double leaf_llr = p.llr[static_cast<std::size_t>(leaf_off)];
        std::uint8_t u = conv_output(0, p.reg, state_mask_);
        p.pm = calc_pm(p.pm, leaf_llr, u);
        p.v_hat[static_cast<std::size_t>(i)] = 0;
        p.u_hat[static_cast<std::size_t>(i)] = u;
        p.reg = conv_advance(p.reg, 0, memory_);
        p.cw[static_cast<std::size_t>(out_off)] = u;
      }
      emit_trace(i);
      return;
    }

    const int count = 2 * active_;
    cand_pm_.resize(static_cast<std::size_t>(count));
    base_u_.resize(static_cast<std::size_t>(active_));
    for (int l = 0; l < active_; ++l) {
      Path& p = paths_[static_cast<std::size_t>(l)];
      double leaf_llr = p.llr[static_cast<std::size_t>(leaf_off)];
      std::uint8_t u0 = conv_output(0, p.reg, state_mask_);
      base_u_[static_cast<std::size_t>(l)] = u0;
      cand_pm_[static_cast<std::size_t>(2 * l)] = calc_pm(p.pm, leaf_llr, u0);
      cand_pm_[static_cast<std::size_t>(2 * l + 1)] = calc_pm(p.pm, leaf_llr, u0 ^ 1);
    }

    kept_.clear();
    if (count <= cfg_.list_size) {
      kept_.resize(static_cast<std::size_t>(count));
      std::iota(kept_.begin(), kept_.end(), 0);
    } else {
      const int L = cfg_.list_size;
      std::vector<int> order = select_survivors(cand_pm_, L, false);
      std::vector<int> removed = select_survivors(cand_pm_, L, true);
      CompetitionRecord rec;
      rec.index = i;
      rec.survivor_pms.reserve(order.size());
      rec.removed_pms.reserve(removed.size());
      for (int c : order) rec.survivor_pms.push_back(cand_pm_[static_cast<std::size_t>(c)]);
      for (int c : removed) rec.removed_pms.push_back(cand_pm_[static_cast<std::size_t>(c)]);
      rec.confidence = detail::confidence_from_pms(rec.survivor_pms, rec.removed_pms, cfg_.alpha);
      records_.push_back(std::move(rec));
      kept_ = (i == flip_index_) ? std::move(removed) : std::move(order);
    }

    const int keep_n = static_cast<int>(kept_.size());
    for (int k = 0; k < keep_n; ++k) {
      int c = kept_[static_cast<std::size_t>(k)];
      int l = c >> 1;
      std::uint8_t v = static_cast<std::uint8_t>(c & 1);
      const Path& src = paths_[static_cast<std::size_t>(l)];
      Path& dst = next_paths_[static_cast<std::size_t>(k)];
      dst.llr = src.llr;
      dst.cw = src.cw;
      dst.v_hat = src.v_hat;
      dst.u_hat = src.u_hat;
      std::uint8_t u = base_u_[static_cast<std::size_t>(l)] ^ v;
      dst.pm = cand_pm_[static_cast<std::size_t>(c)];
      dst.reg = conv_advance(src.reg, v, memory_);
      dst.v_hat[static_cast<std::size_t>(i)] = v;
      dst.u_hat[static_cast<std::size_t>(i)] = u;
      dst.cw[static_cast<std::size_t>(out_off)] = u;
    }
    std::swap(paths_, next_paths_);
    active_ = keep_n;
    emit_trace(i);
  }

  void emit_trace(int i) {
    if (!trace_) return;
    BitTraceEvent ev;
    ev.index = i;
    ev.is_info = cfg_.is_info[static_cast<std::size_t>(i)] != 0;
    ev.pms.reserve(static_cast<std::size_t>(active_));
    for (int l = 0; l < active_; ++l) ev.pms.push_back(paths_[static_cast<std::size_t>(l)].pm);
    if (capture_prefixes_) {
      ev.prefixes.reserve(static_cast<std::size_t>(active_));
      for (int l = 0; l < active_; ++l) {
        const BitVector& vh = paths_[static_cast<std::size_t>(l)].v_hat;
        ev.prefixes.emplace_back(vh.begin(), vh.begin() + i + 1);
      }
    }
    (*trace_)(ev);
  }

  CodeConfig cfg_;
  std::uint64_t state_mask_ = 0;
  int memory_ = 0;

  std::vector<Path> paths_, next_paths_;
  int active_ = 0;
  const double* channel_ = nullptr;
  int flip_index_ = kNoFlip;
  const std::function<void(const BitTraceEvent&)>* trace_ = nullptr;
  bool capture_prefixes_ = false;
  std::vector<CompetitionRecord> records_;
  std::vector<double> cand_pm_;
  std::vector<std::uint8_t> base_u_;
  std::vector<int> kept_;
};

inline DecodeResult pac_scl_decode(std::span<const double> llrs, const CodeConfig& cfg,
                                   const DecodeOptions& opts) {
  PacListDecoder dec(cfg);
  return dec.decode(llrs, opts);
}

inline DecodeResult pac_scl_decode(std::span<const double> llrs, const CodeConfig& cfg) {
  return pac_scl_decode(llrs, cfg, DecodeOptions{});
}

namespace detail {

// Single-path successive-cancellation sweep, natural order. The visitor sees
// each leaf's bit-channel llr and returns the hard bit fed back into the
// partial sums. Deliberately simple; also serves as an independent reference
// for metric evaluation.
template <typename Visitor>
inline void sc_sweep(std::span<const double> channel, int n, LlrMode mode, Visitor&& visit) {
  const int N = 1 << n;
  std::vector<double> llr(static_cast<std::size_t>(N - 1));
  std::vector<std::uint8_t> cw(static_cast<std::size_t>(2 * N - 1));
  auto loff = [N](int d) { return N - (N >> (d - 1)); };
  auto coff = [N](int d) { return 2 * N - (N >> (d - 1)); };
  auto rec = [&](auto&& self, int depth, int first, int out) -> void {
    const int len = N >> depth;
    if (len == 1) {
      cw[static_cast<std::size_t>(out)] =
          visit(first, llr[static_cast<std::size_t>(N - 2)]);
      return;
    }
    const int half = len >> 1;
    const double* in = (depth == 0) ? channel.data() : llr.data() + loff(depth);
    double* ch = llr.data() + loff(depth + 1);
    for (int j = 0; j < half; ++j) ch[j] = llr_f(in[j], in[j + half], mode);
    self(self, depth + 1, first, coff(depth + 1));
    const std::uint8_t* lcw = cw.data() + coff(depth + 1);
    for (int j = 0; j < half; ++j) ch[j] = llr_g(in[j], in[j + half], lcw[j]);
    self(self, depth + 1, first + half, out + half);
    std::uint8_t* oc = cw.data() + out;
    for (int j = 0; j < half; ++j) oc[j] = lcw[j] ^ oc[half + j];
  };
  rec(rec, 0, 0, 0);
}

}  // namespace detail

// Plain successive cancellation: greedy single-path decode of the precoded
// code. Matches the list decoder at list size 1 bit for bit.
inline BitVector pac_sc_decode(std::span<const double> llrs, const CodeConfig& cfg) {
  validate_config(cfg);
  if (static_cast<int>(llrs.size()) != cfg.block_len)
    throw std::invalid_argument("pac_sc_decode: llr length mismatch");
  const std::uint64_t mask = taps_state_mask(cfg.taps);
  const int memory = static_cast<int>(cfg.taps.size()) - 1;
  std::uint64_t reg = 0;
  BitVector v_hat(static_cast<std::size_t>(cfg.block_len));
  detail::sc_sweep(llrs, cfg.n, cfg.llr_mode,
                   [&](int i, double leaf_llr) -> std::uint8_t {
                     std::uint8_t s = conv_output(0, reg, mask);
                     std::uint8_t v = 0;
                     if (cfg.is_info[static_cast<std::size_t>(i)] && leaf_llr != 0.0) {
                       std::uint8_t u_pref = leaf_llr < 0.0 ? 1 : 0;
                       v = u_pref ^ s;
                     }
                     reg = conv_advance(reg, v, memory);
                     v_hat[static_cast<std::size_t>(i)] = v;
                     return static_cast<std::uint8_t>(s ^ v);
                   });
  return v_hat;
}

// Metric a fixed precoded sequence u would accumulate along the
// successive-cancellation schedule. Reference path for oracle decoding.
inline double sc_sequence_metric(std::span<const double> llrs, const BitVector& u,
                                 LlrMode mode) {
  std::size_t n_sz = u.size();
  if (llrs.size() != n_sz || n_sz < 2 || (n_sz & (n_sz - 1)) != 0)
    throw std::invalid_argument("sc_sequence_metric: bad lengths");
  int n = std::bit_width(n_sz) - 1;
  double pm = 0.0;
  detail::sc_sweep(llrs, n, mode, [&](int i, double leaf_llr) -> std::uint8_t {
    std::uint8_t ui = u[static_cast<std::size_t>(i)];
    pm = calc_pm(pm, leaf_llr, ui);
    return ui;
  });
  return pm;
}

}  // namespace pac
