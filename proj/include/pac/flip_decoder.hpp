#pragma once

#include <algorithm>
#include <bit>
#include <functional>
#include <span>
#include <stdexcept>
#include <vector>

#include "pac/list_decoder.hpp"

namespace pac {

// Decision confidence at a prune: log-sum-exp of survivor likelihoods minus
// alpha times the same for the removed half. Low values mark suspects.
inline double confidence(std::span<const double> survivor_pms,
                         std::span<const double> removed_pms, double alpha) {
  if (survivor_pms.empty() || removed_pms.empty())
    throw std::invalid_argument("confidence: empty metric set");
  return detail::confidence_from_pms(survivor_pms, removed_pms, alpha);
}

struct FlipSet {
  std::vector<int> indices;
  std::vector<double> confidences;
};

// Flip candidates ordered least-confident first; equal confidences fall back
// to the smaller bit index. At most `budget` entries.
inline FlipSet gen_flip(const std::vector<CompetitionRecord>& records, int budget) {
  if (budget < 0) throw std::invalid_argument("gen_flip: negative budget");
  std::vector<const CompetitionRecord*> by_conf;
  by_conf.reserve(records.size());
  for (const auto& r : records) by_conf.push_back(&r);
  std::sort(by_conf.begin(), by_conf.end(),
            [](const CompetitionRecord* a, const CompetitionRecord* b) {
              if (a->confidence != b->confidence) return a->confidence < b->confidence;
              return a->index < b->index;
            });
  FlipSet fs;
  std::size_t take = std::min<std::size_t>(static_cast<std::size_t>(budget), by_conf.size());
  fs.indices.reserve(take);
  fs.confidences.reserve(take);
  for (std::size_t k = 0; k < take; ++k) {
    fs.indices.push_back(by_conf[k]->index);
    fs.confidences.push_back(by_conf[k]->confidence);
  }
  return fs;
}

namespace detail {

// A flip is only meaningful where a full prune happens: an information index
// past the first log2(L) ones.
inline void check_flip_index(const CodeConfig& cfg, int flip_index) {
  if (flip_index == kNoFlip) return;
  int log2_list = std::bit_width(static_cast<unsigned>(cfg.list_size)) - 1;
  auto it = std::lower_bound(cfg.info_set.begin(), cfg.info_set.end(), flip_index);
  if (it == cfg.info_set.end() || *it != flip_index)
    throw std::invalid_argument("flip index is not an information index");
  if (static_cast<int>(it - cfg.info_set.begin()) < log2_list)
    throw std::invalid_argument("flip index precedes the first prune");
}

}  // namespace detail

// One re-decode with the prune at flip_index inverted: the candidates a
// standard prune would discard are kept instead.
inline BitVector pac_sclf_attempt(std::span<const double> llrs, const CodeConfig& cfg,
                                  int flip_index) {
  detail::check_flip_index(cfg, flip_index);
  DecodeOptions opts;
  opts.flip_index = flip_index;
  return pac_scl_decode(llrs, cfg, opts).v_hat;
}

struct SclfResult {
  BitVector v_hat;
  int attempts_used = 0;  // 0 means the initial decode was accepted
};

// Failure detector for the flip loop: returns true when a decode is wrong.
// The simulator plugs in a genie that compares against the transmitted word;
// an outer code could replace it.
using FailureOracle = std::function<bool(const BitVector& v_hat)>;

inline SclfResult pac_sclf_decode(PacListDecoder& dec, std::span<const double> llrs,
                                  const FailureOracle& failed) {
  const CodeConfig& cfg = dec.config();
  DecodeResult first = dec.decode(llrs);
  if (!failed(first.v_hat)) return {std::move(first.v_hat), 0};

  FlipSet fs = gen_flip(first.records, cfg.max_flips);
  BitVector last = std::move(first.v_hat);
  int attempts = 0;
  for (int idx : fs.indices) {
    DecodeOptions opts;
    opts.flip_index = idx;
    DecodeResult r = dec.decode(llrs, opts);
    ++attempts;
    last = std::move(r.v_hat);
    if (!failed(last)) return {std::move(last), attempts};
  }
  return {std::move(last), attempts};
}

inline SclfResult pac_sclf_decode(std::span<const double> llrs, const CodeConfig& cfg,
                                  const FailureOracle& failed) {
  PacListDecoder dec(cfg);
  return pac_sclf_decode(dec, llrs, failed);
}

inline SclfResult pac_sclf_decode(std::span<const double> llrs, const CodeConfig& cfg,
                                  const BitVector& truth_v) {
  return pac_sclf_decode(llrs, cfg,
                         FailureOracle([&truth_v](const BitVector& v) { return v != truth_v; }));
}

}  // namespace pac
