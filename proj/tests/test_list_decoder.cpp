#include <catch2/catch_amalgamated.hpp>

#include <cmath>
#include <map>
#include <random>
#include <set>

#include "pac/list_decoder.hpp"
#include "pac/sim_harness.hpp"

using pac::BitVector;
using Catch::Matchers::WithinRel;

namespace {

std::set<std::string> prefix_set(const std::vector<BitVector>& prefixes) {
  std::set<std::string> s;
  for (const auto& p : prefixes) s.insert(pac::to_string(p));
  return s;
}

}  // namespace

TEST_CASE("llr_f examples") {
  CHECK(pac::llr_f(2.0, -3.0) == -2.0);
  CHECK(pac::llr_f(2.0, 0.0) == 0.0);
  CHECK(pac::llr_f(-1.0, -7.0) == 1.0);
  double exact = pac::llr_f(2.0, -3.0, pac::LlrMode::exact);
  CHECK_THAT(exact, WithinRel(2.0 * std::atanh(std::tanh(1.0) * std::tanh(-1.5)), 1e-12));
  // exact mode stays finite where tanh saturates
  CHECK(std::isfinite(pac::llr_f(800.0, -900.0, pac::LlrMode::exact)));
  CHECK_THAT(pac::llr_f(800.0, -900.0, pac::LlrMode::exact), WithinRel(-800.0, 1e-9));
}

TEST_CASE("llr_g examples") {
  CHECK(pac::llr_g(2.0, 3.0, 0) == 5.0);
  CHECK(pac::llr_g(2.0, 3.0, 1) == 1.0);
}

TEST_CASE("calc_pm examples") {
  CHECK(pac::calc_pm(0.0, 2.0, 0) == 0.0);
  CHECK(pac::calc_pm(0.0, 2.0, 1) == 2.0);
  CHECK(pac::calc_pm(1.5, -3.0, 1) == 1.5);
  CHECK(pac::calc_pm(1.5, -3.0, 0) == 4.5);
  // sign(0) = +1: zero llr prefers u = 0 but costs nothing either way
  CHECK(pac::calc_pm(1.0, 0.0, 0) == 1.0);
  CHECK(pac::calc_pm(1.0, 0.0, 1) == 1.0);
}

TEST_CASE("select_survivors is stable and complementary") {
  std::vector<double> pms{3.0, 1.0, 2.0, 1.0};
  CHECK(pac::select_survivors(pms, 2) == std::vector<int>{1, 3});
  CHECK(pac::select_survivors(pms, 2, true) == std::vector<int>{2, 0});

  std::vector<double> ties(6, 7.0);
  CHECK(pac::select_survivors(ties, 3) == std::vector<int>{0, 1, 2});
  CHECK(pac::select_survivors(ties, 3, true) == std::vector<int>{3, 4, 5});

  std::mt19937_64 rng(3);
  for (int t = 0; t < 200; ++t) {
    std::vector<double> m(16);
    for (auto& x : m) x = static_cast<double>(rng() % 8);
    auto kept = pac::select_survivors(m, 8);
    auto dropped = pac::select_survivors(m, 8, true);
    std::set<int> a(kept.begin(), kept.end()), b(dropped.begin(), dropped.end());
    REQUIRE(a.size() == 8);
    REQUIRE(b.size() == 8);
    for (int i : b) REQUIRE(!a.count(i));
    double worst_kept = -1, best_dropped = 1e18;
    for (int i : kept) worst_kept = std::max(worst_kept, m[static_cast<std::size_t>(i)]);
    for (int i : dropped) best_dropped = std::min(best_dropped, m[static_cast<std::size_t>(i)]);
    REQUIRE(worst_kept <= best_dropped);
  }
}

TEST_CASE("noiseless decode recovers every message at (8,4)") {
  for (int L : {1, 2, 4}) {
    for (auto mode : {pac::LlrMode::min_sum, pac::LlrMode::exact}) {
      auto cfg = pac::make_code_config(8, 4, pac::default_taps(), L, 1.25, 5, mode);
      for (unsigned m = 0; m < 16; ++m) {
        BitVector d(4);
        for (int j = 0; j < 4; ++j) d[static_cast<std::size_t>(j)] = (m >> j) & 1;
        BitVector v = pac::profile_map(d, cfg);
        BitVector x = pac::polar_transform(pac::conv(v, cfg.taps));
        auto llr = pac::channel_llr(pac::bpsk_modulate(x), 1.0);
        CHECK(pac::pac_scl_decode(llr, cfg).v_hat == v);
        CHECK(pac::pac_sc_decode(llr, cfg) == v);
      }
    }
  }
}

TEST_CASE("sc equals list decode at list size 1") {
  for (auto [n, k] : {std::pair{8, 4}, std::pair{32, 16}}) {
    auto cfg = pac::make_code_config(n, k, pac::default_taps(), 1);
    for (std::uint64_t t = 0; t < 500; ++t) {
      auto td = pac::make_trial_data(cfg, 1.0, 555, t);
      CHECK(pac::pac_sc_decode(td.llrs, cfg) == pac::pac_scl_decode(td.llrs, cfg).v_hat);
    }
  }
}

TEST_CASE("full list matches the exhaustive oracle at (8,4)") {
  auto cfg = pac::make_code_config(8, 4, pac::default_taps(), 16);
  for (std::uint64_t t = 0; t < 500; ++t) {
    auto td = pac::make_trial_data(cfg, 0.0, 777, t);
    auto res = pac::pac_scl_decode(td.llrs, cfg);
    CHECK(res.v_hat == pac::ml_oracle_decode(td.llrs, cfg));
    CHECK(res.records.empty());  // list never overflows at L = 2^K
    CHECK(res.finalists.size() == 16);
  }
}

TEST_CASE("finalist metrics equal the independent sequence metric") {
  for (auto mode : {pac::LlrMode::min_sum, pac::LlrMode::exact}) {
    auto cfg = pac::make_code_config(32, 16, pac::default_taps(), 8, 1.25, 5, mode);
    for (std::uint64_t t = 0; t < 30; ++t) {
      auto td = pac::make_trial_data(cfg, 1.5, 901, t);
      auto res = pac::pac_scl_decode(td.llrs, cfg);
      REQUIRE(res.finalists.size() == 8);
      for (const auto& fp : res.finalists) {
        BitVector u = pac::conv(fp.v_hat, cfg.taps);
        CHECK(fp.pm == pac::sc_sequence_metric(td.llrs, u, mode));
      }
    }
  }
  auto big = pac::make_code_config(128, 64, pac::default_taps(), 4);
  for (std::uint64_t t = 0; t < 5; ++t) {
    auto td = pac::make_trial_data(big, 2.0, 902, t);
    auto res = pac::pac_scl_decode(td.llrs, big);
    for (const auto& fp : res.finalists)
      CHECK(fp.pm == pac::sc_sequence_metric(td.llrs, pac::conv(fp.v_hat, big.taps),
                                             big.llr_mode));
  }
}

TEST_CASE("competition records have the promised shape") {
  const int L = 8;
  auto cfg = pac::make_code_config(128, 64, pac::default_taps(), L);
  const int log2_list = 3;
  for (std::uint64_t t = 0; t < 20; ++t) {
    auto td = pac::make_trial_data(cfg, 2.0, 321, t);
    auto res = pac::pac_scl_decode(td.llrs, cfg);
    REQUIRE(res.records.size() == static_cast<std::size_t>(cfg.msg_len - log2_list));
    std::set<int> info(cfg.info_set.begin(), cfg.info_set.end());
    int prev_index = -1;
    for (const auto& rec : res.records) {
      REQUIRE(rec.survivor_pms.size() == static_cast<std::size_t>(L));
      REQUIRE(rec.removed_pms.size() == static_cast<std::size_t>(L));
      REQUIRE(info.count(rec.index) == 1);
      REQUIRE(rec.index > prev_index);
      prev_index = rec.index;
      // pruning correctness: no discarded candidate beats a survivor
      REQUIRE(rec.survivor_pms.back() <= rec.removed_pms.front());
      double worst_kept = *std::max_element(rec.survivor_pms.begin(), rec.survivor_pms.end());
      double best_removed = *std::min_element(rec.removed_pms.begin(), rec.removed_pms.end());
      REQUIRE(worst_kept <= best_removed);
      REQUIRE(std::isfinite(rec.confidence));
    }
    // the first prune happens at the info index after the list fills
    CHECK(res.records.front().index == cfg.info_set[static_cast<std::size_t>(log2_list)]);
  }
}

TEST_CASE("path metrics never decrease along a lineage") {
  auto cfg = pac::make_code_config(32, 16, pac::default_taps(), 4);
  for (std::uint64_t t = 0; t < 10; ++t) {
    auto td = pac::make_trial_data(cfg, 1.0, 4040, t);
    std::map<std::string, double> prev;  // prefix -> pm at the previous bit
    pac::DecodeOptions opts;
    opts.capture_prefixes = true;
    bool ok = true;
    opts.on_bit = [&](const pac::BitTraceEvent& ev) {
      std::map<std::string, double> cur;
      for (std::size_t l = 0; l < ev.pms.size(); ++l) {
        std::string key = pac::to_string(ev.prefixes[l]);
        cur[key] = ev.pms[l];
        if (ev.index > 0) {
          auto it = prev.find(key.substr(0, key.size() - 1));
          if (it == prev.end() || ev.pms[l] < it->second) ok = false;
        }
      }
      prev = std::move(cur);
    };
    pac::pac_scl_decode(td.llrs, cfg, opts);
    CHECK(ok);
  }
}

TEST_CASE("larger lists keep every smaller-list survivor") {
  auto base_taps = pac::default_taps();
  for (int small : {1, 2, 4}) {
    auto c1 = pac::make_code_config(16, 8, base_taps, small);
    auto c2 = pac::make_code_config(16, 8, base_taps, 2 * small);
    for (std::uint64_t t = 0; t < 10; ++t) {
      auto td = pac::make_trial_data(c1, 0.5, 606, t);
      std::vector<std::set<std::string>> sets1, sets2;
      pac::DecodeOptions o1, o2;
      o1.capture_prefixes = o2.capture_prefixes = true;
      o1.on_bit = [&](const pac::BitTraceEvent& ev) { sets1.push_back(prefix_set(ev.prefixes)); };
      o2.on_bit = [&](const pac::BitTraceEvent& ev) { sets2.push_back(prefix_set(ev.prefixes)); };
      pac::pac_scl_decode(td.llrs, c1, o1);
      pac::pac_scl_decode(td.llrs, c2, o2);
      REQUIRE(sets1.size() == sets2.size());
      for (std::size_t i = 0; i < sets1.size(); ++i)
        REQUIRE(std::includes(sets2[i].begin(), sets2[i].end(), sets1[i].begin(),
                              sets1[i].end()));
    }
  }
}

TEST_CASE("inverted prune keeps exactly the complement") {
  const int L = 4;
  auto cfg = pac::make_code_config(32, 16, pac::default_taps(), L);
  const int flip_at = cfg.info_set[5];
  for (std::uint64_t t = 0; t < 10; ++t) {
    auto td = pac::make_trial_data(cfg, 1.0, 808, t);
    std::set<std::string> parents, std_set, flip_set;
    pac::DecodeOptions a, b;
    a.capture_prefixes = b.capture_prefixes = true;
    a.on_bit = [&](const pac::BitTraceEvent& ev) {
      if (ev.index == flip_at - 1) parents = prefix_set(ev.prefixes);
      if (ev.index == flip_at) std_set = prefix_set(ev.prefixes);
    };
    b.flip_index = flip_at;
    b.on_bit = [&](const pac::BitTraceEvent& ev) {
      if (ev.index == flip_at) flip_set = prefix_set(ev.prefixes);
    };
    pac::pac_scl_decode(td.llrs, cfg, a);
    pac::pac_scl_decode(td.llrs, cfg, b);
    REQUIRE(std_set.size() == static_cast<std::size_t>(L));
    REQUIRE(flip_set.size() == static_cast<std::size_t>(L));
    for (const auto& p : flip_set) REQUIRE(!std_set.count(p));
    // together the two halves cover every candidate exactly once
    std::set<std::string> all(std_set);
    all.insert(flip_set.begin(), flip_set.end());
    std::set<std::string> expected;
    for (const auto& p : parents) {
      expected.insert(p + "0");
      expected.insert(p + "1");
    }
    REQUIRE(all == expected);
  }
}

TEST_CASE("all-zero llrs resolve ties toward zero") {
  auto cfg = pac::make_code_config(8, 4, pac::default_taps(), 4);
  pac::RealVector llrs(8, 0.0);
  auto res = pac::pac_scl_decode(llrs, cfg);
  CHECK(res.v_hat == BitVector(8, 0));
  CHECK(pac::pac_sc_decode(llrs, cfg) == BitVector(8, 0));
  for (const auto& fp : res.finalists) CHECK(fp.pm == 0.0);
}

TEST_CASE("trace covers every bit in order") {
  auto cfg = pac::make_code_config(32, 16, pac::default_taps(), 4);
  auto td = pac::make_trial_data(cfg, 1.0, 42, 0);
  int expect = 0;
  bool kinds_ok = true;
  pac::DecodeOptions opts;
  opts.on_bit = [&](const pac::BitTraceEvent& ev) {
    if (ev.index != expect++) kinds_ok = false;
    if (ev.is_info != (cfg.is_info[static_cast<std::size_t>(ev.index)] != 0)) kinds_ok = false;
    if (ev.pms.empty() || ev.pms.size() > 4) kinds_ok = false;
  };
  pac::pac_scl_decode(td.llrs, cfg, opts);
  CHECK(expect == 32);
  CHECK(kinds_ok);
}

TEST_CASE("oversized lists degrade to exhaustive search") {
  auto cfg = pac::make_code_config(8, 4, pac::default_taps(), 32);
  auto td = pac::make_trial_data(cfg, 0.0, 9, 3);
  auto res = pac::pac_scl_decode(td.llrs, cfg);
  CHECK(res.finalists.size() == 16);
  CHECK(res.records.empty());
  CHECK(res.v_hat == pac::ml_oracle_decode(td.llrs, cfg));
}

TEST_CASE("decode validates input length") {
  auto cfg = pac::make_code_config(8, 4);
  pac::RealVector llrs(7, 0.0);
  CHECK_THROWS_AS(pac::pac_scl_decode(llrs, cfg), std::invalid_argument);
  CHECK_THROWS_AS(pac::pac_sc_decode(llrs, cfg), std::invalid_argument);
}
