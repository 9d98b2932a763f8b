#include <cmath>
#include <cstdio>
#include <iostream>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>

#include "pac/pac.hpp"

namespace {

struct CommonArgs {
  int block_len = 128;
  int msg_len = 64;
  std::string profile = "rm";
  std::string taps = "133";
  int list_size = 32;
  std::string decoder = "scl";
  int flips = 5;
  double alpha = 1.25;
  std::string llr_mode = "min_sum";
  std::uint64_t seed = 42;
  bool noiseless = false;
};

void add_common(CLI::App* cmd, CommonArgs& a) {
  cmd->add_option("--n", a.block_len, "block length (power of two)");
  cmd->add_option("--k", a.msg_len, "message length");
  cmd->add_option("--profile", a.profile, "rate profile (rm)");
  cmd->add_option("--g", a.taps, "convolution taps: octal literal or comma bit list");
  cmd->add_option("--list", a.list_size, "list size (power of two)");
  cmd->add_option("--decoder", a.decoder, "decoder: sc, scl or sclf");
  cmd->add_option("--flips", a.flips, "flip budget for sclf");
  cmd->add_option("--alpha", a.alpha, "confidence exponent");
  cmd->add_option("--llr-mode", a.llr_mode, "llr_f mode: min_sum or exact");
  cmd->add_option("--seed", a.seed, "master seed");
  cmd->add_flag("--noiseless", a.noiseless, "bypass the noise source");
}

pac::CodeConfig make_config(const CommonArgs& a) {
  if (a.profile != "rm")
    throw std::invalid_argument("unknown profile: " + a.profile);
  pac::LlrMode mode;
  if (a.llr_mode == "min_sum")
    mode = pac::LlrMode::min_sum;
  else if (a.llr_mode == "exact")
    mode = pac::LlrMode::exact;
  else
    throw std::invalid_argument("unknown llr mode: " + a.llr_mode);
  return pac::make_code_config(a.block_len, a.msg_len, pac::parse_taps(a.taps),
                               a.list_size, a.alpha, a.flips, mode);
}

std::vector<double> parse_snr_grid(const std::string& s) {
  std::vector<double> out;
  if (s.find(':') != std::string::npos) {
    double lo = 0, step = 0, hi = 0;
    if (std::sscanf(s.c_str(), "%lf:%lf:%lf", &lo, &step, &hi) != 3 || step <= 0 || hi < lo)
      throw std::invalid_argument("bad snr range, expected lo:step:hi");
    int count = static_cast<int>(std::floor((hi - lo) / step + 1e-9)) + 1;
    for (int i = 0; i < count; ++i) out.push_back(lo + i * step);
    return out;
  }
  std::size_t pos = 0;
  while (pos < s.size()) {
    std::size_t next = s.find(',', pos);
    if (next == std::string::npos) next = s.size();
    std::string item = s.substr(pos, next - pos);
    std::size_t used = 0;
    double v = 0;
    try {
      v = std::stod(item, &used);
    } catch (const std::exception&) {
      throw std::invalid_argument("bad snr value: " + item);
    }
    if (used != item.size()) throw std::invalid_argument("bad snr value: " + item);
    out.push_back(v);
    pos = next + 1;
  }
  if (out.empty()) throw std::invalid_argument("empty snr list");
  return out;
}

int run_sweep_cmd(const CommonArgs& a, const std::string& snr_grid, long long fixed_trials,
                  long long min_errors, long long max_trials, int threads,
                  const std::string& out_path, bool gnuplot) {
  pac::CodeConfig cfg = make_config(a);
  pac::DecoderKind kind = pac::parse_decoder(a.decoder);
  std::vector<double> snrs = parse_snr_grid(snr_grid);
  pac::StopRule stop;
  stop.fixed_trials = fixed_trials;
  stop.min_frame_errors = min_errors;
  stop.max_trials = max_trials;
  if (threads <= 0) {
    unsigned hw = std::thread::hardware_concurrency();
    threads = hw ? static_cast<int>(hw) : 1;
  }

  std::cout << pac::csv_header() << '\n';
  std::vector<pac::SweepRow> rows;
  rows.reserve(snrs.size());
  for (double snr : snrs) {
    pac::SweepRow row = pac::run_point(cfg, kind, snr, a.seed, stop, threads, a.noiseless);
    std::cout << pac::csv_line(row) << std::endl;
    rows.push_back(row);
  }

  pac::RunInfo info;
  info.cfg = cfg;
  info.decoder = kind;
  info.snrs = snrs;
  info.stop = stop;
  info.master_seed = a.seed;
  info.threads = threads;
  info.noiseless = a.noiseless;
  info.csv_path = out_path;
  pac::write_csv(out_path, rows);
  pac::write_manifest(pac::manifest_path_for(out_path), info);
  std::cerr << "wrote " << out_path << " and " << pac::manifest_path_for(out_path) << '\n';
  if (gnuplot) {
    pac::write_gnuplot(pac::gnuplot_path_for(out_path), info);
    std::cerr << "wrote " << pac::gnuplot_path_for(out_path) << '\n';
  }
  return 0;
}

void print_trace_line(const pac::BitTraceEvent& ev) {
  std::printf("bit=%d kind=%s pms=", ev.index, ev.is_info ? "info" : "frozen");
  for (std::size_t l = 0; l < ev.pms.size(); ++l)
    std::printf(l ? ",%.6g" : "%.6g", ev.pms[l]);
  std::printf("\n");
}

int run_trial_cmd(const CommonArgs& a, double snr, std::uint64_t trial_index, bool trace) {
  pac::CodeConfig cfg = make_config(a);
  pac::DecoderKind kind = pac::parse_decoder(a.decoder);
  pac::TrialData td = pac::make_trial_data(cfg, snr, a.seed, trial_index, a.noiseless);

  pac::DecodeOptions opts;
  if (trace) opts.on_bit = print_trace_line;

  pac::BitVector v_hat;
  int attempts = 0;
  if (kind == pac::DecoderKind::sc) {
    if (trace) std::cerr << "note: trace requires a list decoder, ignoring\n";
    v_hat = pac::pac_sc_decode(td.llrs, cfg);
  } else {
    pac::PacListDecoder dec(cfg);
    if (trace) std::printf("decode attempt=0 flip=none\n");
    pac::DecodeResult first = dec.decode(td.llrs, opts);
    v_hat = first.v_hat;
    if (kind == pac::DecoderKind::sclf && v_hat != td.v) {
      pac::FlipSet fs = pac::gen_flip(first.records, cfg.max_flips);
      for (std::size_t m = 0; m < fs.indices.size(); ++m) {
        pac::DecodeOptions fopts = opts;
        fopts.flip_index = fs.indices[m];
        if (trace) std::printf("decode attempt=%zu flip=%d\n", m + 1, fs.indices[m]);
        v_hat = dec.decode(td.llrs, fopts).v_hat;
        ++attempts;
        if (v_hat == td.v) break;
      }
    }
  }

  pac::BitVector d_hat = pac::demapping(v_hat, cfg);
  int bit_errors = pac::hamming_distance(td.message, d_hat);
  std::printf("message=%s\n", pac::to_string(td.message).c_str());
  std::printf("decoded=%s\n", pac::to_string(d_hat).c_str());
  std::printf("frame_error=%d bit_errors=%d attempts=%d sigma=%.6g\n",
              bit_errors != 0 ? 1 : 0, bit_errors, attempts, td.sigma);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PAC code Monte Carlo simulator"};
  app.require_subcommand(1);

  CommonArgs sweep_args;
  std::string snr_grid = "1.0:0.25:3.0";
  long long fixed_trials = 0, min_errors = 200, max_trials = 10000000;
  int threads = 0;
  std::string out_path = "results.csv";
  bool gnuplot = false;
  auto* sweep = app.add_subcommand("sweep", "FER/BER sweep over an SNR grid");
  add_common(sweep, sweep_args);
  sweep->add_option("--snr", snr_grid, "SNR grid: lo:step:hi or comma list (dB)");
  sweep->add_option("--snr-list", snr_grid, "comma-separated SNR list (dB)");
  sweep->add_option("--trials", fixed_trials, "run exactly this many trials per point");
  sweep->add_option("--min-errors", min_errors, "stop a point after this many frame errors");
  sweep->add_option("--max-trials", max_trials, "hard cap on trials per point");
  sweep->add_option("--threads", threads, "worker threads (0 = hardware)");
  sweep->add_option("--out", out_path, "output CSV path");
  sweep->add_flag("--gnuplot", gnuplot, "emit a gnuplot script next to the CSV");

  CommonArgs trial_args;
  double trial_snr = 2.0;
  std::uint64_t trial_index = 0;
  bool trace = false;
  auto* trial = app.add_subcommand("trial", "run one trial, optionally tracing the decode");
  add_common(trial, trial_args);
  trial->add_option("--snr", trial_snr, "SNR (dB)");
  trial->add_option("--trial-index", trial_index, "trial index within the seed's stream");
  trial->add_flag("--trace", trace, "print per-bit survivor metrics");

  CLI11_PARSE(app, argc, argv);

  try {
    if (*sweep)
      return run_sweep_cmd(sweep_args, snr_grid, fixed_trials, min_errors, max_trials,
                           threads, out_path, gnuplot);
    if (*trial) return run_trial_cmd(trial_args, trial_snr, trial_index, trace);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
