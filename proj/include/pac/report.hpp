#pragma once

#include <fstream>
#include <iomanip>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "pac/codec_core.hpp"
#include "pac/sim_harness.hpp"

#include <json.hpp>

namespace pac {

inline constexpr const char* kVersion = "0.1.0";

inline std::string format_double(double v, int precision = 9) {
  std::ostringstream os;
  os << std::setprecision(precision) << v;
  return os.str();
}

inline std::string csv_header() {
  return "snr_db,trials,frame_errors,bit_errors,fer,ber,ci_lo,ci_hi,mean_attempts,wall_seconds";
}

inline std::string csv_line(const SweepRow& r) {
  std::ostringstream os;
  os << format_double(r.snr_db) << ',' << r.trials << ',' << r.frame_errors << ','
     << r.bit_errors << ',' << format_double(r.fer) << ',' << format_double(r.ber) << ','
     << format_double(r.ci_lo) << ',' << format_double(r.ci_hi) << ','
     << format_double(r.mean_attempts) << ',' << format_double(r.wall_seconds, 4);
  return os.str();
}

inline void write_csv(const std::string& path, const std::vector<SweepRow>& rows) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << csv_header() << '\n';
  for (const auto& r : rows) out << csv_line(r) << '\n';
}

struct RunInfo {
  CodeConfig cfg;
  DecoderKind decoder = DecoderKind::scl;
  std::vector<double> snrs;
  StopRule stop;
  std::uint64_t master_seed = 0;
  int threads = 1;
  bool noiseless = false;
  std::string csv_path;
};

inline std::string manifest_path_for(const std::string& csv_path) {
  return csv_path + ".manifest.json";
}

inline std::string gnuplot_path_for(const std::string& csv_path) {
  return csv_path + ".plt";
}

inline void write_manifest(const std::string& path, const RunInfo& info) {
  nlohmann::json j;
  j["version"] = kVersion;
  j["tool"] = "pac-sim";
  j["code"]["n"] = info.cfg.n;
  j["code"]["block_len"] = info.cfg.block_len;
  j["code"]["msg_len"] = info.cfg.msg_len;
  j["code"]["info_set"] = info.cfg.info_set;
  j["code"]["taps"] = to_string(info.cfg.taps);
  j["decoder"]["kind"] = decoder_name(info.decoder);
  j["decoder"]["list_size"] = info.cfg.list_size;
  j["decoder"]["alpha"] = info.cfg.alpha;
  j["decoder"]["max_flips"] = info.cfg.max_flips;
  j["decoder"]["llr_mode"] = info.cfg.llr_mode == LlrMode::exact ? "exact" : "min_sum";
  j["channel"]["snr_db"] = info.snrs;
  j["channel"]["noiseless"] = info.noiseless;
  if (info.stop.fixed_trials > 0) {
    j["stop"]["fixed_trials"] = info.stop.fixed_trials;
  } else {
    j["stop"]["min_frame_errors"] = info.stop.min_frame_errors;
    j["stop"]["max_trials"] = info.stop.max_trials;
  }
  j["seed"] = info.master_seed;
  j["threads"] = info.threads;
  j["csv"] = info.csv_path;
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << j.dump(2) << '\n';
}

inline void write_gnuplot(const std::string& path, const RunInfo& info) {
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << "set datafile separator ','\n"
      << "set logscale y\n"
      << "set grid\n"
      << "set xlabel 'Eb/N0 (dB)'\n"
      << "set ylabel 'error rate'\n"
      << "set key bottom left\n"
      << "set title '" << decoder_name(info.decoder) << " L=" << info.cfg.list_size << " ("
      << info.cfg.block_len << ',' << info.cfg.msg_len << ")'\n"
      << "plot '" << info.csv_path << "' skip 1 using 1:5 with linespoints title 'FER', \\\n"
      << "     '" << info.csv_path << "' skip 1 using 1:6 with linespoints title 'BER', \\\n"
      << "     '" << info.csv_path
      << "' skip 1 using 1:5:7:8 with yerrorbars notitle\n";
}

}  // namespace pac
