#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "fluct/impact.hpp"

namespace fluct {

// Batch-run configuration, loaded from an INI file (see README for the
// schema). Paths are resolved against the config file's directory.
struct MfParams {
  int poly_degree = 2;
  double q_min = -4.0, q_max = 4.0, q_step = 0.5;
  int s_min = 10, s_max = 0;  // 0 = n/4
  int scales_per_decade = 20;
  int fit_lo = 0, fit_hi = 0;  // 0 = automatic window
  std::string signal = "returns";  // returns | abs_returns | volume
};

struct RhoParams {
  int poly_degree = 2;
  std::vector<double> q_list{1.0, 2.0, 4.0};
  int s_min = 10, s_max = 0;
  int scales_per_decade = 20;
};

struct AcfParams {
  std::size_t max_lag = 0;  // 0 = n / 10
  std::string signal = "abs_returns";
};

struct CdfParams {
  double tail_fraction = 0.01;
  std::string signal = "abs_returns";
};

struct MstParams {
  double q = 1.0;
  int s = 10;
  int poly_degree = 2;
};

struct IntermarketParams {
  std::vector<std::string> traditionals;  // bar CSVs under data_dir
  double q = 1.0;
  int s = 10;
  int poly_degree = 2;
  double coverage_floor = 0.05;
};

struct RunConfig {
  std::string config_path;
  std::string data_dir;
  std::string output_dir = "out";
  std::vector<std::string> analyses;
  unsigned workers = 1;
  std::uint64_t seed = 42;
  std::string bar_format = "standard";  // standard | binance
  std::vector<std::string> assets;      // bar CSVs under data_dir
  std::vector<std::string> series;      // single-column CSVs under data_dir
  std::string session_file;             // optional
  int dt_minutes = 1;

  MfParams mf;
  RhoParams rho;
  AcfParams acf;
  CdfParams cdf;
  ImpactConfig impact;
  MstParams mst;
  IntermarketParams intermarket;
};

RunConfig load_run_config(const std::string& path);

// Throws std::invalid_argument on unknown analyses, empty inputs or missing
// referenced paths -- before any computation starts.
void validate(const RunConfig& cfg);

struct JobOutcome {
  std::string analysis;
  std::string target;  // asset/series label or "*" for whole-set jobs
  bool ok = true;
  std::string error;
  std::vector<std::string> outputs;  // paths relative to output_dir
};

struct RunResult {
  std::vector<JobOutcome> jobs;
  std::string manifest_path;
  bool all_ok = true;
};

// Executes every (analysis x target) job, isolating per-job failures, and
// writes output_dir/manifest.json listing inputs (with content hashes),
// effective parameters and outcomes. Identical config + data produce
// byte-identical outputs regardless of worker count; the manifest differs
// only in its timestamp field across runs.
RunResult run(const RunConfig& cfg);

// 64-bit FNV-1a of a file's bytes, as a 16-digit hex string.
std::string file_hash_hex(const std::string& path);

}  // namespace fluct
