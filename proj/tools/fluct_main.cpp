// Batch front end: ingestion -> analyses -> plot-ready files.
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <map>
#include <stdexcept>
#include <string>
#include <tuple>
#include <vector>

#include "CLI11.hpp"

#include "fluct/acf.hpp"
#include "fluct/bars.hpp"
#include "fluct/cdf.hpp"
#include "fluct/csv.hpp"
#include "fluct/detrend.hpp"
#include "fluct/export.hpp"
#include "fluct/fluctuation.hpp"
#include "fluct/impact.hpp"
#include "fluct/network.hpp"
#include "fluct/runner.hpp"
#include "fluct/series.hpp"
#include "fluct/session.hpp"
#include "fluct/synth.hpp"

namespace fs = std::filesystem;
using namespace fluct;

namespace {

int g_exit = 0;

// Relative inputs resolve against FLUCT_DATA_DIR when set (and the path does
// not exist as given).
std::string data_path(const std::string& p) {
  if (p.empty() || fs::path(p).is_absolute() || fs::exists(p)) return p;
  const char* base = std::getenv("FLUCT_DATA_DIR");
  if (base && *base) {
    const std::string joined = (fs::path(base) / p).string();
    if (fs::exists(joined)) return joined;
  }
  return p;
}

std::string stem_of(const std::string& p) { return fs::path(p).stem().string(); }

BarSeries load_bars(const std::string& path, const std::string& format) {
  const BarFormat fmt = format == "binance" ? BarFormat::binance_kline() : BarFormat::standard();
  return parse_bars(data_path(path), fmt, stem_of(path));
}

std::vector<double> load_series(const std::string& path) {
  return read_value_column(data_path(path));
}

void save(const std::string& out_dir, const std::string& name, const std::string& content) {
  fs::create_directories(out_dir);
  const std::string path = (fs::path(out_dir) / name).string();
  write_text_file(path, content);
  std::printf("wrote %s\n", path.c_str());
}

std::vector<double> abs_normalized_returns(const BarSeries& bars, int dt_min) {
  ReturnSeries r = log_returns(bars, static_cast<int64_t>(dt_min) * 60000);
  normalize(r);
  for (double& v : r.normalized) v = std::fabs(v);
  return r.normalized;
}

std::vector<double> sigma_volume(const BarSeries& bars, int dt_min) {
  VolumeSeries v = aggregate_volume(bars, static_cast<int64_t>(dt_min) * 60000);
  normalize(v);
  std::vector<double> out(v.values.size());
  for (std::size_t i = 0; i < v.values.size(); ++i) out[i] = v.values[i] / v.stdev;
  return out;
}

std::vector<double> pick_signal(const BarSeries& bars, const std::string& signal, int dt_min) {
  if (signal == "returns") {
    ReturnSeries r = log_returns(bars, static_cast<int64_t>(dt_min) * 60000);
    normalize(r);
    return r.normalized;
  }
  if (signal == "abs_returns") return abs_normalized_returns(bars, dt_min);
  if (signal == "volume") return sigma_volume(bars, dt_min);
  throw std::invalid_argument("unknown signal '" + signal + "'");
}

DetrendConfig make_grid(int degree, int s_min, int s_max, int per_decade,
                        const std::vector<double>& q_grid, std::size_t n) {
  DetrendConfig dc;
  dc.poly_degree = degree;
  dc.scales = log_scale_grid(static_cast<std::size_t>(s_min),
                             s_max > 0 ? static_cast<std::size_t>(s_max) : n / 4, per_decade);
  dc.q_grid = q_grid;
  validate(dc, n);
  return dc;
}

std::vector<double> q_span(double q_min, double q_max, double q_step) {
  std::vector<double> qs;
  for (double q = q_min; q <= q_max + 1e-9; q += q_step)
    qs.push_back(std::fabs(q) < 1e-12 ? 0.0 : q);
  return qs;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"statistical toolkit for high-frequency price/volume series"};
  app.require_subcommand(1);

  // ---- shared option storage -------------------------------------------
  std::string bars_file, series_file, series_b_file, out_dir = ".", format = "standard";
  std::string signal = "returns", session_file;
  int dt_min = 1, degree = 2, s_min = 10, s_max = 0, per_decade = 20;
  double q_min = -4.0, q_max = 4.0, q_step = 0.5;
  int fit_lo = 0, fit_hi = 0;

  // stats ------------------------------------------------------------------
  auto* stats_cmd = app.add_subcommand("stats", "per-asset activity statistics");
  std::vector<std::string> stats_bars;
  stats_cmd->add_option("--bars", stats_bars, "bar CSV files")->required();
  stats_cmd->add_option("--format", format, "bar format: standard|binance");
  stats_cmd->add_option("--dt-min", dt_min, "return sampling step, minutes");
  stats_cmd->callback([&] {
    std::printf("label,group,mean_intertrade_time_s,mean_volume_per_min,zero_return_fraction\n");
    for (const std::string& f : stats_bars) {
      const BarSeries bars = load_bars(f, format);
      const ReturnSeries r = log_returns(bars, static_cast<int64_t>(dt_min) * 60000);
      const AssetStats st = asset_stats(bars, r);
      std::printf("%s,%s,%s,%s,%s\n", st.label.c_str(), group_name(st.group),
                  format_double(st.mean_intertrade_time_s).c_str(),
                  format_double(st.mean_volume_per_min).c_str(),
                  format_double(st.zero_return_fraction).c_str());
    }
  });

  // cdf ----------------------------------------------------------------------
  auto* cdf_cmd = app.add_subcommand("cdf", "survival function and tail-exponent fit");
  double tail_fraction = 0.01;
  cdf_cmd->add_option("--bars", bars_file, "bar CSV input");
  cdf_cmd->add_option("--series", series_file, "single-column series input");
  cdf_cmd->add_option("--signal", signal, "bars signal: returns|abs_returns|volume");
  cdf_cmd->add_option("--dt-min", dt_min, "return sampling step, minutes");
  cdf_cmd->add_option("--tail-fraction", tail_fraction, "fraction for the tail fit");
  cdf_cmd->add_option("--out-dir", out_dir, "output directory");
  cdf_cmd->add_option("--format", format, "bar format");
  cdf_cmd->callback([&] {
    if (bars_file.empty() == series_file.empty())
      throw std::invalid_argument("cdf: need exactly one of --bars / --series");
    std::string label;
    std::vector<double> x;
    if (!bars_file.empty()) {
      const BarSeries bars = load_bars(bars_file, format);
      label = bars.label;
      if (signal == "returns") signal = "abs_returns";  // CDF needs a positive signal
      x = pick_signal(bars, signal, dt_min);
    } else {
      label = stem_of(series_file);
      x = load_series(series_file);
    }
    const EmpiricalCdf cdf = empirical_cdf(x);
    save(out_dir, "cdf_" + label + ".csv", csv_of_cdf(cdf));
    save(out_dir, "tail_" + label + ".json", json_of_tail(label, cdf.n, tail_fraction, cdf));
  });

  // acf ----------------------------------------------------------------------
  auto* acf_cmd = app.add_subcommand("acf", "autocorrelation on a log lag grid");
  std::size_t max_lag = 0;
  acf_cmd->add_option("--bars", bars_file, "bar CSV input");
  acf_cmd->add_option("--series", series_file, "single-column series input");
  acf_cmd->add_option("--signal", signal, "bars signal: returns|abs_returns|volume");
  acf_cmd->add_option("--dt-min", dt_min, "return sampling step, minutes");
  acf_cmd->add_option("--max-lag", max_lag, "largest lag (0 = n/10)");
  acf_cmd->add_option("--out-dir", out_dir, "output directory");
  acf_cmd->add_option("--format", format, "bar format");
  acf_cmd->callback([&] {
    if (bars_file.empty() == series_file.empty())
      throw std::invalid_argument("acf: need exactly one of --bars / --series");
    std::string label;
    std::vector<double> x;
    if (!bars_file.empty()) {
      const BarSeries bars = load_bars(bars_file, format);
      label = bars.label;
      x = pick_signal(bars, signal == "returns" ? "abs_returns" : signal, dt_min);
    } else {
      label = stem_of(series_file);
      x = load_series(series_file);
    }
    const std::size_t lag = max_lag > 0 ? max_lag : std::max<std::size_t>(1, x.size() / 10);
    const AcfResult acf = autocorrelation(x, lag);
    const AcfRangeScan scan = detect_power_law_ranges(acf);
    save(out_dir, "acf_" + label + ".csv", csv_of_acf(acf));
    save(out_dir, "acf_ranges_" + label + ".json", json_of_acf_scan(label, acf, scan));
    for (const PowerLawRange& r : scan.ranges)
      std::printf("range tau %g..%g slope %.3f r2 %.4f\n", r.tau_lo, r.tau_hi, r.slope, r.r2);
  });

  // mf -------------------------------------------------------------------
  auto* mf_cmd = app.add_subcommand("mf", "fluctuation surface and singularity spectrum");
  mf_cmd->add_option("--bars", bars_file, "bar CSV input");
  mf_cmd->add_option("--series", series_file, "single-column series input");
  mf_cmd->add_option("--signal", signal, "bars signal: returns|abs_returns|volume");
  mf_cmd->add_option("--dt-min", dt_min, "return sampling step, minutes");
  mf_cmd->add_option("--degree", degree, "detrending polynomial degree");
  mf_cmd->add_option("--q-min", q_min, "smallest q");
  mf_cmd->add_option("--q-max", q_max, "largest q");
  mf_cmd->add_option("--q-step", q_step, "q grid step");
  mf_cmd->add_option("--s-min", s_min, "smallest scale");
  mf_cmd->add_option("--s-max", s_max, "largest scale (0 = n/4)");
  mf_cmd->add_option("--per-decade", per_decade, "scales per decade");
  mf_cmd->add_option("--fit-lo", fit_lo, "fit range lower scale (0 = auto)");
  mf_cmd->add_option("--fit-hi", fit_hi, "fit range upper scale (0 = auto)");
  mf_cmd->add_option("--out-dir", out_dir, "output directory");
  mf_cmd->add_option("--format", format, "bar format");
  mf_cmd->callback([&] {
    if (bars_file.empty() == series_file.empty())
      throw std::invalid_argument("mf: need exactly one of --bars / --series");
    std::string label;
    std::vector<double> x;
    if (!bars_file.empty()) {
      const BarSeries bars = load_bars(bars_file, format);
      label = bars.label;
      x = pick_signal(bars, signal, dt_min);
    } else {
      label = stem_of(series_file);
      x = load_series(series_file);
    }
    const DetrendConfig dc =
        make_grid(degree, s_min, s_max, per_decade, q_span(q_min, q_max, q_step), x.size());
    const FluctuationSurface surf = fluctuation_surface(x, dc);
    save(out_dir, "mf_surface_" + label + ".csv", csv_of_surface(surf));
    int lo = fit_lo, hi = fit_hi;
    if (lo <= 0 || hi <= 0) std::tie(lo, hi) = auto_fit_range(surf);
    const SpectrumResult spec = hurst_spectrum(surf, lo, hi);
    save(out_dir, "mf_spectrum_" + label + ".json", json_of_spectrum(label, degree, spec));
    std::printf("h(2) %.4f width %.4f asymmetry %.4f fit [%d, %d]\n", spec.h2, spec.width,
                spec.asymmetry, spec.fit_lo, spec.fit_hi);
  });

  // rho ------------------------------------------------------------------
  auto* rho_cmd = app.add_subcommand("rho", "detrended cross-correlation coefficient grid");
  std::vector<double> q_list{1.0, 2.0, 4.0};
  rho_cmd->add_option("--bars", bars_file, "bar CSV: pairs |returns| with volume");
  rho_cmd->add_option("--series-a", series_file, "first plain series");
  rho_cmd->add_option("--series-b", series_b_file, "second plain series");
  rho_cmd->add_option("--q", q_list, "q values");
  rho_cmd->add_option("--dt-min", dt_min, "return sampling step, minutes");
  rho_cmd->add_option("--degree", degree, "detrending polynomial degree");
  rho_cmd->add_option("--s-min", s_min, "smallest scale");
  rho_cmd->add_option("--s-max", s_max, "largest scale (0 = n/4)");
  rho_cmd->add_option("--per-decade", per_decade, "scales per decade");
  rho_cmd->add_option("--out-dir", out_dir, "output directory");
  rho_cmd->add_option("--format", format, "bar format");
  rho_cmd->callback([&] {
    std::string label;
    std::vector<double> a, b;
    if (!bars_file.empty()) {
      const BarSeries bars = load_bars(bars_file, format);
      label = bars.label;
      a = abs_normalized_returns(bars, dt_min);
      b = sigma_volume(bars, dt_min);
    } else if (!series_file.empty() && !series_b_file.empty()) {
      label = stem_of(series_file) + "_" + stem_of(series_b_file);
      a = load_series(series_file);
      b = load_series(series_b_file);
    } else {
      throw std::invalid_argument("rho: need --bars or both --series-a and --series-b");
    }
    const DetrendConfig dc = make_grid(degree, s_min, s_max, per_decade, q_list, a.size());
    save(out_dir, "rho_" + label + ".csv", csv_of_rho(rho_q(a, b, dc)));
  });

  // impact -----------------------------------------------------------------
  auto* impact_cmd = app.add_subcommand("impact", "conditional impact curves E[|r|^k | v]");
  ImpactConfig impact_cfg;
  impact_cmd->add_option("--bars", bars_file, "bar CSV input")->required();
  impact_cmd->add_option("--kappas", impact_cfg.kappa_grid, "kappa grid");
  impact_cmd->add_option("--top-fraction", impact_cfg.top_fraction, "kept fraction per cell");
  impact_cmd->add_option("--min-bin", impact_cfg.min_bin_count, "occupancy gate");
  impact_cmd->add_option("--cells-per-decade", impact_cfg.cells_per_decade, "cell resolution");
  impact_cmd->add_option("--dt-min", impact_cfg.dt_minutes, "sampling steps, minutes");
  impact_cmd->add_option("--out-dir", out_dir, "output directory");
  impact_cmd->add_option("--format", format, "bar format");
  impact_cmd->callback([&] {
    const BarSeries bars = load_bars(bars_file, format);
    for (int dt : impact_cfg.dt_minutes) {
      const std::vector<double> r = abs_normalized_returns(bars, dt);
      const std::vector<double> v = sigma_volume(bars, dt);
      const std::vector<ImpactCurve> curves = conditional_impact(r, v, impact_cfg);
      const ModelSelectionReport report = model_selection(curves);
      const std::string tag = bars.label + "_dt" + std::to_string(dt);
      save(out_dir, "impact_" + tag + ".csv", csv_of_impact(curves));
      save(out_dir, "impact_selection_" + tag + ".json",
           json_of_selection(bars.label, dt, report));
      for (const KappaRank& k : report.ranking)
        std::printf("dt %d kappa %g linearity_r2 %.4f%s\n", dt, k.kappa, k.linearity_r2,
                    k.rejected ? " (rejected)" : "");
    }
  });

  // mst ------------------------------------------------------------------
  auto* mst_cmd = app.add_subcommand("mst", "correlation matrix and minimal spanning tree");
  std::vector<std::string> mst_bars;
  double q_single = 1.0;
  int s_single = 10;
  mst_cmd->add_option("--bars", mst_bars, "bar CSV files (>= 2)")->required();
  mst_cmd->add_option("--q", q_single, "moment order");
  mst_cmd->add_option("--s", s_single, "scale, in dt units");
  mst_cmd->add_option("--degree", degree, "detrending polynomial degree");
  mst_cmd->add_option("--dt-min", dt_min, "return sampling step, minutes");
  mst_cmd->add_option("--session", session_file, "trading session spec");
  mst_cmd->add_option("--out-dir", out_dir, "output directory");
  mst_cmd->add_option("--format", format, "bar format");
  mst_cmd->callback([&] {
    if (mst_bars.size() < 2) throw std::invalid_argument("mst: need >= 2 assets");
    const SessionSpec session = session_file.empty()
                                    ? SessionSpec::all_week()
                                    : SessionSpec::parse_file(data_path(session_file));
    std::vector<BarSeries> all;
    for (const std::string& f : mst_bars) all.push_back(load_bars(f, format));
    // Common in-session grid, then per-asset returns on it.
    std::map<int64_t, std::size_t> hits;
    for (const BarSeries& bars : all)
      for (const Bar& b : bars.bars)
        if (session.contains(b.timestamp_ms)) ++hits[b.timestamp_ms];
    std::vector<int64_t> grid;
    for (const auto& [ts, n] : hits)
      if (n == all.size()) grid.push_back(ts);
    if (grid.size() < 2) throw std::runtime_error("mst: empty common grid");
    std::vector<std::vector<double>> rets(all.size());
    std::vector<std::string> labels;
    for (std::size_t i = 0; i < all.size(); ++i) {
      std::map<int64_t, double> close;
      for (const Bar& b : all[i].bars) close[b.timestamp_ms] = b.close;
      for (std::size_t k = 1; k < grid.size(); ++k)
        rets[i].push_back(std::log(close[grid[k]] / close[grid[k - 1]]));
      labels.push_back(all[i].label);
    }
    const CorrelationMatrixQ m = correlation_matrix(rets, labels, q_single, s_single, degree);
    MstGraph tree = minimal_spanning_tree(to_distances(m));
    for (std::size_t i = 0; i < all.size(); ++i) {
      const ReturnSeries r = log_returns(all[i], static_cast<int64_t>(dt_min) * 60000);
      const AssetStats st = asset_stats(all[i], r);
      tree.nodes[i].group = group_name(st.group);
      tree.nodes[i].mean_volume = st.mean_volume_per_min;
    }
    save(out_dir, "corr_matrix.csv", matrix_csv(m));
    save(out_dir, "mst.json", mst_json(tree));
    save(out_dir, "mst.gv", mst_graphviz(tree));
    for (const HubEntry& h : hub_report(tree))
      std::printf("%s degree %zu\n", h.label.c_str(), h.degree);
  });

  // intermarket ---------------------------------------------------------
  auto* inter_cmd = app.add_subcommand("intermarket", "cross-market coefficient block");
  std::vector<std::string> crypto_files, trad_files;
  double coverage_floor = 0.05;
  inter_cmd->add_option("--crypto", crypto_files, "row assets")->required();
  inter_cmd->add_option("--traditional", trad_files, "column assets")->required();
  inter_cmd->add_option("--q", q_single, "moment order");
  inter_cmd->add_option("--s", s_single, "scale, in aligned-bar units");
  inter_cmd->add_option("--degree", degree, "detrending polynomial degree");
  inter_cmd->add_option("--session", session_file, "trading session spec");
  inter_cmd->add_option("--coverage-floor", coverage_floor, "minimal alignment coverage");
  inter_cmd->add_option("--out-dir", out_dir, "output directory");
  inter_cmd->add_option("--format", format, "bar format");
  inter_cmd->callback([&] {
    const SessionSpec session = session_file.empty()
                                    ? SessionSpec::all_week()
                                    : SessionSpec::parse_file(data_path(session_file));
    std::vector<BarSeries> rows, cols;
    for (const std::string& f : crypto_files) rows.push_back(load_bars(f, format));
    for (const std::string& f : trad_files) cols.push_back(load_bars(f, format));
    const IntermarketBlock block =
        intermarket_matrix(rows, cols, q_single, s_single, session, degree, coverage_floor);
    save(out_dir, "intermarket.csv", intermarket_csv(block));
    save(out_dir, "intermarket_coverage.csv", intermarket_coverage_csv(block));
  });

  // synth ------------------------------------------------------------------
  auto* synth_cmd = app.add_subcommand("synth", "reference series generators");
  GeneratorSpec gen;
  std::string kind = "gaussian_white", out_file = "synth.csv";
  synth_cmd->add_option("--kind", kind,
                        "gaussian_white|fgn|binomial_cascade|pareto_tail|ar1|power_coupled")
      ->required();
  synth_cmd->add_option("--length", gen.length, "sample count");
  synth_cmd->add_option("--seed", gen.seed, "generator seed");
  synth_cmd->add_option("--hurst", gen.hurst, "fgn Hurst exponent");
  synth_cmd->add_option("--p", gen.p, "cascade multiplier, in (0.5, 1)");
  synth_cmd->add_option("--levels", gen.levels, "cascade levels (length = 2^levels)");
  synth_cmd->add_option("--gamma", gen.gamma, "tail exponent");
  synth_cmd->add_option("--phi", gen.phi, "ar1 coefficient");
  synth_cmd->add_option("--alpha", gen.alpha_true, "coupling exponent");
  synth_cmd->add_option("--noise", gen.noise, "coupling noise amplitude");
  synth_cmd->add_option("--out", out_file, "output CSV");
  synth_cmd->callback([&] {
    const GeneratorSpec spec = GeneratorSpec::parse_kind(kind, gen);
    const Generated g = generate(spec);
    std::string csv;
    if (g.secondary.empty()) {
      for (double v : g.values) csv += format_double(v) + "\n";
    } else {
      csv = "volume,abs_return\n";
      for (std::size_t i = 0; i < g.values.size(); ++i)
        csv += format_double(g.values[i]) + "," + format_double(g.secondary[i]) + "\n";
    }
    write_text_file(out_file, csv);
    std::printf("wrote %s (%zu values)\n", out_file.c_str(), g.values.size());
  });

  // run ---------------------------------------------------------------------
  auto* run_cmd = app.add_subcommand("run", "execute a batch configuration");
  std::string config_file;
  int workers_override = 0;
  run_cmd->add_option("config", config_file, "INI run configuration")->required();
  run_cmd->add_option("--workers", workers_override, "override [run] workers");
  run_cmd->callback([&] {
    RunConfig cfg = load_run_config(config_file);
    if (workers_override > 0) cfg.workers = static_cast<unsigned>(workers_override);
    const RunResult result = run(cfg);
    for (const JobOutcome& j : result.jobs)
      std::printf("%-12s %-16s %s%s%s\n", j.analysis.c_str(), j.target.c_str(),
                  j.ok ? "ok" : "error", j.ok ? "" : ": ", j.ok ? "" : j.error.c_str());
    std::printf("manifest: %s\n", result.manifest_path.c_str());
    if (!result.all_ok) g_exit = 1;
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e);
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return g_exit;
}
