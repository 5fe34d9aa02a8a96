#include "fluct/runner.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ctime>
#include <filesystem>
#include <fstream>
#include <functional>
#include <map>
#include <set>
#include <stdexcept>

#include "json.hpp"

#include "fluct/acf.hpp"
#include "fluct/bars.hpp"
#include "fluct/cdf.hpp"
#include "fluct/config.hpp"
#include "fluct/csv.hpp"
#include "fluct/detrend.hpp"
#include "fluct/export.hpp"
#include "fluct/fluctuation.hpp"
#include "fluct/network.hpp"
#include "fluct/parallel.hpp"
#include "fluct/series.hpp"
#include "fluct/session.hpp"

namespace fluct {

namespace fs = std::filesystem;
using ordered_json = nlohmann::ordered_json;

namespace {

const std::set<std::string> kAnalyses = {"stats", "cdf",    "acf", "mf",
                                         "rho",   "impact", "mst", "intermarket"};

std::string resolve(const std::string& base_file, const std::string& path) {
  if (path.empty() || fs::path(path).is_absolute()) return path;
  return (fs::path(base_file).parent_path() / path).string();
}

std::string stem(const std::string& filename) { return fs::path(filename).stem().string(); }

std::string timestamp_utc() {
  const std::time_t t = std::time(nullptr);
  std::tm tm{};
  gmtime_r(&t, &tm);
  char buf[32];
  std::strftime(buf, sizeof buf, "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

}  // namespace

std::string file_hash_hex(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot open for hashing: " + path);
  std::uint64_t h = 14695981039346656037ULL;
  char buf[65536];
  while (in.read(buf, sizeof buf) || in.gcount() > 0) {
    const std::streamsize got = in.gcount();
    for (std::streamsize i = 0; i < got; ++i) {
      h ^= static_cast<unsigned char>(buf[i]);
      h *= 1099511628211ULL;
    }
    if (!in) break;
  }
  char out[17];
  std::snprintf(out, sizeof out, "%016llx", static_cast<unsigned long long>(h));
  return out;
}

RunConfig load_run_config(const std::string& path) {
  const IniFile ini = IniFile::parse_file(path);
  RunConfig cfg;
  cfg.config_path = path;
  cfg.data_dir = resolve(path, ini.get("run", "data_dir", "."));
  cfg.output_dir = resolve(path, ini.get("run", "output_dir", "out"));
  cfg.analyses = ini.get_list("run", "analyses");
  cfg.workers = static_cast<unsigned>(std::max<long long>(1, ini.get_int("run", "workers", 1)));
  cfg.seed = static_cast<std::uint64_t>(ini.get_int("run", "seed", 42));
  cfg.bar_format = ini.get("run", "bar_format", "standard");
  cfg.assets = ini.get_list("run", "assets");
  cfg.series = ini.get_list("run", "series");
  cfg.session_file = resolve(path, ini.get("run", "session_file", ""));
  cfg.dt_minutes = static_cast<int>(ini.get_int("run", "dt_minutes", 1));

  cfg.mf.poly_degree = static_cast<int>(ini.get_int("mf", "poly_degree", 2));
  cfg.mf.q_min = ini.get_double("mf", "q_min", -4.0);
  cfg.mf.q_max = ini.get_double("mf", "q_max", 4.0);
  cfg.mf.q_step = ini.get_double("mf", "q_step", 0.5);
  cfg.mf.s_min = static_cast<int>(ini.get_int("mf", "s_min", 10));
  cfg.mf.s_max = static_cast<int>(ini.get_int("mf", "s_max", 0));
  cfg.mf.scales_per_decade = static_cast<int>(ini.get_int("mf", "scales_per_decade", 20));
  cfg.mf.fit_lo = static_cast<int>(ini.get_int("mf", "fit_lo", 0));
  cfg.mf.fit_hi = static_cast<int>(ini.get_int("mf", "fit_hi", 0));
  cfg.mf.signal = ini.get("mf", "signal", "returns");

  cfg.rho.poly_degree = static_cast<int>(ini.get_int("rho", "poly_degree", 2));
  if (ini.has("rho", "q_list")) cfg.rho.q_list = ini.get_double_list("rho", "q_list");
  cfg.rho.s_min = static_cast<int>(ini.get_int("rho", "s_min", 10));
  cfg.rho.s_max = static_cast<int>(ini.get_int("rho", "s_max", 0));
  cfg.rho.scales_per_decade = static_cast<int>(ini.get_int("rho", "scales_per_decade", 20));

  cfg.acf.max_lag = static_cast<std::size_t>(ini.get_int("acf", "max_lag", 0));
  cfg.acf.signal = ini.get("acf", "signal", "abs_returns");

  cfg.cdf.tail_fraction = ini.get_double("cdf", "tail_fraction", 0.01);
  cfg.cdf.signal = ini.get("cdf", "signal", "abs_returns");

  if (ini.has("impact", "kappas")) cfg.impact.kappa_grid = ini.get_double_list("impact", "kappas");
  cfg.impact.top_fraction = ini.get_double("impact", "top_fraction", 0.1);
  cfg.impact.cells_per_decade = static_cast<int>(ini.get_int("impact", "cells_per_decade", 12));
  cfg.impact.min_bin_count =
      static_cast<std::size_t>(ini.get_int("impact", "min_bin_count", 30));
  cfg.impact.fit_v_lo = ini.get_double("impact", "fit_v_lo", 0.0);
  cfg.impact.fit_v_hi = ini.get_double("impact", "fit_v_hi", 0.0);
  if (ini.has("impact", "dt_minutes")) {
    cfg.impact.dt_minutes.clear();
    for (double d : ini.get_double_list("impact", "dt_minutes"))
      cfg.impact.dt_minutes.push_back(static_cast<int>(d));
  }

  cfg.mst.q = ini.get_double("mst", "q", 1.0);
  cfg.mst.s = static_cast<int>(ini.get_int("mst", "s", 10));
  cfg.mst.poly_degree = static_cast<int>(ini.get_int("mst", "poly_degree", 2));

  cfg.intermarket.traditionals = ini.get_list("intermarket", "traditionals");
  cfg.intermarket.q = ini.get_double("intermarket", "q", 1.0);
  cfg.intermarket.s = static_cast<int>(ini.get_int("intermarket", "s", 10));
  cfg.intermarket.poly_degree = static_cast<int>(ini.get_int("intermarket", "poly_degree", 2));
  cfg.intermarket.coverage_floor = ini.get_double("intermarket", "coverage_floor", 0.05);
  return cfg;
}

void validate(const RunConfig& cfg) {
  if (cfg.analyses.empty()) throw std::invalid_argument("run config: analyses is empty");
  for (const std::string& a : cfg.analyses)
    if (!kAnalyses.count(a)) throw std::invalid_argument("run config: unknown analysis '" + a + "'");
  if (!fs::is_directory(cfg.data_dir))
    throw std::invalid_argument("run config: data_dir does not exist: " + cfg.data_dir);
  if (cfg.assets.empty() && cfg.series.empty())
    throw std::invalid_argument("run config: no assets or series listed");
  if (cfg.bar_format != "standard" && cfg.bar_format != "binance")
    throw std::invalid_argument("run config: unknown bar_format '" + cfg.bar_format + "'");
  if (cfg.dt_minutes < 1) throw std::invalid_argument("run config: dt_minutes must be >= 1");

  std::vector<std::string> files = cfg.assets;
  files.insert(files.end(), cfg.series.begin(), cfg.series.end());
  files.insert(files.end(), cfg.intermarket.traditionals.begin(),
               cfg.intermarket.traditionals.end());
  std::set<std::string> labels;
  for (const std::string& f : files) {
    const std::string full = (fs::path(cfg.data_dir) / f).string();
    if (!fs::exists(full)) throw std::invalid_argument("run config: missing input file: " + full);
    if (!labels.insert(stem(f)).second)
      throw std::invalid_argument("run config: duplicate input label: " + stem(f));
  }
  if (!cfg.session_file.empty() && !fs::exists(cfg.session_file))
    throw std::invalid_argument("run config: missing session file: " + cfg.session_file);

  const bool needs_bars =
      std::any_of(cfg.analyses.begin(), cfg.analyses.end(), [](const std::string& a) {
        return a == "stats" || a == "rho" || a == "impact" || a == "mst" || a == "intermarket";
      });
  if (needs_bars && cfg.assets.empty())
    throw std::invalid_argument("run config: requested analyses need bar assets");
  if (std::count(cfg.analyses.begin(), cfg.analyses.end(), "intermarket") &&
      cfg.intermarket.traditionals.empty())
    throw std::invalid_argument("run config: intermarket requires [intermarket] traditionals");
  validate(cfg.impact);
}

namespace {

struct LoadedAsset {
  std::string file;
  std::string path;
  BarSeries bars;
  std::string error;
};

struct LoadedSeries {
  std::string file;
  std::string path;
  std::string label;
  std::vector<double> values;
  std::string error;
};

LoadedAsset load_asset(const RunConfig& cfg, const std::string& file) {
  LoadedAsset a;
  a.file = file;
  a.path = (fs::path(cfg.data_dir) / file).string();
  try {
    const BarFormat fmt =
        cfg.bar_format == "binance" ? BarFormat::binance_kline() : BarFormat::standard();
    a.bars = parse_bars(a.path, fmt, stem(file));
  } catch (const std::exception& e) {
    a.error = e.what();
  }
  return a;
}

LoadedSeries load_series(const RunConfig& cfg, const std::string& file) {
  LoadedSeries s;
  s.file = file;
  s.path = (fs::path(cfg.data_dir) / file).string();
  s.label = stem(file);
  try {
    s.values = read_value_column(s.path);
  } catch (const std::exception& e) {
    s.error = e.what();
  }
  return s;
}

const BarSeries& need_bars(const LoadedAsset& a) {
  if (!a.error.empty()) throw std::runtime_error("input '" + a.file + "': " + a.error);
  return a.bars;
}

const std::vector<double>& need_series(const LoadedSeries& s) {
  if (!s.error.empty()) throw std::runtime_error("input '" + s.file + "': " + s.error);
  return s.values;
}

// Signal extraction shared by cdf / acf / mf jobs on bar inputs.
std::vector<double> bar_signal(const BarSeries& bars, const std::string& signal, int64_t dt_ms) {
  if (signal == "returns" || signal == "abs_returns") {
    ReturnSeries r = log_returns(bars, dt_ms);
    normalize(r);
    if (signal == "returns") return r.normalized;
    for (double& v : r.normalized) v = std::fabs(v);
    return r.normalized;
  }
  if (signal == "volume") {
    VolumeSeries v = aggregate_volume(bars, dt_ms);
    normalize(v);  // establishes stdev > 0
    std::vector<double> out(v.values.size());
    for (std::size_t i = 0; i < v.values.size(); ++i) out[i] = v.values[i] / v.stdev;
    return out;  // sigma units, kept nonnegative for log-axis plots
  }
  throw std::invalid_argument("unknown signal '" + signal + "'");
}

DetrendConfig grid_config(int poly_degree, int s_min, int s_max, int per_decade,
                          const std::vector<double>& q_grid, std::size_t n) {
  DetrendConfig dc;
  dc.poly_degree = poly_degree;
  const std::size_t hi = s_max > 0 ? static_cast<std::size_t>(s_max) : n / 4;
  dc.scales = log_scale_grid(static_cast<std::size_t>(s_min), hi, per_decade);
  dc.q_grid = q_grid;
  validate(dc, n);
  return dc;
}

std::vector<double> q_range(double q_min, double q_max, double q_step) {
  if (!(q_step > 0.0)) throw std::invalid_argument("mf: q_step must be positive");
  std::vector<double> qs;
  for (double q = q_min; q <= q_max + 1e-9; q += q_step) qs.push_back(std::fabs(q) < 1e-12 ? 0.0 : q);
  return qs;
}

}  // namespace

RunResult run(const RunConfig& cfg) {
  validate(cfg);
  fs::create_directories(cfg.output_dir);

  const SessionSpec session = cfg.session_file.empty() ? SessionSpec::all_week()
                                                       : SessionSpec::parse_file(cfg.session_file);

  std::vector<LoadedAsset> assets, traditionals;
  std::vector<LoadedSeries> plain;
  for (const std::string& f : cfg.assets) assets.push_back(load_asset(cfg, f));
  for (const std::string& f : cfg.intermarket.traditionals)
    traditionals.push_back(load_asset(cfg, f));
  for (const std::string& f : cfg.series) plain.push_back(load_series(cfg, f));

  const int64_t dt_ms = static_cast<int64_t>(cfg.dt_minutes) * 60000;

  struct Job {
    std::string analysis, target;
    std::function<void(JobOutcome&)> fn;
  };
  std::vector<Job> jobs;

  auto emit = [&](JobOutcome& out, const std::string& name, const std::string& content) {
    write_text_file((fs::path(cfg.output_dir) / name).string(), content);
    out.outputs.push_back(name);
  };

  for (const std::string& analysis : cfg.analyses) {
    if (analysis == "stats") {
      jobs.push_back({analysis, "*", [&, analysis](JobOutcome& out) {
        std::string csv =
            "label,group,mean_intertrade_time_s,mean_volume_per_min,zero_return_fraction,"
            "n_returns,dropped_gap_returns\n";
        for (const LoadedAsset& a : assets) {
          const BarSeries& bars = need_bars(a);
          const ReturnSeries r = log_returns(bars, dt_ms);
          const AssetStats st = asset_stats(bars, r);
          csv += st.label;
          csv += std::string(",") + group_name(st.group);
          csv += "," + format_double(st.mean_intertrade_time_s);
          csv += "," + format_double(st.mean_volume_per_min);
          csv += "," + format_double(st.zero_return_fraction);
          csv += "," + std::to_string(r.size());
          csv += "," + std::to_string(r.dropped_gap_returns) + "\n";
        }
        emit(out, "stats.csv", csv);
      }});
    } else if (analysis == "cdf") {
      auto cdf_one = [&](JobOutcome& out, const std::string& label,
                         const std::vector<double>& signal) {
        const EmpiricalCdf cdf = empirical_cdf(signal);
        emit(out, "cdf_" + label + ".csv", csv_of_cdf(cdf));
        emit(out, "tail_" + label + ".json", json_of_tail(label, cdf.n, cfg.cdf.tail_fraction, cdf));
      };
      for (const LoadedAsset& a : assets) {
        jobs.push_back({analysis, stem(a.file), [&, &a = a, cdf_one](JobOutcome& out) {
          const BarSeries& bars = need_bars(a);  // attribute load errors first
          cdf_one(out, bars.label, bar_signal(bars, cfg.cdf.signal, dt_ms));
        }});
      }
      for (const LoadedSeries& s : plain) {
        jobs.push_back({analysis, s.label, [&, &s = s, cdf_one](JobOutcome& out) {
          cdf_one(out, s.label, need_series(s));
        }});
      }
      if (!assets.empty()) {
        jobs.push_back({analysis, "groups", [&](JobOutcome& out) {
          std::vector<std::vector<EmpiricalCdf>> members(3);
          for (const LoadedAsset& a : assets) {
            const BarSeries& bars = need_bars(a);
            const ReturnSeries r = log_returns(bars, dt_ms);
            const AssetStats st = asset_stats(bars, r);
            members[static_cast<std::size_t>(st.group)].push_back(
                empirical_cdf(bar_signal(bars, cfg.cdf.signal, dt_ms)));
          }
          const char* names[3] = {"I", "II", "III"};
          for (std::size_t g = 0; g < 3; ++g) {
            if (members[g].empty()) continue;
            emit(out, std::string("cdf_group_") + names[g] + ".csv",
                 csv_of_cdf(group_average_cdf(members[g])));
          }
        }});
      }
    } else if (analysis == "acf") {
      auto acf_one = [&](JobOutcome& out, const std::string& label,
                         const std::vector<double>& signal) {
        const std::size_t max_lag =
            cfg.acf.max_lag > 0 ? cfg.acf.max_lag : std::max<std::size_t>(1, signal.size() / 10);
        const AcfResult acf = autocorrelation(signal, max_lag);
        emit(out, "acf_" + label + ".csv", csv_of_acf(acf));
        emit(out, "acf_ranges_" + label + ".json",
             json_of_acf_scan(label, acf, detect_power_law_ranges(acf)));
      };
      for (const LoadedAsset& a : assets) {
        jobs.push_back({analysis, stem(a.file), [&, &a = a, acf_one](JobOutcome& out) {
          const BarSeries& bars = need_bars(a);
          acf_one(out, bars.label, bar_signal(bars, cfg.acf.signal, dt_ms));
        }});
      }
      for (const LoadedSeries& s : plain) {
        jobs.push_back({analysis, s.label, [&, &s = s, acf_one](JobOutcome& out) {
          acf_one(out, s.label, need_series(s));
        }});
      }
    } else if (analysis == "mf") {
      auto mf_one = [&](JobOutcome& out, const std::string& label,
                        const std::vector<double>& signal) {
        const DetrendConfig dc =
            grid_config(cfg.mf.poly_degree, cfg.mf.s_min, cfg.mf.s_max, cfg.mf.scales_per_decade,
                        q_range(cfg.mf.q_min, cfg.mf.q_max, cfg.mf.q_step), signal.size());
        const FluctuationSurface surf = fluctuation_surface(signal, dc);
        emit(out, "mf_surface_" + label + ".csv", csv_of_surface(surf));
        int lo = cfg.mf.fit_lo, hi = cfg.mf.fit_hi;
        if (lo <= 0 || hi <= 0) std::tie(lo, hi) = auto_fit_range(surf);
        const SpectrumResult spec = hurst_spectrum(surf, lo, hi);
        emit(out, "mf_spectrum_" + label + ".json", json_of_spectrum(label, dc.poly_degree, spec));
      };
      for (const LoadedAsset& a : assets) {
        jobs.push_back({analysis, stem(a.file), [&, &a = a, mf_one](JobOutcome& out) {
          const BarSeries& bars = need_bars(a);
          mf_one(out, bars.label, bar_signal(bars, cfg.mf.signal, dt_ms));
        }});
      }
      for (const LoadedSeries& s : plain) {
        jobs.push_back({analysis, s.label, [&, &s = s, mf_one](JobOutcome& out) {
          mf_one(out, s.label, need_series(s));
        }});
      }
    } else if (analysis == "rho") {
      for (const LoadedAsset& a : assets) {
        jobs.push_back({analysis, stem(a.file), [&, &a = a](JobOutcome& out) {
          const BarSeries& bars = need_bars(a);
          std::vector<double> abs_r = bar_signal(bars, "abs_returns", dt_ms);
          std::vector<double> vol = bar_signal(bars, "volume", dt_ms);
          const DetrendConfig dc = grid_config(cfg.rho.poly_degree, cfg.rho.s_min, cfg.rho.s_max,
                                               cfg.rho.scales_per_decade, cfg.rho.q_list,
                                               abs_r.size());
          emit(out, "rho_" + bars.label + ".csv", csv_of_rho(rho_q(abs_r, vol, dc)));
        }});
      }
    } else if (analysis == "impact") {
      for (const LoadedAsset& a : assets) {
        jobs.push_back({analysis, stem(a.file), [&, &a = a](JobOutcome& out) {
          const BarSeries& bars = need_bars(a);
          for (int dt : cfg.impact.dt_minutes) {
            const int64_t step = static_cast<int64_t>(dt) * 60000;
            const std::vector<double> abs_r = bar_signal(bars, "abs_returns", step);
            const std::vector<double> vol = bar_signal(bars, "volume", step);
            const std::vector<ImpactCurve> curves = conditional_impact(abs_r, vol, cfg.impact);
            const std::string tag = bars.label + "_dt" + std::to_string(dt);
            emit(out, "impact_" + tag + ".csv", csv_of_impact(curves));
            emit(out, "impact_selection_" + tag + ".json",
                 json_of_selection(bars.label, dt, model_selection(curves)));
          }
        }});
      }
    } else if (analysis == "mst") {
      jobs.push_back({analysis, "*", [&](JobOutcome& out) {
        if (assets.size() < 2) throw std::runtime_error("mst: need >= 2 bar assets");
        // Common in-session grid across every asset.
        std::map<int64_t, std::size_t> hits;
        for (const LoadedAsset& a : assets)
          for (const Bar& b : need_bars(a).bars)
            if (session.contains(b.timestamp_ms)) ++hits[b.timestamp_ms];
        std::vector<int64_t> grid;
        for (const auto& [ts, count] : hits)
          if (count == assets.size()) grid.push_back(ts);
        if (grid.size() < 2) throw std::runtime_error("mst: empty common grid");

        std::vector<std::vector<double>> rets(assets.size());
        std::vector<std::string> labels;
        std::vector<AssetStats> stats;
        for (std::size_t i = 0; i < assets.size(); ++i) {
          const BarSeries& bars = assets[i].bars;
          std::map<int64_t, double> close;
          for (const Bar& b : bars.bars) close[b.timestamp_ms] = b.close;
          rets[i].reserve(grid.size() - 1);
          for (std::size_t k = 1; k < grid.size(); ++k)
            rets[i].push_back(std::log(close[grid[k]] / close[grid[k - 1]]));
          labels.push_back(bars.label);
          stats.push_back(asset_stats(bars, log_returns(bars, dt_ms)));
        }

        CorrelationMatrixQ m =
            correlation_matrix(rets, labels, cfg.mst.q, cfg.mst.s, cfg.mst.poly_degree);
        // Display ordering: ascending mean intertrade time, ties by label.
        std::sort(m.ordering.begin(), m.ordering.end(), [&](std::size_t x, std::size_t y) {
          if (stats[x].mean_intertrade_time_s != stats[y].mean_intertrade_time_s)
            return stats[x].mean_intertrade_time_s < stats[y].mean_intertrade_time_s;
          return labels[x] < labels[y];
        });
        emit(out, "corr_matrix.csv", matrix_csv(m));

        MstGraph tree = minimal_spanning_tree(to_distances(m));
        for (std::size_t i = 0; i < tree.nodes.size(); ++i) {
          tree.nodes[i].group = group_name(stats[i].group);
          tree.nodes[i].mean_volume = stats[i].mean_volume_per_min;
        }
        emit(out, "mst.json", mst_json(tree));
        emit(out, "mst.gv", mst_graphviz(tree));
      }});
    } else if (analysis == "intermarket") {
      jobs.push_back({analysis, "*", [&](JobOutcome& out) {
        std::vector<BarSeries> rows, cols;
        std::vector<double> row_dt;
        for (const LoadedAsset& a : assets) {
          const BarSeries& bars = need_bars(a);
          rows.push_back(bars);
          row_dt.push_back(asset_stats(bars, log_returns(bars, dt_ms)).mean_intertrade_time_s);
        }
        // Rows ascend in mean intertrade time.
        std::vector<std::size_t> order(rows.size());
        for (std::size_t i = 0; i < order.size(); ++i) order[i] = i;
        std::sort(order.begin(), order.end(), [&](std::size_t x, std::size_t y) {
          if (row_dt[x] != row_dt[y]) return row_dt[x] < row_dt[y];
          return rows[x].label < rows[y].label;
        });
        std::vector<BarSeries> sorted_rows;
        for (std::size_t i : order) sorted_rows.push_back(rows[i]);
        for (const LoadedAsset& t : traditionals) cols.push_back(need_bars(t));
        const IntermarketBlock block = intermarket_matrix(
            sorted_rows, cols, cfg.intermarket.q, cfg.intermarket.s, session,
            cfg.intermarket.poly_degree, cfg.intermarket.coverage_floor);
        emit(out, "intermarket.csv", intermarket_csv(block));
        emit(out, "intermarket_coverage.csv", intermarket_coverage_csv(block));
      }});
    }
  }

  RunResult result;
  result.jobs.resize(jobs.size());
  parallel_for(jobs.size(), cfg.workers, [&](std::size_t k) {
    JobOutcome& out = result.jobs[k];
    out.analysis = jobs[k].analysis;
    out.target = jobs[k].target;
    try {
      jobs[k].fn(out);
    } catch (const std::exception& e) {
      out.ok = false;
      out.error = e.what();
    }
  });

  ordered_json manifest;
  manifest["artifact"] = "fluct";
  manifest["timestamp"] = timestamp_utc();
  manifest["seed"] = cfg.seed;
  ordered_json conf;
  conf["data_dir"] = cfg.data_dir;
  conf["bar_format"] = cfg.bar_format;
  conf["dt_minutes"] = cfg.dt_minutes;
  conf["analyses"] = cfg.analyses;
  if (!cfg.session_file.empty()) conf["session_file"] = cfg.session_file;
  for (const std::string& a : cfg.analyses) {
    if (a == "cdf") {
      conf["cdf"] = {{"tail_fraction", cfg.cdf.tail_fraction}, {"signal", cfg.cdf.signal}};
    } else if (a == "acf") {
      conf["acf"] = {{"max_lag", cfg.acf.max_lag}, {"signal", cfg.acf.signal}};
    } else if (a == "mf") {
      conf["mf"] = {{"poly_degree", cfg.mf.poly_degree}, {"q_min", cfg.mf.q_min},
                    {"q_max", cfg.mf.q_max},             {"q_step", cfg.mf.q_step},
                    {"s_min", cfg.mf.s_min},             {"s_max", cfg.mf.s_max},
                    {"scales_per_decade", cfg.mf.scales_per_decade},
                    {"fit_lo", cfg.mf.fit_lo},           {"fit_hi", cfg.mf.fit_hi},
                    {"signal", cfg.mf.signal}};
    } else if (a == "rho") {
      conf["rho"] = {{"poly_degree", cfg.rho.poly_degree},
                     {"q_list", cfg.rho.q_list},
                     {"s_min", cfg.rho.s_min},
                     {"s_max", cfg.rho.s_max},
                     {"scales_per_decade", cfg.rho.scales_per_decade}};
    } else if (a == "impact") {
      conf["impact"] = {{"kappas", cfg.impact.kappa_grid},
                        {"top_fraction", cfg.impact.top_fraction},
                        {"cells_per_decade", cfg.impact.cells_per_decade},
                        {"min_bin_count", cfg.impact.min_bin_count},
                        {"dt_minutes", cfg.impact.dt_minutes}};
    } else if (a == "mst") {
      conf["mst"] = {{"q", cfg.mst.q}, {"s", cfg.mst.s}, {"poly_degree", cfg.mst.poly_degree}};
    } else if (a == "intermarket") {
      conf["intermarket"] = {{"traditionals", cfg.intermarket.traditionals},
                             {"q", cfg.intermarket.q},
                             {"s", cfg.intermarket.s},
                             {"poly_degree", cfg.intermarket.poly_degree},
                             {"coverage_floor", cfg.intermarket.coverage_floor}};
    }
  }
  manifest["config"] = conf;

  manifest["inputs"] = ordered_json::array();
  std::vector<std::pair<std::string, std::string>> input_files;  // (file, error)
  for (const LoadedAsset& a : assets) input_files.emplace_back(a.file, a.error);
  for (const LoadedAsset& t : traditionals) input_files.emplace_back(t.file, t.error);
  for (const LoadedSeries& s : plain) input_files.emplace_back(s.file, s.error);
  std::sort(input_files.begin(), input_files.end());
  for (const auto& [file, error] : input_files) {
    ordered_json in;
    in["file"] = file;
    const std::string full = (fs::path(cfg.data_dir) / file).string();
    in["bytes"] = fs::file_size(full);
    in["fnv1a64"] = file_hash_hex(full);
    if (!error.empty()) in["parse_error"] = error;
    manifest["inputs"].push_back(in);
  }
  if (!cfg.session_file.empty()) {
    ordered_json in;
    in["file"] = fs::path(cfg.session_file).filename().string();
    in["bytes"] = fs::file_size(cfg.session_file);
    in["fnv1a64"] = file_hash_hex(cfg.session_file);
    manifest["inputs"].push_back(in);
  }

  manifest["jobs"] = ordered_json::array();
  result.all_ok = true;
  for (const JobOutcome& out : result.jobs) {
    ordered_json j;
    j["analysis"] = out.analysis;
    j["target"] = out.target;
    j["status"] = out.ok ? "ok" : "error";
    if (!out.ok) {
      j["error"] = out.error;
      result.all_ok = false;
    }
    j["outputs"] = out.outputs;
    manifest["jobs"].push_back(j);
  }

  result.manifest_path = (fs::path(cfg.output_dir) / "manifest.json").string();
  write_text_file(result.manifest_path, manifest.dump(2) + "\n");
  return result;
}

}  // namespace fluct
