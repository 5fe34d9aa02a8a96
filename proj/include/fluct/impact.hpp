#pragma once

#include <cstddef>
#include <vector>

namespace fluct {

// Conditional price-impact estimation E[|r|^kappa | v] on log-spaced volume
// cells with top-fraction filtering.
struct ImpactConfig {
  std::vector<double> kappa_grid{0.2, 0.5, 1.0, 2.0};
  double top_fraction = 0.1;      // fraction of largest |r| kept per cell
  std::vector<double> cell_edges; // explicit bin edges; empty = automatic grid
  int cells_per_decade = 12;      // automatic grid resolution
  std::size_t min_bin_count = 30; // retained points required of fitted cells
  double fit_v_lo = 0.0;          // optional fit-range clamp on centers
  double fit_v_hi = 0.0;          // 0 = unbounded
  std::vector<int> dt_minutes{1, 5, 10, 60};  // sampling intervals (batch runner)
};

void validate(const ImpactConfig& cfg);

// Point cloud plus volume quartile markers (linear-interpolation quantiles).
struct ScatterResult {
  std::vector<double> volume;
  std::vector<double> returns;
  double v_q25 = 0.0, v_q50 = 0.0, v_q75 = 0.0;  // NaN when empty
};

// Linear-interpolation sample quantile of unsorted data, p in [0, 1].
double sample_quantile(std::vector<double> values, double p);

ScatterResult scatter(const std::vector<double>& returns, const std::vector<double>& volume);

// One conditional curve per kappa; cells, counts and the in_fit mask are
// shared across kappa values (the top-fraction selection is kappa-free).
struct ImpactCurve {
  double kappa = 1.0;
  std::vector<double> v_centers;      // geometric cell centers
  std::vector<double> means;          // E[|r|^kappa | v] over retained points
  std::vector<double> stdevs;         // conditional standard deviation
  std::vector<std::size_t> counts;    // retained points per cell
  std::vector<char> in_fit;           // cells meeting occupancy + range gates
  double fit_slope = 0.0, fit_intercept = 0.0, fit_r2 = 0.0;
  double fit_v_lo = 0.0, fit_v_hi = 0.0;  // center range actually fitted
  std::size_t n_fit_bins = 0;
};

// Bins |r| by volume cell, keeps the top-fraction largest |r| per cell, and
// fits log E[|r|^kappa | v] against log v over occupied cells. Throws when
// fewer than two cells survive the occupancy gate.
std::vector<ImpactCurve> conditional_impact(const std::vector<double>& returns,
                                            const std::vector<double>& volume,
                                            const ImpactConfig& cfg);

// Ranking of kappa values by how close the curve is to E[|r|^kappa|v] = c v
// (slope pinned to one in log-log); rejected when that linearity R^2 falls
// below the threshold.
struct KappaRank {
  double kappa = 0.0;
  double linearity_r2 = 0.0;
  double fit_slope = 0.0;  // free-slope fit, for reference
  bool rejected = false;
};

struct ModelSelectionReport {
  std::vector<KappaRank> ranking;  // best first
  double r2_threshold = 0.9;
};

ModelSelectionReport model_selection(const std::vector<ImpactCurve>& curves,
                                     double r2_threshold = 0.9);

}  // namespace fluct
