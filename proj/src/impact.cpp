#include "fluct/impact.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "fluct/fit.hpp"

namespace fluct {

namespace {
constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
}

void validate(const ImpactConfig& cfg) {
  if (cfg.kappa_grid.empty()) throw std::invalid_argument("impact: empty kappa grid");
  for (double k : cfg.kappa_grid)
    if (!(k > 0.0)) throw std::invalid_argument("impact: kappa must be positive");
  if (!(cfg.top_fraction > 0.0) || cfg.top_fraction > 1.0)
    throw std::invalid_argument("impact: top fraction must be in (0, 1]");
  for (std::size_t i = 1; i < cfg.cell_edges.size(); ++i)
    if (!(cfg.cell_edges[i] > cfg.cell_edges[i - 1]))
      throw std::invalid_argument("impact: cell edges must be strictly increasing");
  if (!cfg.cell_edges.empty() && !(cfg.cell_edges.front() > 0.0))
    throw std::invalid_argument("impact: cell edges must be positive");
  if (cfg.cells_per_decade < 1) throw std::invalid_argument("impact: cells_per_decade must be >= 1");
  if (cfg.min_bin_count < 1) throw std::invalid_argument("impact: min_bin_count must be >= 1");
}

double sample_quantile(std::vector<double> values, double p) {
  if (values.empty()) return kNaN;
  if (p < 0.0 || p > 1.0) throw std::invalid_argument("sample_quantile: p outside [0, 1]");
  std::sort(values.begin(), values.end());
  const double h = p * static_cast<double>(values.size() - 1);
  const std::size_t lo = static_cast<std::size_t>(h);
  if (lo + 1 >= values.size()) return values.back();
  const double frac = h - static_cast<double>(lo);
  return values[lo] + frac * (values[lo + 1] - values[lo]);
}

ScatterResult scatter(const std::vector<double>& returns, const std::vector<double>& volume) {
  if (returns.size() != volume.size()) throw std::invalid_argument("scatter: length mismatch");
  ScatterResult res;
  res.volume = volume;
  res.returns = returns;
  res.v_q25 = sample_quantile(volume, 0.25);
  res.v_q50 = sample_quantile(volume, 0.50);
  res.v_q75 = sample_quantile(volume, 0.75);
  return res;
}

namespace {

std::vector<double> auto_cell_edges(const std::vector<double>& volume, int per_decade) {
  std::vector<double> pos;
  pos.reserve(volume.size());
  for (double v : volume)
    if (v > 0.0) pos.push_back(v);
  if (pos.size() < 2) throw std::invalid_argument("impact: need positive volumes to build cells");
  const double lo = sample_quantile(pos, 0.25);
  const double hi = *std::max_element(pos.begin(), pos.end());
  if (!(lo > 0.0)) throw std::invalid_argument("impact: 25th volume percentile is not positive");
  const double step = std::pow(10.0, 1.0 / per_decade);
  std::vector<double> edges{lo};
  while (edges.back() <= hi) edges.push_back(edges.back() * step);
  return edges;
}

}  // namespace

std::vector<ImpactCurve> conditional_impact(const std::vector<double>& returns,
                                            const std::vector<double>& volume,
                                            const ImpactConfig& cfg) {
  validate(cfg);
  if (returns.size() != volume.size()) throw std::invalid_argument("impact: length mismatch");
  if (returns.empty()) throw std::invalid_argument("impact: empty input");

  const std::vector<double> edges =
      cfg.cell_edges.empty() ? auto_cell_edges(volume, cfg.cells_per_decade) : cfg.cell_edges;
  const std::size_t ncells = edges.size() - 1;
  if (ncells == 0) throw std::invalid_argument("impact: need at least one cell");

  // Bin |r| by volume cell; below-range and non-positive volumes stay out.
  std::vector<std::vector<double>> cell_abs(ncells);
  for (std::size_t i = 0; i < volume.size(); ++i) {
    const double v = volume[i];
    if (!(v >= edges.front()) || v >= edges.back()) continue;
    const std::size_t c =
        static_cast<std::size_t>(std::upper_bound(edges.begin(), edges.end(), v) - edges.begin()) -
        1;
    cell_abs[c].push_back(std::fabs(returns[i]));
  }

  // Kappa-free selection: keep the top-fraction largest |r| of every cell.
  std::vector<double> centers(ncells);
  std::vector<std::size_t> counts(ncells, 0);
  std::vector<char> in_fit(ncells, 0);
  for (std::size_t c = 0; c < ncells; ++c) {
    centers[c] = std::sqrt(edges[c] * edges[c + 1]);
    auto& xs = cell_abs[c];
    if (xs.empty()) continue;
    std::sort(xs.begin(), xs.end(), std::greater<double>());
    const std::size_t keep = std::max<std::size_t>(
        1, static_cast<std::size_t>(cfg.top_fraction * static_cast<double>(xs.size())));
    xs.resize(keep);
    counts[c] = keep;
    const bool in_range = (cfg.fit_v_lo <= 0.0 || centers[c] >= cfg.fit_v_lo) &&
                          (cfg.fit_v_hi <= 0.0 || centers[c] <= cfg.fit_v_hi);
    if (keep >= cfg.min_bin_count && in_range) in_fit[c] = 1;
  }

  std::size_t n_fit = 0;
  for (char f : in_fit) n_fit += f != 0;
  if (n_fit < 2) throw std::runtime_error("impact: fewer than two cells meet the occupancy gate");

  std::vector<ImpactCurve> curves;
  curves.reserve(cfg.kappa_grid.size());
  for (double kappa : cfg.kappa_grid) {
    ImpactCurve cur;
    cur.kappa = kappa;
    cur.v_centers = centers;
    cur.counts = counts;
    cur.in_fit = in_fit;
    cur.means.assign(ncells, kNaN);
    cur.stdevs.assign(ncells, kNaN);

    std::vector<double> xs, ys;
    for (std::size_t c = 0; c < ncells; ++c) {
      if (counts[c] == 0) continue;
      double mean = 0.0;
      for (double a : cell_abs[c]) mean += std::pow(a, kappa);
      mean /= static_cast<double>(counts[c]);
      double var = 0.0;
      for (double a : cell_abs[c]) {
        const double d = std::pow(a, kappa) - mean;
        var += d * d;
      }
      var /= static_cast<double>(counts[c]);
      cur.means[c] = mean;
      cur.stdevs[c] = std::sqrt(var);
      if (in_fit[c] && mean > 0.0) {
        xs.push_back(std::log10(centers[c]));
        ys.push_back(std::log10(mean));
      }
    }
    if (xs.size() < 2) throw std::runtime_error("impact: fewer than two positive cells to fit");
    const LinearFit fit = linear_fit(xs, ys);
    cur.fit_slope = fit.slope;
    cur.fit_intercept = fit.intercept;
    cur.fit_r2 = fit.r2;
    cur.n_fit_bins = xs.size();
    cur.fit_v_lo = std::pow(10.0, xs.front());
    cur.fit_v_hi = std::pow(10.0, xs.back());
    curves.push_back(std::move(cur));
  }
  return curves;
}

ModelSelectionReport model_selection(const std::vector<ImpactCurve>& curves, double r2_threshold) {
  if (curves.size() < 2) throw std::invalid_argument("model_selection: need >= 2 kappa curves");
  ModelSelectionReport report;
  report.r2_threshold = r2_threshold;
  for (const ImpactCurve& cur : curves) {
    // R^2 of the slope-one model log-mean = log-v + c against the curve.
    std::vector<double> xs, ys;
    for (std::size_t c = 0; c < cur.v_centers.size(); ++c) {
      if (!cur.in_fit[c] || !(cur.means[c] > 0.0)) continue;
      xs.push_back(std::log10(cur.v_centers[c]));
      ys.push_back(std::log10(cur.means[c]));
    }
    KappaRank rank;
    rank.kappa = cur.kappa;
    rank.fit_slope = cur.fit_slope;
    double offset = 0.0, ymean = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      offset += ys[i] - xs[i];
      ymean += ys[i];
    }
    offset /= static_cast<double>(xs.size());
    ymean /= static_cast<double>(xs.size());
    double ss_res = 0.0, ss_tot = 0.0;
    for (std::size_t i = 0; i < xs.size(); ++i) {
      const double r = ys[i] - xs[i] - offset;
      ss_res += r * r;
      const double d = ys[i] - ymean;
      ss_tot += d * d;
    }
    rank.linearity_r2 = ss_tot > 0.0
                            ? 1.0 - ss_res / ss_tot
                            : (ss_res <= 1e-20 ? 1.0 : -std::numeric_limits<double>::infinity());
    rank.rejected = rank.linearity_r2 < r2_threshold;
    report.ranking.push_back(rank);
  }
  std::sort(report.ranking.begin(), report.ranking.end(), [](const KappaRank& a, const KappaRank& b) {
    if (a.linearity_r2 != b.linearity_r2) return a.linearity_r2 > b.linearity_r2;
    return a.kappa < b.kappa;
  });
  return report;
}

}  // namespace fluct
