#include "fluct/detrend.hpp"

#include <cmath>
#include <numeric>
#include <stdexcept>
#include <string>

namespace fluct {

std::vector<int> log_scale_grid(std::size_t s_min, std::size_t s_max, int per_decade) {
  if (s_min < 2 || s_max < s_min) throw std::invalid_argument("log_scale_grid: bad bounds");
  if (per_decade < 1) throw std::invalid_argument("log_scale_grid: per_decade must be >= 1");
  const double lo = std::log10(static_cast<double>(s_min));
  const double hi = std::log10(static_cast<double>(s_max));
  const int steps = std::max(1, static_cast<int>(std::ceil((hi - lo) * per_decade)));
  std::vector<int> scales;
  for (int i = 0; i <= steps; ++i) {
    const double f = lo + (hi - lo) * i / steps;
    int s = static_cast<int>(std::llround(std::pow(10.0, f)));
    s = std::max<int>(static_cast<int>(s_min), std::min<int>(static_cast<int>(s_max), s));
    if (scales.empty() || s != scales.back()) scales.push_back(s);
  }
  return scales;
}

DetrendConfig default_detrend_config(std::size_t n) {
  if (n < 40) throw std::invalid_argument("default_detrend_config: series too short");
  DetrendConfig cfg;
  cfg.poly_degree = 2;
  cfg.scales = log_scale_grid(10, n / 4, 20);
  for (int i = -8; i <= 8; ++i) cfg.q_grid.push_back(i * 0.5);
  return cfg;
}

void validate(const DetrendConfig& cfg, std::size_t n) {
  if (cfg.poly_degree < 1) throw std::invalid_argument("detrend: poly_degree must be >= 1");
  if (cfg.scales.empty()) throw std::invalid_argument("detrend: empty scale grid");
  if (cfg.q_grid.empty()) throw std::invalid_argument("detrend: empty q grid");
  for (std::size_t i = 0; i < cfg.scales.size(); ++i) {
    if (i > 0 && cfg.scales[i] <= cfg.scales[i - 1])
      throw std::invalid_argument("detrend: scales must be strictly ascending");
  }
  const int s_min = cfg.scales.front();
  const int s_max = cfg.scales.back();
  if (s_min < cfg.poly_degree + 2)
    throw std::invalid_argument("detrend: smallest scale " + std::to_string(s_min) +
                                " is below poly_degree + 2");
  if (static_cast<std::size_t>(s_max) > n / 4)
    throw std::invalid_argument("detrend: largest scale " + std::to_string(s_max) +
                                " exceeds n/4 = " + std::to_string(n / 4));
  for (double q : cfg.q_grid) {
    if (!std::isfinite(q) || std::fabs(q) > 10.0)
      throw std::invalid_argument("detrend: |q| must be <= 10");
  }
}

std::vector<std::pair<std::size_t, std::size_t>> segment_bounds(std::size_t n, std::size_t s) {
  if (s == 0 || n < s) throw std::invalid_argument("segment_bounds: scale exceeds length");
  const std::size_t half = n / s;
  std::vector<std::pair<std::size_t, std::size_t>> bounds;
  bounds.reserve(2 * half);
  for (std::size_t v = 0; v < half; ++v) bounds.emplace_back(v * s, (v + 1) * s);
  for (std::size_t v = 0; v < half; ++v)
    bounds.emplace_back(n - (half - v) * s, n - (half - v - 1) * s);
  return bounds;
}

std::vector<double> profile(const std::vector<double>& x) {
  if (x.empty()) throw std::invalid_argument("profile: empty series");
  const double mean = std::accumulate(x.begin(), x.end(), 0.0) / static_cast<double>(x.size());
  std::vector<double> y(x.size());
  double acc = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) {
    acc += x[i] - mean;
    y[i] = acc;
  }
  return y;
}

SegmentDetrender::SegmentDetrender(std::size_t s, int m) : s_(s), m_(m) {
  if (m < 0) throw std::invalid_argument("detrend: negative degree");
  if (s < static_cast<std::size_t>(m) + 2) throw std::invalid_argument("detrend: scale below degree + 2");
  // Monomials in t = 2k/(s-1) - 1, orthonormalized by modified Gram-Schmidt
  // with one re-orthogonalization pass.
  std::vector<double> t(s);
  for (std::size_t k = 0; k < s; ++k)
    t[k] = s == 1 ? 0.0 : 2.0 * static_cast<double>(k) / static_cast<double>(s - 1) - 1.0;
  basis_.assign(static_cast<std::size_t>(m) + 1, std::vector<double>(s));
  for (std::size_t k = 0; k < s; ++k) basis_[0][k] = 1.0;
  for (int j = 1; j <= m; ++j)
    for (std::size_t k = 0; k < s; ++k) basis_[j][k] = basis_[j - 1][k] * t[k];
  for (int j = 0; j <= m; ++j) {
    auto& bj = basis_[j];
    for (int pass = 0; pass < 2; ++pass) {
      for (int i = 0; i < j; ++i) {
        const auto& bi = basis_[i];
        double r = 0.0;
        for (std::size_t k = 0; k < s; ++k) r += bi[k] * bj[k];
        for (std::size_t k = 0; k < s; ++k) bj[k] -= r * bi[k];
      }
    }
    double norm2 = 0.0;
    for (std::size_t k = 0; k < s; ++k) norm2 += bj[k] * bj[k];
    const double norm = std::sqrt(norm2);
    if (!(norm > 0.0)) throw std::logic_error("detrend: degenerate polynomial basis");
    for (std::size_t k = 0; k < s; ++k) bj[k] /= norm;
  }
}

void SegmentDetrender::residuals(const double* seg, double* out) const {
  // Coefficients first so that out may alias seg.
  std::vector<double> coeff(basis_.size());
  for (std::size_t j = 0; j < basis_.size(); ++j) {
    double c = 0.0;
    for (std::size_t k = 0; k < s_; ++k) c += basis_[j][k] * seg[k];
    coeff[j] = c;
  }
  for (std::size_t k = 0; k < s_; ++k) {
    double fit = 0.0;
    for (std::size_t j = 0; j < basis_.size(); ++j) fit += coeff[j] * basis_[j][k];
    out[k] = seg[k] - fit;
  }
}

std::vector<std::vector<double>> profile_and_detrend(const std::vector<double>& x, std::size_t s, int m) {
  if (s < static_cast<std::size_t>(m) + 2) throw std::invalid_argument("profile_and_detrend: scale below degree + 2");
  if (x.size() < 4 * s) throw std::invalid_argument("profile_and_detrend: need length >= 4 * scale");
  const std::vector<double> prof = profile(x);
  const auto bounds = segment_bounds(x.size(), s);
  const SegmentDetrender detrender(s, m);
  std::vector<std::vector<double>> out(bounds.size(), std::vector<double>(s));
  for (std::size_t v = 0; v < bounds.size(); ++v)
    detrender.residuals(prof.data() + bounds[v].first, out[v].data());
  return out;
}

}  // namespace fluct
