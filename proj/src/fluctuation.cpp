#include "fluct/fluctuation.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "fluct/fit.hpp"
#include "fluct/parallel.hpp"

namespace fluct {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Per-segment second moments of the detrended profile at one scale.
// Degenerate marks segments unusable for q <= 0: vanishing detrended
// variance on either side (up to rounding noise of the fit) or an exactly
// zero covariance.
struct ScaleMoments {
  std::vector<double> va, vb, cov;
  std::vector<char> degenerate;
  std::size_t excluded = 0;
};

ScaleMoments scale_moments(const std::vector<double>& pa, const std::vector<double>* pb,
                           std::size_t s, int m) {
  const auto bounds = segment_bounds(pa.size(), s);
  const SegmentDetrender det(s, m);
  const std::size_t M = bounds.size();
  ScaleMoments mom;
  mom.va.resize(M);
  mom.vb.resize(M);
  mom.cov.resize(M);
  mom.degenerate.assign(M, 0);
  std::vector<double> ra(s), rb(s);
  const double inv_s = 1.0 / static_cast<double>(s);
  for (std::size_t v = 0; v < M; ++v) {
    const std::size_t lo = bounds[v].first;
    det.residuals(pa.data() + lo, ra.data());
    double pmax_a = 0.0;
    for (std::size_t k = 0; k < s; ++k) pmax_a = std::max(pmax_a, std::fabs(pa[lo + k]));
    double mean_a = 0.0;
    for (std::size_t k = 0; k < s; ++k) mean_a += ra[k];
    mean_a *= inv_s;

    double pmax_b = pmax_a, mean_b = mean_a;
    const double* rbp = ra.data();
    if (pb) {
      det.residuals(pb->data() + lo, rb.data());
      pmax_b = 0.0;
      for (std::size_t k = 0; k < s; ++k) pmax_b = std::max(pmax_b, std::fabs((*pb)[lo + k]));
      mean_b = 0.0;
      for (std::size_t k = 0; k < s; ++k) mean_b += rb[k];
      mean_b *= inv_s;
      rbp = rb.data();
    }

    double va = 0.0, vb = 0.0, cov = 0.0;
    for (std::size_t k = 0; k < s; ++k) {
      const double da = ra[k] - mean_a;
      const double db = rbp[k] - mean_b;
      va += da * da;
      vb += db * db;
      cov += da * db;
    }
    va *= inv_s;
    vb *= inv_s;
    cov *= inv_s;
    mom.va[v] = va;
    mom.vb[v] = vb;
    mom.cov[v] = pb ? cov : va;

    // Fit residue of an exactly representable trend is ~1e-16 of the profile
    // magnitude; anything at that level counts as zero variance.
    const double tol_a = 1e-12 * pmax_a;
    const double tol_b = 1e-12 * pmax_b;
    bool degen = va <= tol_a * tol_a;
    if (pb) degen = degen || vb <= tol_b * tol_b || cov == 0.0;
    if (degen) {
      mom.degenerate[v] = 1;
      ++mom.excluded;
    }
  }
  return mom;
}

// Segment average of sgn(x)|x|^{q/2}; q != 0. mask=null averages everything.
double t_mean(const std::vector<double>& x, const std::vector<char>* mask, double q) {
  double acc = 0.0;
  std::size_t used = 0;
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (mask && (*mask)[v]) continue;
    const double a = std::fabs(x[v]);
    const double p = std::pow(a, q * 0.5);
    acc += x[v] < 0.0 ? -p : p;
    ++used;
  }
  if (used == 0) return kNaN;
  return acc / static_cast<double>(used);
}

// Logarithmic limit pieces for q = 0: mean of 0.5 ln|x| over unmasked
// segments and the majority sign (ties resolve positive).
bool t_log(const std::vector<double>& x, const std::vector<char>& mask, double* log_mean,
           double* sign) {
  double acc = 0.0;
  std::size_t used = 0, neg = 0;
  for (std::size_t v = 0; v < x.size(); ++v) {
    if (mask[v]) continue;
    acc += 0.5 * std::log(std::fabs(x[v]));
    if (x[v] < 0.0) ++neg;
    ++used;
  }
  if (used == 0) return false;
  *log_mean = acc / static_cast<double>(used);
  *sign = 2 * neg > used ? -1.0 : 1.0;
  return true;
}

double f_from_t(double t, double q) {
  if (std::isnan(t)) return kNaN;
  if (t == 0.0) return q > 0.0 ? 0.0 : kNaN;
  const double mag = std::pow(std::fabs(t), 1.0 / q);
  return t < 0.0 ? -mag : mag;
}

FluctuationSurface make_surface(SurfaceKind kind, const DetrendConfig& cfg, std::size_t n) {
  FluctuationSurface surf;
  surf.kind = kind;
  surf.scales = cfg.scales;
  surf.q_grid = cfg.q_grid;
  surf.values.assign(cfg.q_grid.size(), std::vector<double>(cfg.scales.size(), kNaN));
  surf.segments_total.assign(cfg.scales.size(), 0);
  surf.segments_excluded.assign(cfg.scales.size(), 0);
  surf.input_length = n;
  return surf;
}

std::size_t grid_index(const std::vector<double>& q_grid, const std::vector<int>& scales, double q,
                       int s, bool* ok) {
  *ok = false;
  std::size_t qi = q_grid.size(), si = scales.size();
  for (std::size_t i = 0; i < q_grid.size(); ++i)
    if (std::fabs(q_grid[i] - q) < 1e-9) qi = i;
  for (std::size_t j = 0; j < scales.size(); ++j)
    if (scales[j] == s) si = j;
  if (qi == q_grid.size() || si == scales.size()) return 0;
  *ok = true;
  return qi * scales.size() + si;
}

double checked_clip(double rho, double q) {
  if (q >= 0.0 && std::isfinite(rho) && std::fabs(rho) > 1.0) {
    if (std::fabs(rho) - 1.0 >= 1e-6)
      throw std::runtime_error("rho_q: |rho| overshoots 1 beyond tolerance at q = " +
                               std::to_string(q));
    rho = rho < 0.0 ? -1.0 : 1.0;
  }
  return rho;
}

}  // namespace

double rho_from_segments(const std::vector<double>& va, const std::vector<double>& vb,
                         const std::vector<double>& cov, const std::vector<char>& degenerate,
                         double q) {
  double rho = kNaN;
  if (q == 0.0) {
    double lab = 0.0, laa = 0.0, lbb = 0.0, sign = 1.0, unused = 1.0;
    if (t_log(cov, degenerate, &lab, &sign) && t_log(va, degenerate, &laa, &unused) &&
        t_log(vb, degenerate, &lbb, &unused))
      rho = sign * std::exp(lab - 0.5 * (laa + lbb));
  } else {
    const std::vector<char>* mask = q < 0.0 ? &degenerate : nullptr;
    const double tab = t_mean(cov, mask, q);
    const double taa = t_mean(va, mask, q);
    const double tbb = t_mean(vb, mask, q);
    if (!std::isnan(tab) && taa > 0.0 && tbb > 0.0) rho = tab / std::sqrt(taa * tbb);
  }
  return checked_clip(rho, q);
}

double FluctuationSurface::value_at(double q, int s) const {
  bool ok = false;
  const std::size_t flat = grid_index(q_grid, scales, q, s, &ok);
  if (!ok) return kNaN;
  return values[flat / scales.size()][flat % scales.size()];
}

double RhoQResult::value_at(double q, int s) const {
  bool ok = false;
  const std::size_t flat = grid_index(q_grid, scales, q, s, &ok);
  if (!ok) return kNaN;
  return rho[flat / scales.size()][flat % scales.size()];
}

FluctuationSurface fluctuation_surface(const std::vector<double>& a, const DetrendConfig& cfg,
                                       unsigned workers) {
  return fluctuation_surface(a, a, cfg, workers);
}

FluctuationSurface fluctuation_surface(const std::vector<double>& a, const std::vector<double>& b,
                                       const DetrendConfig& cfg, unsigned workers) {
  const bool univariate = &a == &b;
  if (!univariate && a.size() != b.size())
    throw std::invalid_argument("fluctuation_surface: length mismatch");
  validate(cfg, a.size());

  const std::vector<double> pa = profile(a);
  const std::vector<double> pb = univariate ? std::vector<double>() : profile(b);

  FluctuationSurface surf =
      make_surface(univariate ? SurfaceKind::univariate : SurfaceKind::bivariate, cfg, a.size());

  parallel_for(cfg.scales.size(), workers, [&](std::size_t si) {
    const std::size_t s = static_cast<std::size_t>(cfg.scales[si]);
    const ScaleMoments mom = scale_moments(pa, univariate ? nullptr : &pb, s, cfg.poly_degree);
    surf.segments_total[si] = mom.cov.size();
    surf.segments_excluded[si] = mom.excluded;
    for (std::size_t qi = 0; qi < cfg.q_grid.size(); ++qi) {
      const double q = cfg.q_grid[qi];
      if (q == 0.0) {
        double lm = 0.0, sign = 1.0;
        if (t_log(mom.cov, mom.degenerate, &lm, &sign))
          surf.values[qi][si] = sign * std::exp(lm);
      } else {
        const double t = t_mean(mom.cov, q < 0.0 ? &mom.degenerate : nullptr, q);
        surf.values[qi][si] = f_from_t(t, q);
      }
    }
  });
  return surf;
}

SpectrumResult hurst_spectrum(const FluctuationSurface& surface, int s_lo, int s_hi) {
  if (surface.kind != SurfaceKind::univariate)
    throw std::invalid_argument("hurst_spectrum: univariate surface required");
  std::vector<std::size_t> idx;
  for (std::size_t j = 0; j < surface.scales.size(); ++j)
    if (surface.scales[j] >= s_lo && surface.scales[j] <= s_hi) idx.push_back(j);
  if (idx.size() < 8)
    throw std::invalid_argument("hurst_spectrum: need >= 8 scales inside the fit range");

  SpectrumResult res;
  res.q_grid = surface.q_grid;
  res.fit_lo = surface.scales[idx.front()];
  res.fit_hi = surface.scales[idx.back()];
  const std::size_t nq = surface.q_grid.size();
  res.h_of_q.resize(nq);
  res.fit_r2.resize(nq);

  std::vector<double> xs(idx.size()), ys(idx.size());
  for (std::size_t j = 0; j < idx.size(); ++j)
    xs[j] = std::log10(static_cast<double>(surface.scales[idx[j]]));
  for (std::size_t qi = 0; qi < nq; ++qi) {
    for (std::size_t j = 0; j < idx.size(); ++j) {
      const double f = surface.values[qi][idx[j]];
      if (!(f > 0.0) || !std::isfinite(f))
        throw std::runtime_error("hurst_spectrum: non-positive fluctuation in fit range");
      ys[j] = std::log10(f);
    }
    const LinearFit fit = linear_fit(xs.data(), ys.data(), xs.size());
    res.h_of_q[qi] = fit.slope;
    res.fit_r2[qi] = fit.r2;
  }

  // Legendre transform: alpha = h + q dh/dq, f(alpha) = q (alpha - h) + 1.
  res.alpha.resize(nq);
  res.f_alpha.resize(nq);
  for (std::size_t i = 0; i < nq; ++i) {
    double dh = 0.0;
    if (nq >= 2) {
      const std::size_t lo = i == 0 ? 0 : i - 1;
      const std::size_t hi = i + 1 == nq ? i : i + 1;
      dh = (res.h_of_q[hi] - res.h_of_q[lo]) / (surface.q_grid[hi] - surface.q_grid[lo]);
    }
    res.alpha[i] = res.h_of_q[i] + surface.q_grid[i] * dh;
    res.f_alpha[i] = surface.q_grid[i] * (res.alpha[i] - res.h_of_q[i]) + 1.0;
  }

  res.h2 = kNaN;
  for (std::size_t i = 0; i < nq; ++i)
    if (std::fabs(surface.q_grid[i] - 2.0) < 1e-9) res.h2 = res.h_of_q[i];

  const auto [amin, amax] = std::minmax_element(res.alpha.begin(), res.alpha.end());
  const std::size_t peak =
      static_cast<std::size_t>(std::max_element(res.f_alpha.begin(), res.f_alpha.end()) -
                               res.f_alpha.begin());
  res.alpha0 = res.alpha[peak];
  res.width = *amax - *amin;
  res.asymmetry = (res.alpha0 - *amin) - (*amax - res.alpha0);
  return res;
}

std::pair<int, int> auto_fit_range(const FluctuationSurface& surface, double r2_min,
                                   std::size_t min_scales) {
  if (surface.scales.empty()) throw std::invalid_argument("auto_fit_range: empty surface");
  // Row nearest q = 2 drives the search.
  std::size_t qrow = 0;
  for (std::size_t i = 0; i < surface.q_grid.size(); ++i)
    if (std::fabs(surface.q_grid[i] - 2.0) < std::fabs(surface.q_grid[qrow] - 2.0)) qrow = i;

  const std::size_t ns = surface.scales.size();
  std::vector<double> xs(ns), ys(ns);
  std::vector<char> usable(ns, 0);
  for (std::size_t j = 0; j < ns; ++j) {
    const double f = surface.values[qrow][j];
    if (f > 0.0 && std::isfinite(f)) {
      usable[j] = 1;
      xs[j] = std::log10(static_cast<double>(surface.scales[j]));
      ys[j] = std::log10(f);
    }
  }

  std::size_t best_lo = 0, best_len = 0;
  double best_r2 = -1.0;
  for (std::size_t lo = 0; lo < ns; ++lo) {
    if (!usable[lo]) continue;
    for (std::size_t hi = lo + min_scales - 1; hi < ns; ++hi) {
      if (!usable[hi]) break;
      const std::size_t len = hi - lo + 1;
      const LinearFit fit = linear_fit(xs.data() + lo, ys.data() + lo, len);
      if (fit.r2 < r2_min) continue;
      if (len > best_len || (len == best_len && fit.r2 > best_r2)) {
        best_lo = lo;
        best_len = len;
        best_r2 = fit.r2;
      }
    }
  }
  if (best_len == 0) return {surface.scales.front(), surface.scales.back()};
  return {surface.scales[best_lo], surface.scales[best_lo + best_len - 1]};
}

RhoQResult rho_q(const std::vector<double>& a, const std::vector<double>& b,
                 const DetrendConfig& cfg, unsigned workers) {
  if (a.size() != b.size()) throw std::invalid_argument("rho_q: length mismatch");
  validate(cfg, a.size());

  const std::vector<double> pa = profile(a);
  const std::vector<double> pb = profile(b);

  RhoQResult res;
  res.scales = cfg.scales;
  res.q_grid = cfg.q_grid;
  res.rho.assign(cfg.q_grid.size(), std::vector<double>(cfg.scales.size(), kNaN));
  res.cross = make_surface(SurfaceKind::bivariate, cfg, a.size());
  res.first = make_surface(SurfaceKind::univariate, cfg, a.size());
  res.second = make_surface(SurfaceKind::univariate, cfg, b.size());

  parallel_for(cfg.scales.size(), workers, [&](std::size_t si) {
    const std::size_t s = static_cast<std::size_t>(cfg.scales[si]);
    const ScaleMoments mom = scale_moments(pa, &pb, s, cfg.poly_degree);
    for (FluctuationSurface* surf : {&res.cross, &res.first, &res.second}) {
      surf->segments_total[si] = mom.cov.size();
      surf->segments_excluded[si] = mom.excluded;
    }
    for (std::size_t qi = 0; qi < cfg.q_grid.size(); ++qi) {
      const double q = cfg.q_grid[qi];
      if (q == 0.0) {
        double lab = 0.0, laa = 0.0, lbb = 0.0, sign = 1.0, unused = 1.0;
        if (t_log(mom.cov, mom.degenerate, &lab, &sign) &&
            t_log(mom.va, mom.degenerate, &laa, &unused) &&
            t_log(mom.vb, mom.degenerate, &lbb, &unused)) {
          res.cross.values[qi][si] = sign * std::exp(lab);
          res.first.values[qi][si] = std::exp(laa);
          res.second.values[qi][si] = std::exp(lbb);
        }
      } else {
        // One exclusion mask shared by all three averages keeps the
        // per-segment Cauchy-Schwarz bound valid for the ratio.
        const std::vector<char>* mask = q < 0.0 ? &mom.degenerate : nullptr;
        res.cross.values[qi][si] = f_from_t(t_mean(mom.cov, mask, q), q);
        res.first.values[qi][si] = f_from_t(t_mean(mom.va, mask, q), q);
        res.second.values[qi][si] = f_from_t(t_mean(mom.vb, mask, q), q);
      }
      res.rho[qi][si] = rho_from_segments(mom.va, mom.vb, mom.cov, mom.degenerate, q);
    }
  });
  return res;
}

}  // namespace fluct
