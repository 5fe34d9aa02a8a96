#pragma once

#include <cstddef>
#include <string>
#include <utility>
#include <vector>

#include "fluct/detrend.hpp"

namespace fluct {

enum class SurfaceKind { univariate, bivariate };

// Signed q-th order fluctuation function F_q(s) on a (q, scale) grid.
// Univariate entries are nonnegative; bivariate entries carry the sign of
// the segment-averaged signed covariance. Entries are NaN when every
// segment at that scale was excluded (possible only for q <= 0).
struct FluctuationSurface {
  SurfaceKind kind = SurfaceKind::univariate;
  std::string label;  // free-form tag, e.g. "rr", "vv", "rv"
  std::vector<int> scales;
  std::vector<double> q_grid;
  std::vector<std::vector<double>> values;     // [q_index][scale_index]
  std::vector<std::size_t> segments_total;     // per scale: 2*floor(n/s)
  std::vector<std::size_t> segments_excluded;  // per scale, applies to q <= 0 averages
  std::size_t input_length = 0;

  // Value at the grid point nearest-matching (q, s); NaN when absent.
  double value_at(double q, int s) const;
};

// Generalized Hurst exponents and the singularity spectrum derived from a
// univariate surface by log-log fits over [fit_lo, fit_hi].
struct SpectrumResult {
  std::vector<double> q_grid;
  std::vector<double> h_of_q;   // slope of log F_q vs log s
  std::vector<double> fit_r2;   // per-q goodness of fit
  std::vector<double> alpha;    // h + q dh/dq
  std::vector<double> f_alpha;  // q (alpha - h) + 1
  int fit_lo = 0, fit_hi = 0;   // scale range actually used
  double h2 = 0.0;              // h at q = 2 (NaN if 2 is not on the grid)
  double alpha0 = 0.0;          // alpha at the spectrum maximum
  double width = 0.0;           // alpha_max - alpha_min
  double asymmetry = 0.0;       // (alpha0 - alpha_min) - (alpha_max - alpha0)
};

// q-dependent detrended cross-correlation coefficient on the (q, s) grid,
// with the three surfaces produced by the same single pass. Entries are NaN
// where either univariate fluctuation vanishes.
struct RhoQResult {
  std::vector<int> scales;
  std::vector<double> q_grid;
  std::vector<std::vector<double>> rho;  // [q_index][scale_index]
  FluctuationSurface cross, first, second;

  double value_at(double q, int s) const;
};

// Univariate surface of a single series.
FluctuationSurface fluctuation_surface(const std::vector<double>& a, const DetrendConfig& cfg,
                                       unsigned workers = 1);

// Bivariate signed surface of a pair (univariate when both arguments are the
// same object). Per-segment covariances keep their sign via the
// modulus-then-sign factorization; q = 0 uses the logarithmic limit with the
// sign chosen by segment majority. Segments in which either series has zero
// detrended variance (or the covariance vanishes) are excluded from q <= 0
// averages and counted in segments_excluded.
FluctuationSurface fluctuation_surface(const std::vector<double>& a, const std::vector<double>& b,
                                       const DetrendConfig& cfg, unsigned workers = 1);

// Least-squares h(q) over scales in [s_lo, s_hi] (>= 8 scales required),
// then alpha(q), f(alpha) by the Legendre transform with dh/dq from central
// differences. Throws if the surface is bivariate or any F in range is not
// strictly positive.
SpectrumResult hurst_spectrum(const FluctuationSurface& surface, int s_lo, int s_hi);

// Longest contiguous scale window (>= min_scales points) whose q = 2 row
// fits a straight line in log-log with R^2 >= r2_min; falls back to the full
// range when no window qualifies.
std::pair<int, int> auto_fit_range(const FluctuationSurface& surface, double r2_min = 0.98,
                                   std::size_t min_scales = 8);

// One pass producing cross, first and second surfaces on a shared segment
// exclusion mask, then rho = T_ab / sqrt(T_aa T_bb) per (q, s) where T is the
// segment average of the signed q/2 powers. Values for q >= 0 are clipped to
// [-1, 1] when the overshoot is below 1e-6; larger overshoot throws.
RhoQResult rho_q(const std::vector<double>& a, const std::vector<double>& b,
                 const DetrendConfig& cfg, unsigned workers = 1);

// The same coefficient assembled from precomputed per-segment moments
// (variances, signed covariances, shared degenerate mask) so that callers
// holding cached detrended segments can evaluate pairs cheaply. NaN when
// undefined; the q >= 0 clip rule applies.
double rho_from_segments(const std::vector<double>& va, const std::vector<double>& vb,
                         const std::vector<double>& cov, const std::vector<char>& degenerate,
                         double q);

}  // namespace fluct
