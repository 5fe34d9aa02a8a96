#pragma once

#include <cstddef>
#include <utility>
#include <vector>

namespace fluct {

// Configuration shared by the fluctuation-surface and spectrum routines.
struct DetrendConfig {
  int poly_degree = 2;         // degree of the per-segment trend removed
  std::vector<int> scales;     // segment lengths, sorted ascending
  std::vector<double> q_grid;  // moment orders, |q| <= 10
};

// Log-spaced integer scale grid, `per_decade` points per decade, duplicates
// dropped. Endpoints are always included.
std::vector<int> log_scale_grid(std::size_t s_min, std::size_t s_max, int per_decade = 20);

// Defaults: degree 2, 20 scales per decade spanning [10, n/4], q = -4..4 step 0.5.
DetrendConfig default_detrend_config(std::size_t n);

// Throws std::invalid_argument unless: degree >= 1, scales sorted and unique,
// min scale >= degree + 2, max scale <= n/4 (so every scale keeps >= 8
// segments), and |q| <= 10 everywhere on the grid.
void validate(const DetrendConfig& cfg, std::size_t n);

// 2*floor(n/s) half-open segments of length s: the first floor(n/s) anchored
// at the left end, the rest flush with the right end, enumerated left to
// right. For n=100, s=30 segment index 3 (0-based) covers [10, 40).
std::vector<std::pair<std::size_t, std::size_t>> segment_bounds(std::size_t n, std::size_t s);

// Cumulative sum of (x - mean(x)).
std::vector<double> profile(const std::vector<double>& x);

// Least-squares removal of a degree-m polynomial from length-s windows.
// The orthonormal basis is built once per (s, m) and reused across segments.
class SegmentDetrender {
 public:
  SegmentDetrender(std::size_t s, int m);

  // Writes seg - polyfit(seg) into out; out may alias seg.
  void residuals(const double* seg, double* out) const;

  std::size_t scale() const { return s_; }
  int degree() const { return m_; }

 private:
  std::size_t s_;
  int m_;
  std::vector<std::vector<double>> basis_;  // m+1 orthonormal rows of length s
};

// Integrates the series (cumulative sum of deviations from the mean) and
// returns the detrended residuals of every segment at scale s.
std::vector<std::vector<double>> profile_and_detrend(const std::vector<double>& x, std::size_t s, int m);

}  // namespace fluct
