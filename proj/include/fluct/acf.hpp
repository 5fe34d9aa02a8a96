#pragma once

#include <cstddef>
#include <vector>

namespace fluct {

struct AcfResult {
    std::vector<size_t> lags;    // log-spaced grid, tau = 0 first
    std::vector<double> values;  // C(tau), C(0) = 1 exactly
    size_t n = 0;                // sample length behind the estimate
    double noise_level = 0;      // 95% band half-width, 1.96 / sqrt(n)
};

struct PowerLawRange {
    double tau_lo = 0;
    double tau_hi = 0;
    double slope = 0;
    double r2 = 0;
    size_t n_points = 0;
};

struct AcfRangeScan {
    std::vector<PowerLawRange> ranges;
    // two cluster-length proxies; 0 when the event never happens on the grid
    size_t first_insignificant_lag = 0;  // first tau with C(tau) < noise_level
    size_t first_zero_crossing = 0;      // first tau with C(tau) <= 0
};

// lag grid {0} + ~points_per_decade log-spaced integers up to max_lag
std::vector<size_t> log_lag_grid(size_t max_lag, int points_per_decade = 30);

// Centered autocorrelation with the biased 1/N normalization:
// C(tau) = sum_t (x_t - mu)(x_{t-tau} - mu) / (N sigma^2). Input need not be
// pre-normalized. Requires max_lag < N; N > 10 * max_lag is advisable and
// enforced only as max_lag < N (callers own the statistical judgment).
AcfResult autocorrelation(const std::vector<double>& x, size_t max_lag,
                          int points_per_decade = 30);

// Greedy log-log segment growth over lags with C(tau) above the noise band:
// extend a window while the straight-line fit keeps R^2 >= 0.98; accept spans
// of at least half a decade and at least 6 points; restart at the breakpoint
// so adjacent regimes share it.
AcfRangeScan detect_power_law_ranges(const AcfResult& acf, double r2_min = 0.98,
                                     double min_span_decades = 0.5, size_t min_points = 6);

}  // namespace fluct
