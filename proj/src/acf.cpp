#include "fluct/acf.hpp"

#include <cmath>
#include <stdexcept>

#include "fluct/fit.hpp"

namespace fluct {

std::vector<size_t> log_lag_grid(size_t max_lag, int points_per_decade) {
    if (points_per_decade <= 0) throw std::invalid_argument("points_per_decade must be positive");
    std::vector<size_t> lags{0};
    int k = 0;
    while (true) {
        double v = std::pow(10.0, static_cast<double>(k) / points_per_decade);
        auto lag = static_cast<size_t>(std::llround(v));
        if (lag > max_lag) break;
        if (lag != lags.back()) lags.push_back(lag);
        ++k;
    }
    return lags;
}

AcfResult autocorrelation(const std::vector<double>& x, size_t max_lag, int points_per_decade) {
    const size_t n = x.size();
    if (n < 2) throw std::invalid_argument("autocorrelation: need at least 2 points");
    if (max_lag >= n) throw std::invalid_argument("autocorrelation: max_lag must be < N");

    double mu = 0;
    for (double v : x) mu += v;
    mu /= static_cast<double>(n);
    double var = 0;
    for (double v : x) var += (v - mu) * (v - mu);
    var /= static_cast<double>(n);
    if (var == 0) throw std::runtime_error("autocorrelation: zero-variance input");

    AcfResult acf;
    acf.n = n;
    acf.noise_level = 1.96 / std::sqrt(static_cast<double>(n));
    acf.lags = log_lag_grid(max_lag, points_per_decade);
    acf.values.reserve(acf.lags.size());
    for (size_t lag : acf.lags) {
        double s = 0;
        for (size_t t = lag; t < n; ++t) s += (x[t] - mu) * (x[t - lag] - mu);
        acf.values.push_back(s / (static_cast<double>(n) * var));
    }
    return acf;
}

AcfRangeScan detect_power_law_ranges(const AcfResult& acf, double r2_min,
                                     double min_span_decades, size_t min_points) {
    AcfRangeScan scan;
    for (size_t i = 0; i < acf.lags.size(); ++i) {
        if (acf.lags[i] == 0) continue;
        if (scan.first_insignificant_lag == 0 && acf.values[i] < acf.noise_level)
            scan.first_insignificant_lag = acf.lags[i];
        if (scan.first_zero_crossing == 0 && acf.values[i] <= 0)
            scan.first_zero_crossing = acf.lags[i];
    }

    // candidate points: positive, significant, tau >= 1
    std::vector<double> lx, ly;
    for (size_t i = 0; i < acf.lags.size(); ++i) {
        if (acf.lags[i] == 0) continue;
        if (acf.values[i] <= acf.noise_level) continue;
        lx.push_back(std::log10(static_cast<double>(acf.lags[i])));
        ly.push_back(std::log10(acf.values[i]));
    }

    const size_t m = lx.size();
    size_t i = 0;
    while (i + min_points <= m) {
        size_t best_end = 0;  // exclusive
        double best_slope = 0, best_r2 = 0;
        size_t j = i + min_points;
        while (j <= m) {
            LinearFit f = linear_fit(lx.data() + i, ly.data() + i, j - i);
            if (f.r2 < r2_min) break;
            best_end = j;
            best_slope = f.slope;
            best_r2 = f.r2;
            ++j;
        }
        if (best_end > 0 && lx[best_end - 1] - lx[i] >= min_span_decades) {
            PowerLawRange r;
            r.tau_lo = std::pow(10.0, lx[i]);
            r.tau_hi = std::pow(10.0, lx[best_end - 1]);
            r.slope = best_slope;
            r.r2 = best_r2;
            r.n_points = best_end - i;
            scan.ranges.push_back(r);
            if (best_end >= m) break;
            i = best_end - 1;  // the breakpoint seeds the next range
        } else {
            ++i;
        }
    }
    return scan;
}

}  // namespace fluct
