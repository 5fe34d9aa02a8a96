#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace fluct {

struct LinearFit {
    double slope = 0.0;
    double intercept = 0.0;
    double r2 = 0.0;
    size_t n = 0;
};

// Ordinary least squares y = a + b x. Requires >= 2 points and non-degenerate x.
inline LinearFit linear_fit(const double* x, const double* y, size_t n) {
    if (n < 2) throw std::invalid_argument("linear_fit: need at least 2 points");
    double xm = 0, ym = 0;
    for (size_t i = 0; i < n; ++i) { xm += x[i]; ym += y[i]; }
    xm /= static_cast<double>(n);
    ym /= static_cast<double>(n);
    double sxx = 0, sxy = 0, syy = 0;
    for (size_t i = 0; i < n; ++i) {
        double dx = x[i] - xm, dy = y[i] - ym;
        sxx += dx * dx;
        sxy += dx * dy;
        syy += dy * dy;
    }
    if (sxx <= 0) throw std::invalid_argument("linear_fit: degenerate abscissa");
    LinearFit f;
    f.slope = sxy / sxx;
    f.intercept = ym - f.slope * xm;
    f.n = n;
    double ss_res = syy - f.slope * sxy;  // residual SS after projection
    f.r2 = syy > 0 ? 1.0 - ss_res / syy : 1.0;
    return f;
}

inline LinearFit linear_fit(const std::vector<double>& x, const std::vector<double>& y) {
    if (x.size() != y.size()) throw std::invalid_argument("linear_fit: length mismatch");
    return linear_fit(x.data(), y.data(), x.size());
}

}  // namespace fluct
