// Independent reference implementation used only by tests: plain normal
// equations on centered monomials (no orthonormal basis, no shared code with
// the library's detrender beyond the segment layout contract).
#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <vector>

namespace naive {

// Solve A x = b by Gaussian elimination with partial pivoting.
inline std::vector<double> solve(std::vector<std::vector<double>> A, std::vector<double> b) {
    const std::size_t n = b.size();
    for (std::size_t col = 0; col < n; ++col) {
        std::size_t piv = col;
        for (std::size_t r = col + 1; r < n; ++r)
            if (std::fabs(A[r][col]) > std::fabs(A[piv][col])) piv = r;
        std::swap(A[piv], A[col]);
        std::swap(b[piv], b[col]);
        if (A[col][col] == 0.0) throw std::runtime_error("singular normal equations");
        for (std::size_t r = col + 1; r < n; ++r) {
            double f = A[r][col] / A[col][col];
            for (std::size_t c = col; c < n; ++c) A[r][c] -= f * A[col][c];
            b[r] -= f * b[col];
        }
    }
    std::vector<double> x(n, 0.0);
    for (std::size_t i = n; i-- > 0;) {
        double s = b[i];
        for (std::size_t c = i + 1; c < n; ++c) s -= A[i][c] * x[c];
        x[i] = s / A[i][i];
    }
    return x;
}

// Least-squares degree-m polynomial residuals of y over t = k - (s-1)/2.
inline std::vector<double> poly_residuals(const std::vector<double>& y, int m) {
    const std::size_t s = y.size();
    const std::size_t dim = static_cast<std::size_t>(m) + 1;
    std::vector<std::vector<double>> A(dim, std::vector<double>(dim, 0.0));
    std::vector<double> rhs(dim, 0.0);
    const double mid = (static_cast<double>(s) - 1.0) / 2.0;
    for (std::size_t k = 0; k < s; ++k) {
        double t = static_cast<double>(k) - mid;
        std::vector<double> pw(dim, 1.0);
        for (std::size_t p = 1; p < dim; ++p) pw[p] = pw[p - 1] * t;
        for (std::size_t i = 0; i < dim; ++i) {
            rhs[i] += pw[i] * y[k];
            for (std::size_t j = 0; j < dim; ++j) A[i][j] += pw[i] * pw[j];
        }
    }
    std::vector<double> beta = solve(A, rhs);
    std::vector<double> out(s);
    for (std::size_t k = 0; k < s; ++k) {
        double t = static_cast<double>(k) - mid;
        double fit = 0.0, pw = 1.0;
        for (std::size_t p = 0; p < dim; ++p, pw *= t) fit += beta[p] * pw;
        out[k] = y[k] - fit;
    }
    return out;
}

// Signed segment covariances of the detrended profiles at scale s: same
// segment layout as the library (2*floor(n/s), second half right-flush), but
// every numerical step reimplemented from scratch.
inline std::vector<double> segment_cov(const std::vector<double>& a, const std::vector<double>& b,
                                       std::size_t s, int m) {
    const std::size_t n = a.size();
    auto prof = [](const std::vector<double>& x) {
        double mu = 0.0;
        for (double v : x) mu += v;
        mu /= static_cast<double>(x.size());
        std::vector<double> p(x.size());
        double run = 0.0;
        for (std::size_t i = 0; i < x.size(); ++i) {
            run += x[i] - mu;
            p[i] = run;
        }
        return p;
    };
    std::vector<double> pa = prof(a), pb = prof(b);
    const std::size_t half = n / s;
    std::vector<double> cov;
    for (std::size_t v = 0; v < 2 * half; ++v) {
        std::size_t lo = v < half ? v * s : n - (2 * half - v) * s;
        std::vector<double> ya(pa.begin() + lo, pa.begin() + lo + s);
        std::vector<double> yb(pb.begin() + lo, pb.begin() + lo + s);
        std::vector<double> ra = poly_residuals(ya, m);
        std::vector<double> rb = &a == &b ? ra : poly_residuals(yb, m);
        double ma = 0.0, mb = 0.0;
        for (std::size_t k = 0; k < s; ++k) { ma += ra[k]; mb += rb[k]; }
        ma /= static_cast<double>(s);
        mb /= static_cast<double>(s);
        double c = 0.0;
        for (std::size_t k = 0; k < s; ++k) c += (ra[k] - ma) * (rb[k] - mb);
        cov.push_back(c / static_cast<double>(s));
    }
    return cov;
}

// F_q(s) with the signed modulus-power convention.
inline double fq(const std::vector<double>& a, const std::vector<double>& b, std::size_t s, int m,
                 double q) {
    std::vector<double> cov = segment_cov(a, b, s, m);
    double t = 0.0;
    for (double c : cov) t += (c < 0 ? -1.0 : 1.0) * std::pow(std::fabs(c), q / 2.0);
    t /= static_cast<double>(cov.size());
    return (t < 0 ? -1.0 : 1.0) * std::pow(std::fabs(t), 1.0 / q);
}

}  // namespace naive
