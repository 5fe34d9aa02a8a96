#include "fluct/cdf.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "fluct/fit.hpp"

namespace fluct {

double EmpiricalCdf::eval(double x) const {
    // first distinct value > x; everything from there up is an exceedance
    auto it = std::upper_bound(sorted_values.begin(), sorted_values.end(), x);
    if (it == sorted_values.end()) return 0.0;
    if (it == sorted_values.begin()) return 1.0;
    size_t idx = static_cast<size_t>(it - sorted_values.begin()) - 1;
    return static_cast<double>(exceed_counts[idx]) / static_cast<double>(n);
}

EmpiricalCdf empirical_cdf(const std::vector<double>& values) {
    if (values.empty()) throw std::invalid_argument("empirical_cdf: empty input");
    std::vector<double> sorted = values;
    std::sort(sorted.begin(), sorted.end());

    EmpiricalCdf cdf;
    cdf.n = sorted.size();
    const double N = static_cast<double>(sorted.size());
    size_t i = 0;
    while (i < sorted.size()) {
        size_t j = i;
        while (j + 1 < sorted.size() && sorted[j + 1] == sorted[i]) ++j;
        size_t exceed = sorted.size() - (j + 1);
        cdf.sorted_values.push_back(sorted[i]);
        cdf.exceed_counts.push_back(exceed);
        cdf.survival.push_back(exceed > 0 ? static_cast<double>(exceed) / N : 0.5 / N);
        i = j + 1;
    }
    return cdf;
}

namespace {

// values with multiplicity, descending, largest first
std::vector<double> top_values(const EmpiricalCdf& cdf, size_t k) {
    std::vector<double> out;
    out.reserve(k);
    for (size_t d = cdf.sorted_values.size(); d > 0 && out.size() < k; --d) {
        size_t below = d >= 2 ? cdf.exceed_counts[d - 2] : cdf.n;  // count(> next lower) = multiplicity cum
        size_t count_here = below - cdf.exceed_counts[d - 1];
        for (size_t c = 0; c < count_here && out.size() < k; ++c)
            out.push_back(cdf.sorted_values[d - 1]);
    }
    return out;
}

double hill_exponent(const std::vector<double>& top, double& xmin_out) {
    size_t k = top.size();
    double xmin = top.back();
    if (xmin <= 0) throw std::runtime_error("tail fit: tail reaches non-positive values");
    double sum = 0;
    for (size_t i = 0; i + 1 < k; ++i) sum += std::log(top[i] / xmin);
    if (sum <= 0) throw std::runtime_error("tail fit: degenerate tail (all values equal)");
    xmin_out = xmin;
    return static_cast<double>(k - 1) / sum;
}

}  // namespace

TailFit fit_tail_exponent(const EmpiricalCdf& cdf, double tail_fraction) {
    if (!(tail_fraction > 0) || tail_fraction > 1)
        throw std::invalid_argument("tail_fraction must lie in (0,1]");
    size_t k = static_cast<size_t>(std::floor(tail_fraction * static_cast<double>(cdf.n)));
    if (k < 50)
        throw std::runtime_error("tail fit refused: " + std::to_string(k) +
                                 " tail points, need >= 50");

    TailFit fit;
    auto top = top_values(cdf, k);
    fit.exponent = hill_exponent(top, fit.xmin);
    fit.n_tail = k;
    fit.stderr_ = fit.exponent / std::sqrt(static_cast<double>(k - 1));
    fit.levy_regime = fit.exponent < 2.0;

    // stability: halving the fraction should not move a true power-law exponent
    size_t k2 = k / 2;
    if (k2 >= 50) {
        double xmin2 = 0;
        std::vector<double> top2(top.begin(), top.begin() + k2);
        double g2 = hill_exponent(top2, xmin2);
        fit.stability_drift = std::abs(g2 - fit.exponent) / fit.exponent;
        fit.non_power_law = fit.stability_drift > 0.10;
    }
    return fit;
}

StretchedExpFit fit_stretched_exponential(const EmpiricalCdf& cdf, double range_lo,
                                          double range_hi) {
    std::vector<double> xs, lnp;
    for (size_t i = 0; i < cdf.sorted_values.size(); ++i) {
        double x = cdf.sorted_values[i];
        if (x < range_lo || x > range_hi || x <= 0) continue;
        xs.push_back(x);
        lnp.push_back(std::log(cdf.survival[i]));
    }
    if (xs.size() < 100)
        throw std::runtime_error("stretched-exponential fit needs >= 100 points in range, got " +
                                 std::to_string(xs.size()));

    // ln(-ln P) = eta ln x - eta ln scale seeds the nonlinear refinement
    std::vector<double> lx(xs.size()), lly(xs.size());
    for (size_t i = 0; i < xs.size(); ++i) {
        lx[i] = std::log(xs[i]);
        lly[i] = std::log(-lnp[i]);
    }
    LinearFit lin = linear_fit(lx, lly);
    double eta = lin.slope;
    double lnscale = -lin.intercept / lin.slope;
    if (!(eta > 0)) throw std::runtime_error("stretched-exponential fit: non-positive initial eta");

    // Gauss-Newton on residuals r_i = lnp_i + exp(eta (lx_i - lnscale))
    StretchedExpFit out;
    const int max_iter = 100;
    for (int it = 0; it < max_iter; ++it) {
        double a11 = 0, a12 = 0, a22 = 0, b1 = 0, b2 = 0;
        for (size_t i = 0; i < xs.size(); ++i) {
            double u = std::exp(eta * (lx[i] - lnscale));  // (x/scale)^eta
            double r = lnp[i] + u;
            double de = u * (lx[i] - lnscale);   // d u / d eta
            double ds = -u * eta;                // d u / d lnscale
            a11 += de * de;
            a12 += de * ds;
            a22 += ds * ds;
            b1 -= r * de;
            b2 -= r * ds;
        }
        double det = a11 * a22 - a12 * a12;
        if (det == 0) throw std::runtime_error("stretched-exponential fit: singular normal matrix");
        double step_e = (a22 * b1 - a12 * b2) / det;
        double step_s = (a11 * b2 - a12 * b1) / det;
        eta += step_e;
        lnscale += step_s;
        out.iterations = it + 1;
        if (std::abs(step_e) < 1e-12 * (1.0 + std::abs(eta)) &&
            std::abs(step_s) < 1e-12 * (1.0 + std::abs(lnscale))) {
            out.converged = true;
            break;
        }
    }
    if (!out.converged)
        throw std::runtime_error("stretched-exponential fit did not converge");
    out.eta = eta;
    out.scale = std::exp(lnscale);
    out.n_points = xs.size();
    double sse = 0;
    for (size_t i = 0; i < xs.size(); ++i) {
        double u = std::exp(eta * (lx[i] - lnscale));
        double r = lnp[i] + u;
        sse += r * r;
    }
    out.sse = sse / static_cast<double>(xs.size());
    return out;
}

EmpiricalCdf group_average_cdf(const std::vector<EmpiricalCdf>& cdfs) {
    if (cdfs.empty()) throw std::invalid_argument("group_average_cdf: empty list");
    double lo = 0, hi = 0;
    bool have = false;
    for (const auto& c : cdfs) {
        for (double v : c.sorted_values) {
            if (v <= 0) continue;
            if (!have) {
                lo = hi = v;
                have = true;
            } else {
                lo = std::min(lo, v);
                hi = std::max(hi, v);
            }
        }
    }
    if (!have) throw std::invalid_argument("group_average_cdf: no positive values");

    constexpr int kGridPoints = 200;
    EmpiricalCdf out;
    out.n = 0;
    for (const auto& c : cdfs) out.n += c.n;
    double llo = std::log10(lo), lhi = std::log10(hi);
    for (int g = 0; g < kGridPoints; ++g) {
        double x = std::pow(10.0, llo + (lhi - llo) * static_cast<double>(g) /
                                            static_cast<double>(kGridPoints - 1));
        double mean = 0;
        for (const auto& c : cdfs) mean += c.eval(x);
        mean /= static_cast<double>(cdfs.size());
        if (mean <= 0) break;  // beyond every input's maximum
        out.sorted_values.push_back(x);
        out.survival.push_back(mean);
        out.exceed_counts.push_back(0);  // counts are not meaningful for an average
    }
    return out;
}

}  // namespace fluct
