#pragma once

#include <cstddef>
#include <vector>

namespace fluct {

// Survival function of a sample. survival[i] = #{x_j > sorted_values[i]} / N,
// so ties share the lower value; the maximal distinct value would get 0 and is
// stored at 1/(2N) instead, keeping the stored function strictly decreasing,
// positive, and usable on log axes. Exact exceedance counts are kept for
// queries.
struct EmpiricalCdf {
    std::vector<double> sorted_values;   // distinct, ascending
    std::vector<double> survival;        // per distinct value, in (0, 1]
    std::vector<size_t> exceed_counts;   // #{x_j > value}, exact
    size_t n = 0;

    // exact empirical P(X > x) for arbitrary x (0 beyond the maximum)
    double eval(double x) const;
};

struct TailFit {
    double exponent = 0;        // gamma
    double stderr_ = 0;         // asymptotic gamma / sqrt(k-1)
    double xmin = 0;            // smallest retained value
    size_t n_tail = 0;
    bool levy_regime = false;   // exponent < 2
    bool non_power_law = false; // stability check tripped
    double stability_drift = 0; // |gamma(f/2) - gamma(f)| / gamma(f)
};

struct StretchedExpFit {
    double eta = 0;
    double scale = 0;
    double sse = 0;       // mean squared residual of log-survival
    size_t n_points = 0;
    bool converged = false;
    int iterations = 0;
};

// pre: N >= 1 (a single distinct point is allowed for constant input)
EmpiricalCdf empirical_cdf(const std::vector<double>& values);

// Hill / maximum-likelihood exponent over the top tail_fraction of the sample.
// Refuses when fewer than 50 tail points. The stability check re-estimates at
// half the fraction; relative drift above 10% flags non_power_law.
TailFit fit_tail_exponent(const EmpiricalCdf& cdf, double tail_fraction = 0.01);

// Least-squares fit of log survival to -(x/scale)^eta over values in
// [range_lo, range_hi]. Initialized by the double-log linearization, refined
// by Gauss-Newton; throws if >= 100 points are unavailable or the refinement
// fails to converge.
StretchedExpFit fit_stretched_exponential(const EmpiricalCdf& cdf, double range_lo,
                                          double range_hi);

// Vertical average: mean survival across inputs on a shared 200-point
// log-spaced grid spanning all positive values. Trailing all-zero grid points
// are dropped so survival stays positive.
EmpiricalCdf group_average_cdf(const std::vector<EmpiricalCdf>& cdfs);

}  // namespace fluct
