#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fluct/acf.hpp"
#include "fluct/synth.hpp"

using namespace fluct;

namespace {

double mean_of(const std::vector<double>& v) {
    return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double var_of(const std::vector<double>& v) {
    double m = mean_of(v), ss = 0;
    for (double x : v) ss += (x - m) * (x - m);
    return ss / static_cast<double>(v.size());
}

}  // namespace

TEST_CASE("identical specs reproduce identical series") {
    GeneratorSpec gs = GeneratorSpec::parse_kind("ar1");
    gs.length = 1000;
    gs.seed = 7;
    gs.phi = 0.5;
    Generated g1 = generate(gs);
    Generated g2 = generate(gs);
    REQUIRE(g1.values.size() == 1000);
    CHECK(g1.values == g2.values);  // bitwise

    gs.seed = 8;
    Generated g3 = generate(gs);
    CHECK(g1.values != g3.values);
}

TEST_CASE("kind names round-trip and unknown names are rejected") {
    for (const char* name : {"gaussian_white", "fgn", "binomial_cascade", "pareto_tail", "ar1",
                             "power_coupled"}) {
        GeneratorSpec gs = GeneratorSpec::parse_kind(name);
        CHECK(kind_name(gs.kind) == std::string(name));
    }
    CHECK_THROWS_AS(GeneratorSpec::parse_kind("brownian"), std::invalid_argument);
}

TEST_CASE("parameter validation rejects out-of-range specs") {
    GeneratorSpec gs;
    gs.kind = GeneratorKind::fgn;
    gs.length = 100;
    gs.hurst = 1.5;
    CHECK_THROWS_AS(generate(gs), std::invalid_argument);
    gs.hurst = 0.0;
    CHECK_THROWS_AS(generate(gs), std::invalid_argument);

    gs = GeneratorSpec{};
    gs.kind = GeneratorKind::binomial_cascade;
    gs.p = 0.5;  // must exceed one half
    CHECK_THROWS_AS(generate(gs), std::invalid_argument);
    gs.p = 1.0;
    CHECK_THROWS_AS(generate(gs), std::invalid_argument);

    gs = GeneratorSpec{};
    gs.kind = GeneratorKind::ar1;
    gs.length = 10;
    gs.phi = 1.0;
    CHECK_THROWS_AS(generate(gs), std::invalid_argument);

    gs = GeneratorSpec{};
    gs.kind = GeneratorKind::pareto_tail;
    gs.length = 10;
    gs.gamma = 0.0;
    CHECK_THROWS_AS(generate(gs), std::invalid_argument);

    gs = GeneratorSpec{};
    gs.kind = GeneratorKind::gaussian_white;
    gs.length = 0;
    CHECK_THROWS_AS(generate(gs), std::invalid_argument);
}

TEST_CASE("white noise has unit moments") {
    GeneratorSpec gs;
    gs.kind = GeneratorKind::gaussian_white;
    gs.length = 200000;
    gs.seed = 17;
    Generated g = generate(gs);
    CHECK(std::fabs(mean_of(g.values)) < 0.01);
    CHECK(var_of(g.values) == doctest::Approx(1.0).epsilon(0.02));
}

TEST_CASE("cascade is a deterministic unit-mass measure of length 2^levels") {
    GeneratorSpec gs;
    gs.kind = GeneratorKind::binomial_cascade;
    gs.levels = 12;
    gs.p = 0.6;
    Generated g = generate(gs);
    REQUIRE(g.values.size() == 4096);
    CHECK(std::accumulate(g.values.begin(), g.values.end(), 0.0) == doctest::Approx(1.0));
    double mx = 0;
    for (double v : g.values) {
        CHECK(v > 0);
        mx = std::max(mx, v);
    }
    CHECK(mx == doctest::Approx(std::pow(0.6, 12)));  // heaviest dyadic cell
    Generated again = generate(gs);
    CHECK(g.values == again.values);
}

TEST_CASE("cascade closed-form exponents decrease in q") {
    CHECK(cascade_hq(0.6, 2.0) ==
          doctest::Approx(0.5 - std::log2(0.36 + 0.16) / 2.0).epsilon(1e-12));
    CHECK(cascade_hq(0.6, -4.0) > cascade_hq(0.6, -1.0));
    CHECK(cascade_hq(0.6, -1.0) > cascade_hq(0.6, 1.0));
    CHECK(cascade_hq(0.6, 1.0) > cascade_hq(0.6, 4.0));
    // p -> 0.5 collapses to the monofractal value at every q
    for (double q : {-3.0, 1.0, 2.5}) CHECK(cascade_hq(0.500001, q) == doctest::Approx(1.0).epsilon(1e-4));
}

TEST_CASE("pareto samples start at one with the requested tail") {
    GeneratorSpec gs;
    gs.kind = GeneratorKind::pareto_tail;
    gs.length = 100000;
    gs.seed = 5;
    gs.gamma = 3.0;
    Generated g = generate(gs);
    double mn = 1e300;
    for (double v : g.values) mn = std::min(mn, v);
    CHECK(mn >= 1.0);
    // median of P(X>x)=x^-3 is 2^(1/3)
    std::vector<double> sorted = g.values;
    std::sort(sorted.begin(), sorted.end());
    CHECK(sorted[sorted.size() / 2] == doctest::Approx(std::pow(2.0, 1.0 / 3.0)).epsilon(0.02));
}

TEST_CASE("ar1 matches its geometric autocorrelation") {
    GeneratorSpec gs;
    gs.kind = GeneratorKind::ar1;
    gs.length = 300000;
    gs.seed = 23;
    gs.phi = 0.7;
    Generated g = generate(gs);
    AcfResult acf = autocorrelation(g.values, 12);
    for (std::size_t i = 0; i < acf.lags.size(); ++i) {
        double tau = static_cast<double>(acf.lags[i]);
        if (tau < 1 || tau > 10) continue;
        CHECK(acf.values[i] == doctest::Approx(std::pow(0.7, tau)).epsilon(0.03));
    }
    // stationary variance 1/(1-phi^2)
    CHECK(var_of(g.values) == doctest::Approx(1.0 / (1.0 - 0.49)).epsilon(0.05));
}

TEST_CASE("long-memory noise matches the analytic autocovariance at short lags") {
    GeneratorSpec gs;
    gs.kind = GeneratorKind::fgn;
    gs.length = 262144;
    gs.seed = 31;
    gs.hurst = 0.7;
    Generated g = generate(gs);
    CHECK(var_of(g.values) == doctest::Approx(1.0).epsilon(0.03));
    AcfResult acf = autocorrelation(g.values, 8);
    auto rho_fgn = [](double h, double k) {
        return 0.5 * (std::pow(k + 1, 2 * h) - 2 * std::pow(k, 2 * h) + std::pow(k - 1, 2 * h));
    };
    for (std::size_t i = 0; i < acf.lags.size(); ++i) {
        double tau = static_cast<double>(acf.lags[i]);
        if (tau < 1) continue;
        CHECK(acf.values[i] == doctest::Approx(rho_fgn(0.7, tau)).epsilon(0.12));
    }
}

TEST_CASE("coupled pairs obey the power law exactly without noise") {
    GeneratorSpec gs;
    gs.kind = GeneratorKind::power_coupled;
    gs.length = 5000;
    gs.seed = 41;
    gs.alpha_true = 0.5;
    gs.noise = 0.0;
    Generated g = generate(gs);
    REQUIRE(g.secondary.size() == g.values.size());
    for (std::size_t i = 0; i < g.values.size(); ++i) {
        CHECK(g.values[i] > 0);
        CHECK(g.secondary[i] == doctest::Approx(std::pow(g.values[i], 0.5)).epsilon(1e-12));
    }

    gs.noise = 0.2;
    Generated gn = generate(gs);
    double dev = 0;
    for (std::size_t i = 0; i < gn.values.size(); ++i)
        dev = std::max(dev, std::fabs(gn.secondary[i] / std::pow(gn.values[i], 0.5) - 1.0));
    CHECK(dev > 0.01);  // noise actually applied
}
