#include <cmath>
#include <stdexcept>
#include <vector>

#include "doctest.h"
#include "fluct/impact.hpp"
#include "fluct/rng.hpp"
#include "fluct/synth.hpp"

using namespace fluct;

namespace {

Generated coupled(double alpha, double noise, uint64_t seed, std::size_t n = 60000) {
    GeneratorSpec gs;
    gs.kind = GeneratorKind::power_coupled;
    gs.length = n;
    gs.seed = seed;
    gs.alpha_true = alpha;
    gs.noise = noise;
    return generate(gs);
}

ImpactConfig plain_config() {
    ImpactConfig cfg;
    cfg.top_fraction = 1.0;  // keep every point: clean moment recovery
    return cfg;
}

}  // namespace

TEST_CASE("interpolation quantiles follow the textbook convention") {
    std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    CHECK(sample_quantile(v, 0.25) == doctest::Approx(1.75));
    CHECK(sample_quantile(v, 0.5) == doctest::Approx(2.5));
    CHECK(sample_quantile(v, 0.75) == doctest::Approx(3.25));
    CHECK(sample_quantile(v, 0.0) == doctest::Approx(1.0));
    CHECK(sample_quantile(v, 1.0) == doctest::Approx(4.0));
    CHECK(sample_quantile({5.0}, 0.3) == doctest::Approx(5.0));
    CHECK(std::isnan(sample_quantile({}, 0.5)));
    CHECK_THROWS_AS(sample_quantile(v, -0.1), std::invalid_argument);
}

TEST_CASE("scatter keeps pairs and marks volume quartiles") {
    std::vector<double> r{0.1, 0.2, 0.3, 0.4};
    std::vector<double> v{1.0, 2.0, 3.0, 4.0};
    ScatterResult s = scatter(r, v);
    CHECK(s.volume == v);
    CHECK(s.returns == r);
    CHECK(s.v_q25 == doctest::Approx(1.75));
    CHECK(s.v_q50 == doctest::Approx(2.5));
    CHECK(s.v_q75 == doctest::Approx(3.25));
    ScatterResult empty = scatter({}, {});
    CHECK(std::isnan(empty.v_q25));
    CHECK_THROWS_AS(scatter({0.1}, {1.0, 2.0}), std::invalid_argument);
}

TEST_CASE("conditional slope recovers kappa times alpha without noise") {
    for (double alpha : {0.5, 1.0}) {
        Generated g = coupled(alpha, 0.0, 101);
        auto curves = conditional_impact(g.secondary, g.values, plain_config());
        REQUIRE(curves.size() == 4);
        for (const ImpactCurve& c : curves) {
            CHECK(std::fabs(c.fit_slope - c.kappa * alpha) < 0.02);
            CHECK(c.fit_r2 > 0.999);
            CHECK(c.n_fit_bins >= 2);
        }
    }
}

TEST_CASE("conditional slope survives twenty percent multiplicative noise") {
    for (double alpha : {0.5, 1.0}) {
        Generated g = coupled(alpha, 0.2, 202);
        auto curves = conditional_impact(g.secondary, g.values, plain_config());
        for (const ImpactCurve& c : curves)
            CHECK(std::fabs(c.fit_slope - c.kappa * alpha) < 0.1);
    }
}

TEST_CASE("cells, counts and the fit mask are shared across kappa") {
    Generated g = coupled(1.0, 0.1, 303);
    auto curves = conditional_impact(g.secondary, g.values, plain_config());
    for (std::size_t k = 1; k < curves.size(); ++k) {
        CHECK(curves[k].v_centers == curves[0].v_centers);
        CHECK(curves[k].counts == curves[0].counts);
        CHECK(curves[k].in_fit == curves[0].in_fit);
    }
    // centers are geometric, hence ascending
    for (std::size_t i = 1; i < curves[0].v_centers.size(); ++i)
        CHECK(curves[0].v_centers[i] > curves[0].v_centers[i - 1]);
    // the automatic grid starts at the 25th volume percentile, so keep-all
    // retains about three quarters of the sample
    std::size_t total = 0;
    for (std::size_t c : curves[0].counts) total += c;
    CHECK(total <= g.values.size());
    CHECK(total >= (7 * g.values.size()) / 10);
}

TEST_CASE("top-fraction filtering keeps the largest returns per cell") {
    Generated g = coupled(1.0, 0.0, 404, 20000);
    ImpactConfig keep_all = plain_config();
    ImpactConfig top10 = plain_config();
    top10.top_fraction = 0.1;
    auto full = conditional_impact(g.secondary, g.values, keep_all);
    auto top = conditional_impact(g.secondary, g.values, top10);
    // conditional means over the top decile dominate the overall means
    for (std::size_t i = 0; i < full[0].means.size(); ++i) {
        if (full[0].counts[i] == 0 || top[0].counts[i] == 0) continue;
        CHECK(top[0].means[i] >= full[0].means[i]);
        CHECK(top[0].counts[i] <= (full[0].counts[i] + 9) / 10);
    }
}

TEST_CASE("shrinking the kept fraction exposes the tail coupling") {
    // 12% of points follow r = v (1 + 0.1 |eta|); the 88% bulk is sublinear
    // and blurred, so the full-sample slope is biased low and the top decile
    // restores it
    Rng rng(55);
    std::size_t n = 120000;
    std::vector<double> v(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::pow(10.0, -1.0 + 3.0 * rng.uniform());
        if (rng.uniform() < 0.12) {
            r[i] = v[i] * (1.0 + 0.1 * std::fabs(rng.gauss()));
        } else {
            r[i] = std::pow(v[i], 0.4) * 0.25 * std::fabs(1.0 + 0.5 * rng.gauss());
        }
    }
    ImpactConfig cfg;
    cfg.kappa_grid = {1.0};
    auto fit_resid = [&](double p) {
        ImpactConfig c = cfg;
        c.top_fraction = p;
        auto curves = conditional_impact(r, v, c);
        // mean squared deviation of the unit-slope law in log-log
        const ImpactCurve& cu = curves[0];
        double intercept = 0;
        std::size_t m = 0;
        for (std::size_t i = 0; i < cu.v_centers.size(); ++i)
            if (cu.in_fit[i]) { intercept += std::log10(cu.means[i]) - std::log10(cu.v_centers[i]); ++m; }
        intercept /= static_cast<double>(m);
        double ss = 0;
        for (std::size_t i = 0; i < cu.v_centers.size(); ++i)
            if (cu.in_fit[i]) {
                double d = std::log10(cu.means[i]) - std::log10(cu.v_centers[i]) - intercept;
                ss += d * d;
            }
        return ss / static_cast<double>(m);
    };
    double resid_half = fit_resid(0.5);
    double resid_tenth = fit_resid(0.1);
    CHECK(resid_tenth < 0.1 * resid_half);  // order-of-magnitude improvement

    ImpactConfig top = cfg;
    top.top_fraction = 0.1;
    auto curves = conditional_impact(r, v, top);
    CHECK(std::fabs(curves[0].fit_slope - 1.0) < 0.05);
}

TEST_CASE("model selection ranks the linearizing kappa first") {
    // alpha = 0.5: E[|r|^kappa | v] = v^(kappa/2), linear exactly at kappa = 2
    Generated g = coupled(0.5, 0.1, 606);
    auto curves = conditional_impact(g.secondary, g.values, plain_config());
    ModelSelectionReport report = model_selection(curves);
    REQUIRE(report.ranking.size() == 4);
    CHECK(report.ranking[0].kappa == 2.0);
    CHECK(report.ranking[0].linearity_r2 > 0.99);
    CHECK(!report.ranking[0].rejected);
    // r2 ordering is descending
    for (std::size_t i = 1; i < report.ranking.size(); ++i)
        CHECK(report.ranking[i].linearity_r2 <= report.ranking[i - 1].linearity_r2);
}

TEST_CASE("uncoupled noise rejects every kappa") {
    Rng rng(77);
    std::size_t n = 50000;
    std::vector<double> v(n), r(n);
    for (std::size_t i = 0; i < n; ++i) {
        v[i] = std::pow(10.0, -1.0 + 3.0 * rng.uniform());
        r[i] = std::fabs(rng.gauss());  // no volume dependence at all
    }
    auto curves = conditional_impact(r, v, plain_config());
    ModelSelectionReport report = model_selection(curves);
    for (const KappaRank& k : report.ranking) {
        CHECK(k.rejected);
        CHECK(k.linearity_r2 < 0.9);
    }
}

TEST_CASE("occupancy gate drops sparse cells and can empty the fit") {
    Generated g = coupled(1.0, 0.0, 808, 200);
    ImpactConfig cfg = plain_config();
    cfg.min_bin_count = 1000;  // nothing survives
    CHECK_THROWS_WITH_AS(conditional_impact(g.secondary, g.values, cfg),
                         doctest::Contains("cells"), std::runtime_error);
}

TEST_CASE("explicit cell edges and fit clamps are honored") {
    Generated g = coupled(1.0, 0.0, 909, 30000);
    ImpactConfig cfg = plain_config();
    cfg.cell_edges = {0.1, 1.0, 10.0, 100.0};
    auto curves = conditional_impact(g.secondary, g.values, cfg);
    REQUIRE(curves[0].v_centers.size() == 3);
    CHECK(curves[0].v_centers[0] == doctest::Approx(std::sqrt(0.1 * 1.0)));
    CHECK(curves[0].v_centers[1] == doctest::Approx(std::sqrt(10.0)));

    ImpactConfig clamp = plain_config();
    clamp.fit_v_lo = 0.5;
    clamp.fit_v_hi = 50.0;
    auto clamped = conditional_impact(g.secondary, g.values, clamp);
    for (std::size_t i = 0; i < clamped[0].v_centers.size(); ++i)
        if (clamped[0].in_fit[i]) {
            CHECK(clamped[0].v_centers[i] >= 0.5);
            CHECK(clamped[0].v_centers[i] <= 50.0);
        }
}

TEST_CASE("impact configuration validation") {
    ImpactConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    ImpactConfig bad = cfg;
    bad.top_fraction = 0.0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.top_fraction = 1.5;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.kappa_grid = {0.5, -1.0};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.cell_edges = {1.0, 1.0, 2.0};
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
    bad = cfg;
    bad.cells_per_decade = 0;
    CHECK_THROWS_AS(validate(bad), std::invalid_argument);
}
