#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace fluct {

enum class GeneratorKind {
    gaussian_white,
    fgn,              // fractional Gaussian noise, exact autocovariance
    binomial_cascade, // deterministic multiplicative measure
    pareto_tail,
    ar1,
    power_coupled,    // (v, |r|) pairs with |r| = v^alpha_true * |1 + noise*eta|
};

struct GeneratorSpec {
    GeneratorKind kind = GeneratorKind::gaussian_white;
    size_t length = 0;
    uint64_t seed = 0;
    double hurst = 0.5;       // fgn
    double p = 0.6;           // binomial_cascade, in (0.5, 1)
    int levels = 16;          // binomial_cascade; output length is 2^levels
    double gamma = 3.0;       // pareto_tail exponent, > 0
    double phi = 0.5;         // ar1 coefficient, |phi| < 1
    double alpha_true = 1.0;  // power_coupled
    double noise = 0.0;       // power_coupled multiplicative noise amplitude

    static GeneratorSpec parse_kind(const std::string& name);
    static GeneratorSpec parse_kind(const std::string& name, const GeneratorSpec& base);
};

struct Generated {
    std::vector<double> values;    // the series (v for power_coupled)
    std::vector<double> secondary; // |r| for power_coupled, empty otherwise
};

// Deterministic under spec.seed: the same spec always reproduces the same
// bytes. Analytic targets per kind:
//   fgn(H):              h(q) ~ H for all q
//   binomial_cascade(p): h(q) = 1/q - log2(p^q + (1-p)^q)/q
//   pareto_tail(gamma):  P(X > x) = x^-gamma, x >= 1
//   ar1(phi):            C(tau) = phi^tau
Generated generate(const GeneratorSpec& spec);

// closed-form cascade exponent (q != 0)
double cascade_hq(double p, double q);

const char* kind_name(GeneratorKind k);

}  // namespace fluct
