#include "fluct/synth.hpp"

#include <cmath>
#include <complex>
#include <stdexcept>

#include "fluct/fft.hpp"
#include "fluct/rng.hpp"

namespace fluct {

namespace {

void require(bool ok, const std::string& msg) {
    if (!ok) throw std::invalid_argument("generator spec: " + msg);
}

std::vector<double> gen_white(size_t n, Rng& rng) {
    std::vector<double> out(n);
    for (auto& x : out) x = rng.gauss();
    return out;
}

// fGn autocovariance gamma(k) = 0.5(|k+1|^2H - 2|k|^2H + |k-1|^2H)
double fgn_cov(double k, double two_h) {
    return 0.5 * (std::pow(std::abs(k + 1), two_h) - 2.0 * std::pow(std::abs(k), two_h) +
                  std::pow(std::abs(k - 1), two_h));
}

// Circulant embedding (Davies-Harte). The covariance row of size M = 2^(k+1)
// embeds gamma(0..2^k); its FFT eigenvalues are nonnegative for fGn, so the
// synthesized sequence has the exact target covariance.
std::vector<double> gen_fgn(size_t n, double H, Rng& rng) {
    size_t k = 1;
    while ((size_t{1} << k) + 1 < n) ++k;
    size_t half = size_t{1} << k;  // M/2
    size_t M = half << 1;
    double two_h = 2.0 * H;

    std::vector<std::complex<double>> c(M);
    for (size_t j = 0; j <= half; ++j) c[j] = fgn_cov(static_cast<double>(j), two_h);
    for (size_t j = half + 1; j < M; ++j) c[j] = c[M - j];
    fft_pow2(c, -1);

    std::vector<double> lam(M);
    for (size_t j = 0; j < M; ++j) {
        double v = c[j].real();
        if (v < -1e-8) throw std::runtime_error("fgn embedding produced a negative eigenvalue");
        lam[j] = v < 0 ? 0.0 : v;
    }

    std::vector<std::complex<double>> V(M);
    double mscale = static_cast<double>(M);
    V[0] = std::sqrt(lam[0] / mscale) * rng.gauss();
    V[half] = std::sqrt(lam[half] / mscale) * rng.gauss();
    for (size_t j = 1; j < half; ++j) {
        double a = rng.gauss();
        double b = rng.gauss();
        std::complex<double> z(a, b);
        V[j] = std::sqrt(lam[j] / (2.0 * mscale)) * z;
        V[M - j] = std::conj(V[j]);
    }
    fft_pow2(V, -1);
    std::vector<double> out(n);
    for (size_t i = 0; i < n; ++i) out[i] = V[i].real();
    return out;
}

std::vector<double> gen_cascade(double p, int levels) {
    std::vector<double> w{1.0};
    for (int l = 0; l < levels; ++l) {
        std::vector<double> next(w.size() * 2);
        for (size_t i = 0; i < w.size(); ++i) {
            next[2 * i] = w[i] * p;
            next[2 * i + 1] = w[i] * (1.0 - p);
        }
        w.swap(next);
    }
    return w;
}

std::vector<double> gen_pareto(size_t n, double gamma, Rng& rng) {
    std::vector<double> out(n);
    for (auto& x : out) x = std::pow(rng.uniform_pos(), -1.0 / gamma);
    return out;
}

std::vector<double> gen_ar1(size_t n, double phi, Rng& rng) {
    std::vector<double> out(n);
    double x = rng.gauss() / std::sqrt(1.0 - phi * phi);  // stationary start
    for (size_t i = 0; i < n; ++i) {
        out[i] = x;
        x = phi * x + rng.gauss();
    }
    return out;
}

}  // namespace

double cascade_hq(double p, double q) {
    if (q == 0) throw std::invalid_argument("cascade_hq: q = 0 has no closed form here");
    return 1.0 / q - std::log2(std::pow(p, q) + std::pow(1.0 - p, q)) / q;
}

const char* kind_name(GeneratorKind k) {
    switch (k) {
        case GeneratorKind::gaussian_white: return "gaussian_white";
        case GeneratorKind::fgn: return "fgn";
        case GeneratorKind::binomial_cascade: return "binomial_cascade";
        case GeneratorKind::pareto_tail: return "pareto_tail";
        case GeneratorKind::ar1: return "ar1";
        case GeneratorKind::power_coupled: return "power_coupled";
    }
    throw std::invalid_argument("unknown generator kind");
}

GeneratorSpec GeneratorSpec::parse_kind(const std::string& name) {
    return parse_kind(name, GeneratorSpec{});
}

GeneratorSpec GeneratorSpec::parse_kind(const std::string& name, const GeneratorSpec& base) {
    for (auto k : {GeneratorKind::gaussian_white, GeneratorKind::fgn,
                   GeneratorKind::binomial_cascade, GeneratorKind::pareto_tail,
                   GeneratorKind::ar1, GeneratorKind::power_coupled}) {
        if (name == kind_name(k)) {
            GeneratorSpec out = base;
            out.kind = k;
            return out;
        }
    }
    throw std::invalid_argument("unknown generator kind '" + name + "'");
}

Generated generate(const GeneratorSpec& spec) {
    Generated out;
    Rng rng(spec.seed);
    switch (spec.kind) {
        case GeneratorKind::gaussian_white:
            require(spec.length > 0, "length must be positive");
            out.values = gen_white(spec.length, rng);
            return out;
        case GeneratorKind::fgn:
            require(spec.length > 0, "length must be positive");
            require(spec.hurst > 0.0 && spec.hurst < 1.0, "H must lie in (0,1)");
            out.values = gen_fgn(spec.length, spec.hurst, rng);
            return out;
        case GeneratorKind::binomial_cascade:
            require(spec.p > 0.5 && spec.p < 1.0, "cascade p must lie in (0.5,1)");
            require(spec.levels >= 1 && spec.levels <= 26, "cascade levels must lie in [1,26]");
            out.values = gen_cascade(spec.p, spec.levels);
            return out;
        case GeneratorKind::pareto_tail:
            require(spec.length > 0, "length must be positive");
            require(spec.gamma > 0.0, "gamma must be positive");
            out.values = gen_pareto(spec.length, spec.gamma, rng);
            return out;
        case GeneratorKind::ar1:
            require(spec.length > 0, "length must be positive");
            require(std::abs(spec.phi) < 1.0, "|phi| must be < 1");
            out.values = gen_ar1(spec.length, spec.phi, rng);
            return out;
        case GeneratorKind::power_coupled: {
            require(spec.length > 0, "length must be positive");
            require(spec.alpha_true > 0.0, "alpha_true must be positive");
            require(spec.noise >= 0.0, "noise must be nonnegative");
            out.values.resize(spec.length);
            out.secondary.resize(spec.length);
            // v spans three decades uniformly in log so every cell is populated
            for (size_t i = 0; i < spec.length; ++i) {
                double v = std::pow(10.0, -1.0 + 3.0 * rng.uniform());
                double r = std::pow(v, spec.alpha_true);
                if (spec.noise > 0) r *= std::abs(1.0 + spec.noise * rng.gauss());
                out.values[i] = v;
                out.secondary[i] = r;
            }
            return out;
        }
    }
    throw std::invalid_argument("unknown generator kind");
}

}  // namespace fluct
