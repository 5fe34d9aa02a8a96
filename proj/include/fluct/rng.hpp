#pragma once

#include <cmath>
#include <cstdint>
#include <random>

namespace fluct {

// Deterministic random source. mt19937_64 has a fully specified bit stream,
// and the double mappings below avoid std::*_distribution, whose output is
// implementation-defined; the same seed therefore reproduces the same series
// everywhere.
class Rng {
  public:
    explicit Rng(uint64_t seed) : gen_(seed) {}

    // uniform on [0, 1)
    double uniform() { return static_cast<double>(gen_() >> 11) * 0x1.0p-53; }

    // uniform on (0, 1] (safe under log and negative powers)
    double uniform_pos() { return 1.0 - uniform(); }

    // standard normal, Box-Muller; consumes exactly two uniforms per pair
    double gauss() {
        if (have_spare_) {
            have_spare_ = false;
            return spare_;
        }
        double u = uniform_pos();
        double v = uniform();
        double m = std::sqrt(-2.0 * std::log(u));
        constexpr double two_pi = 6.283185307179586476925286766559;
        spare_ = m * std::sin(two_pi * v);
        have_spare_ = true;
        return m * std::cos(two_pi * v);
    }

    uint64_t next_u64() { return gen_(); }

    // Fisher-Yates
    template <typename T>
    void shuffle(std::vector<T>& v) {
        for (size_t i = v.size(); i > 1; --i) {
            size_t j = static_cast<size_t>(next_u64() % i);
            std::swap(v[i - 1], v[j]);
        }
    }

  private:
    std::mt19937_64 gen_;
    double spare_ = 0.0;
    bool have_spare_ = false;
};

}  // namespace fluct
