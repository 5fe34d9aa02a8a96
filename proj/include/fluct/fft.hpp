#pragma once

#include <cmath>
#include <complex>
#include <stdexcept>
#include <vector>

namespace fluct {

// In-place iterative radix-2 FFT (forward: sign = -1). Only power-of-two sizes
// are ever needed here (circulant embedding pads to 2^k), so a dependency-free
// transform keeps the generators bitwise reproducible.
inline void fft_pow2(std::vector<std::complex<double>>& a, int sign) {
    const size_t n = a.size();
    if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft_pow2: size must be 2^k");
    for (size_t i = 1, j = 0; i < n; ++i) {
        size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }
    constexpr double pi = 3.141592653589793238462643383279;
    for (size_t len = 2; len <= n; len <<= 1) {
        double ang = sign * 2.0 * pi / static_cast<double>(len);
        std::complex<double> wl(std::cos(ang), std::sin(ang));
        for (size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (size_t k = 0; k < len / 2; ++k) {
                std::complex<double> u = a[i + k];
                std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wl;
            }
        }
    }
}

}  // namespace fluct
