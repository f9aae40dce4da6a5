#include "czthr/fft.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>
#include <utility>

namespace czthr::fft {

namespace {
constexpr double kTwoPi = 2.0 * std::numbers::pi;
}

bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

std::size_t next_pow2(std::size_t n) {
    std::size_t p = 1;
    while (p < n) p <<= 1;
    return p;
}

void fft_pow2(std::vector<std::complex<double>>& a, bool inverse) {
    const std::size_t n = a.size();
    if (!is_pow2(n)) throw std::invalid_argument("fft_pow2: size must be a power of two");
    if (n < 2) return;

    // bit-reversal permutation
    for (std::size_t i = 1, j = 0; i < n; ++i) {
        std::size_t bit = n >> 1;
        for (; j & bit; bit >>= 1) j ^= bit;
        j ^= bit;
        if (i < j) std::swap(a[i], a[j]);
    }

    for (std::size_t len = 2; len <= n; len <<= 1) {
        const double ang = (inverse ? kTwoPi : -kTwoPi) / static_cast<double>(len);
        const std::complex<double> wstep(std::cos(ang), std::sin(ang));
        for (std::size_t i = 0; i < n; i += len) {
            std::complex<double> w(1.0, 0.0);
            for (std::size_t k = 0; k < len / 2; ++k) {
                const std::complex<double> u = a[i + k];
                const std::complex<double> v = a[i + k + len / 2] * w;
                a[i + k] = u + v;
                a[i + k + len / 2] = u - v;
                w *= wstep;
            }
        }
    }

    if (inverse) {
        const double scale = 1.0 / static_cast<double>(n);
        for (auto& z : a) z *= scale;
    }
}

namespace {

// Bluestein's identity nk = (n^2 + k^2 - (k-n)^2) / 2 turns an arbitrary-length
// DFT into a convolution with a chirp, evaluated by power-of-two FFTs.
std::vector<std::complex<double>> dft_bluestein(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    const std::size_t conv_len = next_pow2(2 * n - 1);

    std::vector<std::complex<double>> a(conv_len, {0.0, 0.0});
    std::vector<std::complex<double>> b(conv_len, {0.0, 0.0});
    std::vector<std::complex<double>> chirp(n);
    for (std::size_t i = 0; i < n; ++i) {
        // angle = pi * i^2 / n, kept in double via the modular identity
        // i^2 mod 2n to avoid large-argument trig error for big n.
        const std::size_t i2 = (i * i) % (2 * n);
        const double ang = std::numbers::pi * static_cast<double>(i2) / static_cast<double>(n);
        chirp[i] = {std::cos(ang), -std::sin(ang)};
        a[i] = x[i] * chirp[i];
        b[i] = std::conj(chirp[i]);
        if (i > 0) b[conv_len - i] = std::conj(chirp[i]);
    }

    fft_pow2(a, false);
    fft_pow2(b, false);
    for (std::size_t i = 0; i < conv_len; ++i) a[i] *= b[i];
    fft_pow2(a, true);

    std::vector<std::complex<double>> out(n);
    for (std::size_t i = 0; i < n; ++i) out[i] = a[i] * chirp[i];
    return out;
}

}  // namespace

std::vector<std::complex<double>> dft(std::vector<std::complex<double>> x) {
    if (x.empty()) return x;
    if (is_pow2(x.size())) {
        fft_pow2(x, false);
        return x;
    }
    return dft_bluestein(x);
}

std::vector<std::complex<double>> dft_real(const std::vector<double>& x) {
    std::vector<std::complex<double>> cx(x.size());
    for (std::size_t i = 0; i < x.size(); ++i) cx[i] = {x[i], 0.0};
    return dft(std::move(cx));
}

}  // namespace czthr::fft
