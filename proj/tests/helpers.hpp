#pragma once

#include <cmath>
#include <complex>
#include <random>
#include <vector>

#include "czthr/signal.hpp"

namespace testutil {

constexpr double kTwoPi = 6.283185307179586476925286766559;

// O(n^2) reference transform, independent of the library's FFT path.
inline std::vector<std::complex<double>> naive_dft(const std::vector<std::complex<double>>& x) {
    const std::size_t n = x.size();
    std::vector<std::complex<double>> out(n);
    for (std::size_t k = 0; k < n; ++k) {
        std::complex<double> acc{0.0, 0.0};
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = -kTwoPi * static_cast<double>(k) * static_cast<double>(j) /
                               static_cast<double>(n);
            acc += x[j] * std::complex<double>(std::cos(ang), std::sin(ang));
        }
        out[k] = acc;
    }
    return out;
}

inline czthr::SignalWindow randn_window(std::size_t n, double fs, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> gauss(0.0, 1.0);
    czthr::SignalWindow w;
    w.sample_rate_hz = fs;
    w.samples.resize(n);
    for (auto& s : w.samples) s = gauss(rng);
    return w;
}

inline czthr::SignalWindow tone(double bpm, std::size_t n, double fs, double phase = 0.0,
                                double amp = 1.0) {
    czthr::SignalWindow w;
    w.sample_rate_hz = fs;
    w.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i)
        w.samples[i] =
            amp * std::cos(kTwoPi * (bpm / 60.0) * static_cast<double>(i) / fs + phase);
    return w;
}

// L-infinity difference relative to the reference's L-infinity norm.
inline double rel_linf(const std::vector<double>& got, const std::vector<double>& ref) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t i = 0; i < ref.size(); ++i) {
        diff = std::max(diff, std::abs(got[i] - ref[i]));
        scale = std::max(scale, std::abs(ref[i]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

}  // namespace testutil
