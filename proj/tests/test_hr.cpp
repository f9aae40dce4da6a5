#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "czthr/hr.hpp"
#include "helpers.hpp"

using namespace czthr;
using testutil::kTwoPi;
using testutil::randn_window;
using testutil::tone;

TEST_CASE("method names round-trip") {
    for (const Method m :
         {Method::PeakIbi, Method::FftArgmax, Method::CztArgmax, Method::DeepCzt})
        CHECK(method_from_string(to_string(m)) == m);
    CHECK_THROWS_AS(method_from_string("welch"), std::invalid_argument);
}

TEST_CASE("spectrum argmax decoding") {
    Spectrum spec;
    spec.freqs_hz = {1.0, 1.5, 2.0};
    spec.values = {0.2, 0.5, 0.3};
    const HrEstimate est = hr_from_spectrum(spec, Method::FftArgmax);
    CHECK(est.bpm == doctest::Approx(90.0));
    CHECK(est.method == Method::FftArgmax);
    CHECK(*est.confidence == doctest::Approx(0.5));

    SUBCASE("exact ties resolve to the lowest frequency") {
        spec.values = {0.5, 0.5, 0.1};
        CHECK(hr_from_spectrum(spec).bpm == doctest::Approx(60.0));
    }
    SUBCASE("all-zero spectra are rejected") {
        spec.values = {0.0, 0.0, 0.0};
        CHECK_THROWS_AS(hr_from_spectrum(spec), std::runtime_error);
    }
    SUBCASE("negative values are rejected") {
        spec.values = {0.1, -0.2, 0.3};
        CHECK_THROWS_AS(hr_from_spectrum(spec), std::invalid_argument);
    }
    SUBCASE("inconsistent shapes are rejected") {
        spec.values = {0.1, 0.2};
        CHECK_THROWS_AS(hr_from_spectrum(spec), std::invalid_argument);
    }
}

TEST_CASE("CZT estimate of a 72 BPM tone is within half a bin") {
    const HrEstimate est = estimate_window(tone(72.0, 256, 30.0), Method::CztArgmax, Band{});
    CHECK(std::abs(est.bpm - 72.0) <= 0.28);
    CHECK(est.confidence.has_value());
}

TEST_CASE("FFT estimate of a 72 BPM tone sits on the coarse grid") {
    const HrEstimate est = estimate_window(tone(72.0, 256, 30.0), Method::FftArgmax, Band{});
    CHECK(est.bpm == doctest::Approx(70.3125).epsilon(1e-12));  // 60 * 1.171875 Hz
}

TEST_CASE("estimates are amplitude invariant") {
    const SignalWindow base = tone(95.0, 256, 30.0, 0.4);
    SignalWindow scaled = base;
    for (double& s : scaled.samples) s *= 23.0;
    for (const Method m : {Method::PeakIbi, Method::FftArgmax, Method::CztArgmax}) {
        const double a = estimate_window(base, m, Band{}).bpm;
        const double b = estimate_window(scaled, m, Band{}).bpm;
        CHECK(a == doctest::Approx(b).epsilon(1e-12));
    }
}

TEST_CASE("spectral estimates stay inside the band") {
    for (unsigned seed = 0; seed < 8; ++seed) {
        const SignalWindow w = randn_window(256, 30.0, 900 + seed);
        for (const Method m : {Method::FftArgmax, Method::CztArgmax}) {
            const double bpm = estimate_window(w, m, Band{}).bpm;
            CHECK(bpm >= 39.6 - 1e-9);
            CHECK(bpm <= 180.0 + 1e-9);
        }
    }
}

TEST_CASE("tone errors respect the quantization bounds") {
    // The CZT grid is ~13x finer than the 256-point DFT main lobe, so leakage
    // ripple can move the argmax a bin or so off the nearest grid point;
    // allow 1.5 bin steps. The FFT bound is the usual half-step.
    const double czt_bound = 1.5 * (2.34 / 255.0) * 60.0;
    const double fft_bound = 0.5 * (30.0 / 256.0) * 60.0 + 0.05;
    for (const double f : {0.7, 1.3, 1.9, 2.52, 2.9}) {
        const SignalWindow w = tone(60.0 * f, 256, 30.0, 0.7);
        CAPTURE(f);
        CHECK(std::abs(estimate_window(w, Method::CztArgmax, Band{}).bpm - 60.0 * f) <=
              czt_bound);
        CHECK(std::abs(estimate_window(w, Method::FftArgmax, Band{}).bpm - 60.0 * f) <=
              fft_bound);
    }
}

TEST_CASE("peak detection on a clean 60 BPM tone") {
    const SignalWindow w = tone(60.0, 256, 30.0);  // maxima every 30 samples
    const auto peaks = find_peaks(w);
    REQUIRE(peaks.size() == 8);
    for (std::size_t i = 0; i < peaks.size(); ++i) CHECK(peaks[i] == 30 * (i + 1));
    CHECK(hr_from_peaks(w).bpm == doctest::Approx(60.0).epsilon(1e-12));
}

TEST_CASE("dicrotic second harmonic does not fool the peak detector") {
    SignalWindow w{std::vector<double>(256), 30.0};
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const double arg = kTwoPi * 1.2 * static_cast<double>(i) / 30.0;
        w.samples[i] = std::cos(arg) + 0.35 * std::cos(2.0 * arg);
    }
    CHECK(hr_from_peaks(w).bpm == doctest::Approx(72.0).epsilon(1e-12));
}

TEST_CASE("45 BPM in a 64-sample window starves the peak detector") {
    const SignalWindow w = tone(45.0, 64, 30.0);  // one interior maximum only
    CHECK_THROWS_WITH_AS(hr_from_peaks(w), "insufficient peaks: found 1, need at least 2",
                         std::runtime_error);
    // the spectral path handles the same window fine (one 64-bin step of slack)
    CHECK(std::abs(estimate_window(w, Method::CztArgmax, Band{}).bpm - 45.0) <= 2.5);
}

TEST_CASE("plateaus count once, at their first sample") {
    const SignalWindow w{{0.0, 1.0, 1.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 0.0, 1.0, 0.0},
                         30.0};
    const auto peaks = find_peaks(w);
    REQUIRE(peaks.size() == 2);
    CHECK(peaks[0] == 1);
    CHECK(peaks[1] == 11);
}

TEST_CASE("refractory period keeps the taller of two close peaks") {
    std::vector<double> x(20, 0.0);
    x[5] = 2.0;
    x[9] = 1.5;  // 4 samples away < 10-sample refractory at 180 BPM
    const auto peaks = find_peaks({x, 30.0});
    REQUIRE(peaks.size() == 1);
    CHECK(peaks[0] == 5);
}

TEST_CASE("sweep chunks, counts and warnings") {
    const SignalWindow sig = tone(72.0, 512, 30.0);
    const std::vector<std::size_t> sizes = {64, 128, 256, 512, 1024};
    const std::vector<Method> methods = {Method::PeakIbi, Method::FftArgmax, Method::CztArgmax};
    const SweepResult res = sweep_windows(sig, sizes, methods);

    REQUIRE(res.warnings.size() == 1);  // 1024 > 512
    std::size_t per_method = 0;
    for (const auto& row : res.rows)
        if (row.method == Method::CztArgmax) ++per_method;
    CHECK(per_method == 8 + 4 + 2 + 1);
    CHECK(res.rows.size() == 15 * methods.size());
    CHECK_THROWS_AS(sweep_windows(sig, {256}, {Method::DeepCzt}), std::invalid_argument);
}

TEST_CASE("CZT error shrinks with window size on a constant tone") {
    const SignalWindow sig = tone(72.0, 512, 30.0);
    const SweepResult res = sweep_windows(sig, {64, 128, 256, 512}, {Method::CztArgmax});
    double mae[4] = {0, 0, 0, 0};
    std::size_t count[4] = {0, 0, 0, 0};
    for (const auto& row : res.rows) {
        REQUIRE(row.estimate.has_value());
        const std::size_t slot = row.window_size == 64    ? 0
                                 : row.window_size == 128 ? 1
                                 : row.window_size == 256 ? 2
                                                          : 3;
        mae[slot] += std::abs(row.estimate->bpm - 72.0);
        ++count[slot];
    }
    for (int i = 0; i < 4; ++i) mae[i] /= static_cast<double>(count[i]);
    CHECK(mae[0] >= mae[1] - 1e-9);
    CHECK(mae[1] >= mae[2] - 1e-9);
    CHECK(mae[2] >= mae[3] - 1e-9);
}
