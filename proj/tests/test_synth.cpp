#include <doctest.h>

#include <cmath>
#include <stdexcept>
#include <vector>

#include "czthr/hr.hpp"
#include "czthr/synth.hpp"
#include "helpers.hpp"

using namespace czthr;
using testutil::kTwoPi;

TEST_CASE("constant profile gives a pure cosine") {
    SynthSpec spec;
    spec.hr_profile = HrProfile::constant(72.0);
    spec.duration_s = 256.0 / 30.0;
    spec.sample_rate_hz = 30.0;
    const SignalWindow w = synth_signal(spec);
    REQUIRE(w.samples.size() == 256);
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const double expect = std::cos(kTwoPi * 1.2 * static_cast<double>(i) / 30.0);
        CHECK(w.samples[i] == doctest::Approx(expect).epsilon(1e-12));
    }
}

TEST_CASE("same seed reproduces the signal bit for bit") {
    SynthSpec spec;
    spec.hr_profile = HrProfile::constant(80.0);
    spec.noise_snr_db = 10.0;
    spec.seed = 42;
    const SignalWindow a = synth_signal(spec);
    const SignalWindow b = synth_signal(spec);
    REQUIRE(a.samples.size() == b.samples.size());
    for (std::size_t i = 0; i < a.samples.size(); ++i) CHECK(a.samples[i] == b.samples[i]);

    spec.seed = 43;
    const SignalWindow c = synth_signal(spec);
    double diff = 0.0;
    for (std::size_t i = 0; i < a.samples.size(); ++i)
        diff = std::max(diff, std::abs(a.samples[i] - c.samples[i]));
    CHECK(diff > 0.0);
}

TEST_CASE("phase integral closed forms match numeric integration") {
    const double duration = 20.0;
    const auto numeric = [&](const HrProfile& p, double t) {
        const int steps = 200000;
        double acc = 0.0;
        for (int i = 0; i < steps; ++i) {
            const double a = t * i / steps, b = t * (i + 1) / steps;
            acc += 0.5 * (p.bpm_at(a, duration) + p.bpm_at(b, duration)) / 60.0 * (b - a);
        }
        return acc;
    };
    const HrProfile ramp = HrProfile::ramp(60.0, 90.0);
    const HrProfile pw = HrProfile::piecewise({{0.0, 60.0}, {5.0, 80.0}, {12.0, 70.0}});
    for (const double t : {1.7, 5.0, 9.3, 15.0, 20.0}) {
        CHECK(ramp.phase_cycles(t, duration) == doctest::Approx(numeric(ramp, t)).epsilon(1e-7));
        CHECK(pw.phase_cycles(t, duration) == doctest::Approx(numeric(pw, t)).epsilon(1e-7));
    }
    CHECK(ramp.mean_bpm(0.0, duration, duration) == doctest::Approx(75.0));
}

TEST_CASE("linear ramp sweeps the instantaneous frequency") {
    SynthSpec spec;
    spec.hr_profile = HrProfile::ramp(60.0, 90.0);
    spec.duration_s = 512.0 / 30.0;
    const SignalWindow sig = synth_signal(spec);
    REQUIRE(sig.samples.size() == 512);

    // Short-window CZT tracking: quarters near the local mean HR.
    SignalWindow head{{sig.samples.begin(), sig.samples.begin() + 128}, 30.0};
    SignalWindow tail{{sig.samples.end() - 128, sig.samples.end()}, 30.0};
    const double first = estimate_window(head, Method::CztArgmax, Band{}).bpm;
    const double last = estimate_window(tail, Method::CztArgmax, Band{}).bpm;
    CHECK(std::abs(first - 63.75) < 3.0);
    CHECK(std::abs(last - 86.25) < 3.0);
    CHECK(last - first > 15.0);
}

TEST_CASE("one full-length window of a ramp blurs the estimate") {
    SynthSpec spec;
    spec.hr_profile = HrProfile::ramp(60.0, 90.0);
    spec.duration_s = 512.0 / 30.0;
    const SignalWindow sig = synth_signal(spec);
    const SweepResult res = sweep_windows(sig, {256, 512}, {Method::CztArgmax});

    double err256 = 0.0, err512 = 0.0;
    for (const auto& row : res.rows) {
        REQUIRE(row.estimate.has_value());
        if (row.window_size == 512) {
            err512 = std::abs(row.estimate->bpm - 75.0);
        } else {
            const double gt = row.window_index == 0 ? 67.5 : 82.5;
            err256 += 0.5 * std::abs(row.estimate->bpm - gt);
        }
    }
    CHECK(err512 > err256);
}

TEST_CASE("noise power matches the requested SNR") {
    SynthSpec spec;
    spec.hr_profile = HrProfile::constant(70.0);
    spec.duration_s = 10000.0 / 30.0;
    spec.harmonics = default_harmonics();
    spec.seed = 5;
    const SignalWindow clean = synth_signal(spec);
    spec.noise_snr_db = 12.0;
    const SignalWindow noisy = synth_signal(spec);

    double p_sig = 0.0, p_noise = 0.0;
    for (std::size_t i = 0; i < clean.samples.size(); ++i) {
        p_sig += clean.samples[i] * clean.samples[i];
        const double d = noisy.samples[i] - clean.samples[i];
        p_noise += d * d;
    }
    const double snr_db = 10.0 * std::log10(p_sig / p_noise);
    CHECK(std::abs(snr_db - 12.0) <= 0.5);
}

TEST_CASE("baseline wander rides under the pulse") {
    SynthSpec spec;
    spec.hr_profile = HrProfile::constant(66.0);
    spec.baseline_wander = BaselineWander{0.1, 0.8};
    const SignalWindow w = synth_signal(spec);
    double acc = 0.0;
    for (std::size_t i = 0; i < w.samples.size(); ++i) {
        const double t = static_cast<double>(i) / 30.0;
        const double pulse = std::cos(kTwoPi * 1.1 * t);
        const double wander = 0.8 * std::cos(kTwoPi * 0.1 * t);
        acc = std::max(acc, std::abs(w.samples[i] - pulse - wander));
    }
    CHECK(acc <= 1e-12);
}

TEST_CASE("generator rejects out-of-range specs") {
    SynthSpec spec;
    spec.hr_profile = HrProfile::constant(30.0);  // below 40 BPM
    CHECK_THROWS_AS(synth_signal(spec), std::invalid_argument);
    spec.hr_profile = HrProfile::constant(190.0);
    CHECK_THROWS_AS(synth_signal(spec), std::invalid_argument);
    spec.hr_profile = HrProfile::constant(72.0);
    spec.duration_s = 1.0;  // 30 samples < 64
    CHECK_THROWS_AS(synth_signal(spec), std::invalid_argument);
    spec.duration_s = 10.0;
    spec.baseline_wander = BaselineWander{0.25, 0.1};  // wander too fast
    CHECK_THROWS_AS(synth_signal(spec), std::invalid_argument);
    spec.baseline_wander.reset();
    spec.harmonics = {{1, 0.5}};  // harmonic order must exceed the fundamental
    CHECK_THROWS_AS(synth_signal(spec), std::invalid_argument);
    CHECK_THROWS_AS(HrProfile::piecewise({{0.0, 60.0}, {0.0, 70.0}}), std::invalid_argument);
    CHECK_THROWS_AS(HrProfile::piecewise({}), std::invalid_argument);
}

TEST_CASE("identity-sensor datasets label the true tone rate") {
    DatasetSpec family;
    family.window_len = 256;
    family.seed = 9;
    const auto data = synth_dataset(family, 20, SensorModel::identity());
    REQUIRE(data.size() == 20);
    for (std::size_t i = 0; i < data.size(); ++i) {
        CHECK(data[i].window.samples.size() == 256);
        CHECK(data[i].hr_gt_bpm >= 45.0);
        CHECK(data[i].hr_gt_bpm <= 170.0);
        CHECK(data[i].source_tag == "synth#" + std::to_string(i));
        // label agrees with the classical estimator up to quantization
        const double est =
            estimate_window(data[i].window, Method::CztArgmax, Band{}).bpm;
        CHECK(std::abs(est - data[i].hr_gt_bpm) <= 0.28);
    }
}

TEST_CASE("affine sensor bias shifts every label by the offset") {
    DatasetSpec family;
    family.seed = 10;
    const auto plain = synth_dataset(family, 100, SensorModel::identity());
    const auto biased = synth_dataset(family, 100, SensorModel::affine(1.0, 3.0));
    double mae = 0.0;
    for (std::size_t i = 0; i < plain.size(); ++i) {
        CHECK(biased[i].hr_gt_bpm ==
              doctest::Approx(plain[i].hr_gt_bpm + 3.0).epsilon(1e-12));
        const double est =
            estimate_window(biased[i].window, Method::CztArgmax, Band{}).bpm;
        mae += std::abs(est - biased[i].hr_gt_bpm);
    }
    mae /= static_cast<double>(plain.size());
    CHECK(std::abs(mae - 3.0) <= 0.3);  // classical CZT is provably ~3 BPM off here
}

TEST_CASE("quantizing sensor reports integer BPM") {
    DatasetSpec family;
    family.seed = 11;
    for (const auto& item : synth_dataset(family, 10, SensorModel::quantize()))
        CHECK(item.hr_gt_bpm == std::round(item.hr_gt_bpm));
}

TEST_CASE("dataset seeds derive independent streams") {
    CHECK(derive_seed(1, 0) != derive_seed(1, 1));
    CHECK(derive_seed(1, 0) != derive_seed(2, 0));
    CHECK(derive_seed(7, 3) == derive_seed(7, 3));
    DatasetSpec family;
    CHECK_THROWS_AS(synth_dataset(family, 0, SensorModel::identity()), std::invalid_argument);
}
