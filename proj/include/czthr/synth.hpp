#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "czthr/signal.hpp"

namespace czthr {

/// Instantaneous heart-rate profile f_HR(t) in BPM. Piecewise profiles
/// interpolate linearly between (time, bpm) points and hold the edge values
/// outside them.
struct HrProfile {
    enum class Kind { Constant, LinearRamp, Piecewise };
    Kind kind = Kind::Constant;
    double bpm_start = 60.0;
    double bpm_end = 60.0;
    std::vector<std::pair<double, double>> points;  // (t_s, bpm), strictly increasing t

    static HrProfile constant(double bpm);
    static HrProfile ramp(double from_bpm, double to_bpm);
    static HrProfile piecewise(std::vector<std::pair<double, double>> points);

    /// BPM at time t for a signal of the given duration (ramps span it).
    double bpm_at(double t_s, double duration_s) const;
    /// Phase integral of f_HR/60 in cycles over [0, t].
    double phase_cycles(double t_s, double duration_s) const;
    double mean_bpm(double t0_s, double t1_s, double duration_s) const;
};

struct BaselineWander {
    double freq_hz = 0.1;  // must stay below 0.2 Hz
    double amplitude = 0.0;
};

struct SynthSpec {
    HrProfile hr_profile;
    double duration_s = 256.0 / 30.0;
    double sample_rate_hz = 30.0;
    double amplitude = 1.0;     // fundamental amplitude
    double phase_rad = 0.0;     // initial phase of the fundamental
    std::vector<std::pair<int, double>> harmonics;  // (order >= 2, relative amplitude)
    std::optional<double> noise_snr_db;
    std::optional<BaselineWander> baseline_wander;
    std::uint64_t seed = 0;
};

/// Dicrotic-like default: one 0.35-amplitude second harmonic.
std::vector<std::pair<int, double>> default_harmonics();

/// x(t) = sum_h a_h cos(h*(2*pi*phi(t) + phase)) + wander + noise with
/// phi(t) the HR phase integral. Deterministic under spec.seed.
SignalWindow synth_signal(const SynthSpec& spec);

enum class SensorKind { Identity, AffineBias, QuantizeToInt };

/// Maps the true mean HR of a window onto the label an HR sensor would
/// report. A non-identity sensor is the signal-to-sensor gap a trainable
/// estimator can learn.
struct SensorModel {
    SensorKind kind = SensorKind::Identity;
    double gain = 1.0;
    double offset_bpm = 0.0;

    static SensorModel identity();
    static SensorModel affine(double gain, double offset_bpm);
    static SensorModel quantize();

    double apply(double hr_bpm) const;
};

/// Family of constant-HR windows with per-item seeds derived from `seed`.
struct DatasetSpec {
    std::size_t window_len = 256;
    double sample_rate_hz = 30.0;
    double hr_lo_bpm = 45.0;
    double hr_hi_bpm = 170.0;
    double amplitude = 1.0;
    std::vector<std::pair<int, double>> harmonics;
    std::optional<double> noise_snr_db;
    bool random_phase = true;
    std::uint64_t seed = 0;
    std::string tag = "synth";
};

std::vector<LabeledWindow> synth_dataset(const DatasetSpec& family, std::size_t count,
                                         const SensorModel& sensor);

/// Split-mix hash for deriving independent per-item RNG streams.
std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index);

}  // namespace czthr
