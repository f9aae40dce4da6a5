#include "czthr/synth.hpp"

#include <cmath>
#include <random>
#include <sstream>
#include <stdexcept>

namespace czthr {
namespace {

constexpr double kTwoPi = 6.283185307179586476925286766559;
constexpr double kMinHrBpm = 40.0;
constexpr double kMaxHrBpm = 180.0;

void check_bpm(double bpm, const char* what) {
    if (!std::isfinite(bpm) || bpm < kMinHrBpm || bpm > kMaxHrBpm) {
        std::ostringstream os;
        os << what << " " << bpm << " BPM outside physiological range [" << kMinHrBpm << ", "
           << kMaxHrBpm << "]";
        throw std::invalid_argument(os.str());
    }
}

}  // namespace

HrProfile HrProfile::constant(double bpm) {
    HrProfile p;
    p.kind = Kind::Constant;
    p.bpm_start = p.bpm_end = bpm;
    return p;
}

HrProfile HrProfile::ramp(double from_bpm, double to_bpm) {
    HrProfile p;
    p.kind = Kind::LinearRamp;
    p.bpm_start = from_bpm;
    p.bpm_end = to_bpm;
    return p;
}

HrProfile HrProfile::piecewise(std::vector<std::pair<double, double>> points) {
    if (points.empty()) throw std::invalid_argument("piecewise profile needs at least one point");
    for (std::size_t i = 0; i < points.size(); ++i) {
        if (!std::isfinite(points[i].first) || points[i].first < 0.0)
            throw std::invalid_argument("piecewise profile times must be finite and >= 0");
        if (i > 0 && points[i].first <= points[i - 1].first)
            throw std::invalid_argument("piecewise profile times must be strictly increasing");
    }
    HrProfile p;
    p.kind = Kind::Piecewise;
    p.points = std::move(points);
    p.bpm_start = p.points.front().second;
    p.bpm_end = p.points.back().second;
    return p;
}

double HrProfile::bpm_at(double t_s, double duration_s) const {
    switch (kind) {
        case Kind::Constant:
            return bpm_start;
        case Kind::LinearRamp: {
            if (duration_s <= 0.0) return bpm_start;
            const double u = std::min(std::max(t_s / duration_s, 0.0), 1.0);
            return bpm_start + (bpm_end - bpm_start) * u;
        }
        case Kind::Piecewise: {
            if (t_s <= points.front().first) return points.front().second;
            if (t_s >= points.back().first) return points.back().second;
            for (std::size_t i = 1; i < points.size(); ++i) {
                if (t_s <= points[i].first) {
                    const auto& [t0, b0] = points[i - 1];
                    const auto& [t1, b1] = points[i];
                    return b0 + (b1 - b0) * (t_s - t0) / (t1 - t0);
                }
            }
            return points.back().second;  // unreachable
        }
    }
    return bpm_start;
}

double HrProfile::phase_cycles(double t_s, double duration_s) const {
    if (t_s < 0.0) throw std::invalid_argument("phase integral requires t >= 0");
    // Closed-form integral of f_HR(t)/60; linear pieces integrate to trapezoids.
    switch (kind) {
        case Kind::Constant:
            return bpm_start / 60.0 * t_s;
        case Kind::LinearRamp: {
            const double f0 = bpm_start / 60.0;
            if (duration_s <= 0.0) return f0 * t_s;
            const double u = std::min(t_s, duration_s);
            const double slope = (bpm_end - bpm_start) / 60.0 / duration_s;
            double phase = f0 * u + 0.5 * slope * u * u;
            if (t_s > duration_s) phase += bpm_end / 60.0 * (t_s - duration_s);
            return phase;
        }
        case Kind::Piecewise: {
            double phase = 0.0;
            double prev_t = 0.0;
            const double lead = std::min(t_s, points.front().first);
            if (lead > 0.0) phase += points.front().second / 60.0 * lead;
            prev_t = points.front().first;
            for (std::size_t i = 1; i < points.size() && t_s > prev_t; ++i) {
                const auto& [t1, b1] = points[i];
                const double seg_end = std::min(t_s, t1);
                const double fa = bpm_at(prev_t, duration_s) / 60.0;
                const double fb = bpm_at(seg_end, duration_s) / 60.0;
                phase += 0.5 * (fa + fb) * (seg_end - prev_t);
                prev_t = t1;
            }
            if (t_s > points.back().first)
                phase += points.back().second / 60.0 * (t_s - points.back().first);
            return phase;
        }
    }
    return 0.0;
}

double HrProfile::mean_bpm(double t0_s, double t1_s, double duration_s) const {
    if (t1_s < t0_s) throw std::invalid_argument("mean_bpm requires t1 >= t0");
    if (t1_s == t0_s) return bpm_at(t0_s, duration_s);
    return (phase_cycles(t1_s, duration_s) - phase_cycles(t0_s, duration_s)) / (t1_s - t0_s) * 60.0;
}

std::vector<std::pair<int, double>> default_harmonics() { return {{2, 0.35}}; }

SignalWindow synth_signal(const SynthSpec& spec) {
    if (!(spec.sample_rate_hz > 0.0) || !std::isfinite(spec.sample_rate_hz))
        throw std::invalid_argument("sample rate must be finite and positive");
    if (!(spec.duration_s > 0.0) || !std::isfinite(spec.duration_s))
        throw std::invalid_argument("duration must be finite and positive");
    const auto n = static_cast<std::size_t>(std::llround(spec.duration_s * spec.sample_rate_hz));
    if (n < 64) {
        std::ostringstream os;
        os << "duration * sample rate gives " << n << " samples; need at least 64";
        throw std::invalid_argument(os.str());
    }
    if (!(spec.amplitude > 0.0) || !std::isfinite(spec.amplitude))
        throw std::invalid_argument("amplitude must be finite and positive");

    const HrProfile& prof = spec.hr_profile;
    check_bpm(prof.bpm_start, "profile HR");
    check_bpm(prof.bpm_end, "profile HR");
    for (const auto& [t, b] : prof.points) check_bpm(b, "profile HR");

    for (const auto& [order, amp] : spec.harmonics) {
        if (order < 2) throw std::invalid_argument("harmonic order must be >= 2");
        if (!(amp > 0.0) || !std::isfinite(amp))
            throw std::invalid_argument("harmonic amplitude must be finite and positive");
    }
    if (spec.baseline_wander) {
        const auto& w = *spec.baseline_wander;
        if (!(w.freq_hz > 0.0) || w.freq_hz >= 0.2)
            throw std::invalid_argument("baseline wander frequency must lie in (0, 0.2) Hz");
        if (!(w.amplitude >= 0.0) || !std::isfinite(w.amplitude))
            throw std::invalid_argument("baseline wander amplitude must be finite and >= 0");
    }
    if (spec.noise_snr_db && !std::isfinite(*spec.noise_snr_db))
        throw std::invalid_argument("noise SNR must be finite");

    SignalWindow out;
    out.sample_rate_hz = spec.sample_rate_hz;
    out.samples.resize(n);
    for (std::size_t i = 0; i < n; ++i) {
        const double t = static_cast<double>(i) / spec.sample_rate_hz;
        const double arg = kTwoPi * prof.phase_cycles(t, spec.duration_s) + spec.phase_rad;
        double x = std::cos(arg);
        for (const auto& [order, amp] : spec.harmonics) x += amp * std::cos(order * arg);
        x *= spec.amplitude;
        if (spec.baseline_wander)
            x += spec.baseline_wander->amplitude *
                 std::cos(kTwoPi * spec.baseline_wander->freq_hz * t);
        out.samples[i] = x;
    }

    if (spec.noise_snr_db) {
        double power = 0.0;
        for (double x : out.samples) power += x * x;
        power /= static_cast<double>(n);
        const double sigma = std::sqrt(power / std::pow(10.0, *spec.noise_snr_db / 10.0));
        std::mt19937_64 rng(spec.seed);
        std::normal_distribution<double> gauss(0.0, sigma);
        for (double& x : out.samples) x += gauss(rng);
    }
    return out;
}

SensorModel SensorModel::identity() { return {}; }

SensorModel SensorModel::affine(double gain, double offset_bpm) {
    if (!std::isfinite(gain) || gain <= 0.0)
        throw std::invalid_argument("sensor gain must be finite and positive");
    if (!std::isfinite(offset_bpm)) throw std::invalid_argument("sensor offset must be finite");
    SensorModel m;
    m.kind = SensorKind::AffineBias;
    m.gain = gain;
    m.offset_bpm = offset_bpm;
    return m;
}

SensorModel SensorModel::quantize() {
    SensorModel m;
    m.kind = SensorKind::QuantizeToInt;
    return m;
}

double SensorModel::apply(double hr_bpm) const {
    switch (kind) {
        case SensorKind::Identity:
            return hr_bpm;
        case SensorKind::AffineBias:
            return gain * hr_bpm + offset_bpm;
        case SensorKind::QuantizeToInt:
            return std::round(hr_bpm);
    }
    return hr_bpm;
}

std::uint64_t derive_seed(std::uint64_t base, std::uint64_t index) {
    // splitmix64 step keyed by item index; independent streams per item.
    std::uint64_t z = base + 0x9E3779B97F4A7C15ull * (index + 1);
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ull;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBull;
    return z ^ (z >> 31);
}

std::vector<LabeledWindow> synth_dataset(const DatasetSpec& family, std::size_t count,
                                         const SensorModel& sensor) {
    if (count == 0) throw std::invalid_argument("dataset needs at least one window");
    if (family.window_len < 64) throw std::invalid_argument("window length must be >= 64");
    if (!(family.sample_rate_hz > 0.0) || !std::isfinite(family.sample_rate_hz))
        throw std::invalid_argument("sample rate must be finite and positive");
    check_bpm(family.hr_lo_bpm, "dataset HR bound");
    check_bpm(family.hr_hi_bpm, "dataset HR bound");
    if (family.hr_lo_bpm > family.hr_hi_bpm)
        throw std::invalid_argument("dataset HR range is empty");

    std::vector<LabeledWindow> out;
    out.reserve(count);
    for (std::size_t i = 0; i < count; ++i) {
        const std::uint64_t item_seed = derive_seed(family.seed, i);
        std::mt19937_64 rng(item_seed);
        std::uniform_real_distribution<double> unit(0.0, 1.0);
        const double bpm =
            family.hr_lo_bpm + unit(rng) * (family.hr_hi_bpm - family.hr_lo_bpm);
        const double phase = family.random_phase ? unit(rng) * kTwoPi : 0.0;

        SynthSpec spec;
        spec.hr_profile = HrProfile::constant(bpm);
        spec.duration_s = static_cast<double>(family.window_len) / family.sample_rate_hz;
        spec.sample_rate_hz = family.sample_rate_hz;
        spec.amplitude = family.amplitude;
        spec.phase_rad = phase;
        spec.harmonics = family.harmonics;
        spec.noise_snr_db = family.noise_snr_db;
        spec.seed = derive_seed(item_seed, 1);  // noise stream distinct from the draw stream

        LabeledWindow item;
        item.window = synth_signal(spec);
        item.hr_gt_bpm = sensor.apply(bpm);
        std::ostringstream tag;
        tag << family.tag << "#" << i;
        item.source_tag = tag.str();
        out.push_back(std::move(item));
    }
    return out;
}

}  // namespace czthr
