#pragma once

#include <cstddef>
#include <string>
#include <vector>

namespace czthr {

/// Fixed-length, uniformly sampled real-valued signal segment.
struct SignalWindow {
    std::vector<double> samples;
    double sample_rate_hz = 0.0;

    std::size_t size() const { return samples.size(); }
    double duration_s() const { return static_cast<double>(samples.size()) / sample_rate_hz; }
};

/// Frequency band in Hz, inclusive at both edges.
struct Band {
    double lo_hz = 0.66;
    double hi_hz = 3.0;
};

/// Frequencies paired with nonnegative magnitudes (or probabilities when
/// `normalized` is set, in which case the values sum to 1).
struct Spectrum {
    std::vector<double> freqs_hz;
    std::vector<double> values;
    bool normalized = false;

    std::size_t size() const { return values.size(); }
};

/// Window paired with its ground-truth heart rate label.
struct LabeledWindow {
    SignalWindow window;
    double hr_gt_bpm = 0.0;
    std::string source_tag;
};

/// Throws std::invalid_argument unless the window has >= 2 finite samples and
/// a positive sample rate.
void validate_window(const SignalWindow& window);

/// Copy of the window with its mean subtracted. Detrending is done once at the
/// pipeline level, never inside the transforms, so the transform kernels stay
/// exactly linear.
SignalWindow remove_mean(const SignalWindow& window);

double mean(const std::vector<double>& values);

/// Linear-interpolation percentile (q in [0,100]) of the sample amplitudes.
double percentile(std::vector<double> values, double q);

}  // namespace czthr
