#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "czthr/czt.hpp"
#include "czthr/signal.hpp"

namespace czthr {

enum class Method { PeakIbi, FftArgmax, CztArgmax, DeepCzt };

std::string to_string(Method method);
Method method_from_string(std::string_view name);

struct HrEstimate {
    double bpm = 0.0;
    Method method = Method::CztArgmax;
    std::optional<double> confidence;  // peak-power fraction or softmax max
};

/// bpm = 60 * freq at the spectrum argmax; exact ties resolve to the lowest
/// frequency. Confidence is the argmax value's share of the total energy.
/// All-zero spectra raise "no spectral energy".
HrEstimate hr_from_spectrum(const Spectrum& spectrum, Method method = Method::CztArgmax);

struct PeakOptions {
    double min_hr_bpm = 40.0;
    double max_hr_bpm = 180.0;
    // Peaks must rise at least this fraction of the interdecile amplitude
    // range above their surroundings.
    double prominence_frac = 0.3;
};

/// Local-maxima indices after the prominence gate and the max-HR refractory
/// distance. Kept public so the failure modes are directly testable.
std::vector<std::size_t> find_peaks(const SignalWindow& window, const PeakOptions& opts = {});

/// Temporal estimate: HR = 60 / mean inter-beat interval. Fewer than two
/// surviving peaks raise "insufficient peaks".
HrEstimate hr_from_peaks(const SignalWindow& window, const PeakOptions& opts = {});

struct SweepRow {
    std::size_t window_size = 0;
    std::size_t window_index = 0;
    Method method = Method::CztArgmax;
    std::optional<HrEstimate> estimate;  // empty when the estimator failed
    std::string error;
};

struct SweepResult {
    std::vector<SweepRow> rows;
    std::vector<std::string> warnings;  // e.g. sizes longer than the signal
};

struct SweepOptions {
    Band band{kDefaultBandLoHz, kDefaultBandHiHz};
    PeakOptions peaks{};
};

/// Chops the signal into non-overlapping chunks of every requested size
/// (tail remainder discarded) and runs every requested method on each chunk.
/// Supports the three handcrafted methods; spectral chunks are detrended
/// before the transform.
SweepResult sweep_windows(const SignalWindow& signal, const std::vector<std::size_t>& sizes,
                          const std::vector<Method>& methods, const SweepOptions& opts = {});

/// Single-window dispatch used by sweep and the evaluation pipeline.
HrEstimate estimate_window(const SignalWindow& window, Method method, const Band& band,
                           const PeakOptions& peaks = {});

}  // namespace czthr
