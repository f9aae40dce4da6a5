#include "czthr/hr.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace czthr {

std::string to_string(Method method) {
    switch (method) {
        case Method::PeakIbi: return "peak";
        case Method::FftArgmax: return "fft";
        case Method::CztArgmax: return "czt";
        case Method::DeepCzt: return "deep";
    }
    return "unknown";
}

Method method_from_string(std::string_view name) {
    if (name == "peak") return Method::PeakIbi;
    if (name == "fft") return Method::FftArgmax;
    if (name == "czt") return Method::CztArgmax;
    if (name == "deep") return Method::DeepCzt;
    throw std::invalid_argument("unknown method '" + std::string(name) +
                                "' (expected peak|fft|czt|deep)");
}

HrEstimate hr_from_spectrum(const Spectrum& spectrum, Method method) {
    if (spectrum.values.empty() || spectrum.freqs_hz.size() != spectrum.values.size())
        throw std::invalid_argument("hr_from_spectrum: empty or inconsistent spectrum");

    double total = 0.0;
    std::size_t argmax = 0;
    double best = -1.0;
    for (std::size_t k = 0; k < spectrum.values.size(); ++k) {
        const double v = spectrum.values[k];
        if (v < 0.0) throw std::invalid_argument("hr_from_spectrum: negative spectrum value");
        total += v;
        if (v > best) {  // strict > keeps the lowest-frequency bin on ties
            best = v;
            argmax = k;
        }
    }
    if (total <= 0.0) throw std::runtime_error("no spectral energy");

    HrEstimate est;
    est.bpm = 60.0 * spectrum.freqs_hz[argmax];
    est.method = method;
    est.confidence = best / total;
    return est;
}

std::vector<std::size_t> find_peaks(const SignalWindow& window, const PeakOptions& opts) {
    validate_window(window);
    const std::vector<double>& x = window.samples;
    const std::size_t n = x.size();

    const double idr = percentile(x, 90.0) - percentile(x, 10.0);
    const double min_prominence = opts.prominence_frac * idr;

    std::vector<std::size_t> candidates;
    for (std::size_t i = 1; i + 1 < n; ++i) {
        if (!(x[i] > x[i - 1] && x[i] >= x[i + 1])) continue;  // plateau keeps first index
        // Topographic prominence: drop to the higher of the two valley floors
        // reached before a taller sample (or the window edge).
        double left_min = x[i];
        for (std::size_t j = i; j-- > 0 && x[j] <= x[i];) left_min = std::min(left_min, x[j]);
        double right_min = x[i];
        for (std::size_t j = i + 1; j < n && x[j] <= x[i]; ++j) right_min = std::min(right_min, x[j]);
        if (x[i] - std::max(left_min, right_min) >= min_prominence) candidates.push_back(i);
    }

    // Refractory period from the max plausible HR: keep taller peaks first.
    const auto refractory =
        static_cast<std::size_t>(window.sample_rate_hz * 60.0 / opts.max_hr_bpm);
    std::vector<std::size_t> order(candidates.size());
    std::iota(order.begin(), order.end(), std::size_t{0});
    std::stable_sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
        return x[candidates[a]] > x[candidates[b]];
    });
    std::vector<std::size_t> kept;
    for (std::size_t oi : order) {
        const std::size_t p = candidates[oi];
        const bool clear = std::none_of(kept.begin(), kept.end(), [&](std::size_t q) {
            return (p > q ? p - q : q - p) < refractory;
        });
        if (clear) kept.push_back(p);
    }
    std::sort(kept.begin(), kept.end());
    return kept;
}

HrEstimate hr_from_peaks(const SignalWindow& window, const PeakOptions& opts) {
    const auto peaks = find_peaks(window, opts);
    if (peaks.size() < 2) {
        std::ostringstream oss;
        oss << "insufficient peaks: found " << peaks.size() << ", need at least 2";
        throw std::runtime_error(oss.str());
    }
    double sum_ibi_s = 0.0;
    for (std::size_t i = 1; i < peaks.size(); ++i)
        sum_ibi_s += static_cast<double>(peaks[i] - peaks[i - 1]) / window.sample_rate_hz;
    const double mean_ibi_s = sum_ibi_s / static_cast<double>(peaks.size() - 1);

    HrEstimate est;
    est.bpm = 60.0 / mean_ibi_s;
    est.method = Method::PeakIbi;
    return est;
}

HrEstimate estimate_window(const SignalWindow& window, Method method, const Band& band,
                           const PeakOptions& peaks) {
    switch (method) {
        case Method::PeakIbi:
            return hr_from_peaks(window, peaks);
        case Method::FftArgmax:
            return hr_from_spectrum(fft_periodogram(remove_mean(window), band),
                                    Method::FftArgmax);
        case Method::CztArgmax: {
            const auto plan = make_plan(window.samples.size(), window.samples.size(), band.lo_hz,
                                        band.hi_hz, window.sample_rate_hz);
            return hr_from_spectrum(czt_matrix(plan, remove_mean(window)), Method::CztArgmax);
        }
        case Method::DeepCzt:
            throw std::invalid_argument("estimate_window: deep method needs a model");
    }
    throw std::invalid_argument("estimate_window: unknown method");
}

SweepResult sweep_windows(const SignalWindow& signal, const std::vector<std::size_t>& sizes,
                          const std::vector<Method>& methods, const SweepOptions& opts) {
    validate_window(signal);
    for (Method m : methods)
        if (m == Method::DeepCzt)
            throw std::invalid_argument("sweep_windows supports peak|fft|czt only");

    SweepResult result;
    for (std::size_t size : sizes) {
        if (size < 2) throw std::invalid_argument("sweep_windows: window size must be >= 2");
        if (size > signal.samples.size()) {
            std::ostringstream oss;
            oss << "size " << size << " exceeds signal length " << signal.samples.size()
                << "; skipped";
            result.warnings.push_back(oss.str());
            continue;
        }
        // Reuse one plan per size for the CZT method.
        CztPlan plan;
        if (std::find(methods.begin(), methods.end(), Method::CztArgmax) != methods.end())
            plan = make_plan(size, size, opts.band.lo_hz, opts.band.hi_hz, signal.sample_rate_hz);

        const std::size_t chunks = signal.samples.size() / size;
        for (std::size_t c = 0; c < chunks; ++c) {
            SignalWindow chunk;
            chunk.sample_rate_hz = signal.sample_rate_hz;
            chunk.samples.assign(signal.samples.begin() + static_cast<std::ptrdiff_t>(c * size),
                                 signal.samples.begin() + static_cast<std::ptrdiff_t>((c + 1) * size));
            for (Method m : methods) {
                SweepRow row;
                row.window_size = size;
                row.window_index = c;
                row.method = m;
                try {
                    if (m == Method::CztArgmax) {
                        row.estimate = hr_from_spectrum(czt_matrix(plan, remove_mean(chunk)),
                                                        Method::CztArgmax);
                    } else {
                        row.estimate = estimate_window(chunk, m, opts.band, opts.peaks);
                    }
                } catch (const std::exception& e) {
                    row.error = e.what();
                }
                result.rows.push_back(std::move(row));
            }
        }
    }
    return result;
}

}  // namespace czthr
