#include "czthr/signal.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <sstream>
#include <stdexcept>

namespace czthr {

void validate_window(const SignalWindow& window) {
    if (window.samples.size() < 2)
        throw std::invalid_argument("signal window must hold at least 2 samples");
    if (!(window.sample_rate_hz > 0.0))
        throw std::invalid_argument("signal window sample rate must be positive");
    for (std::size_t i = 0; i < window.samples.size(); ++i) {
        if (!std::isfinite(window.samples[i])) {
            std::ostringstream oss;
            oss << "signal window sample " << i << " is not finite";
            throw std::invalid_argument(oss.str());
        }
    }
}

double mean(const std::vector<double>& values) {
    if (values.empty()) return 0.0;
    return std::accumulate(values.begin(), values.end(), 0.0) /
           static_cast<double>(values.size());
}

SignalWindow remove_mean(const SignalWindow& window) {
    SignalWindow out = window;
    const double m = mean(out.samples);
    for (auto& v : out.samples) v -= m;
    return out;
}

double percentile(std::vector<double> values, double q) {
    if (values.empty()) throw std::invalid_argument("percentile of empty vector");
    std::sort(values.begin(), values.end());
    const double pos = (q / 100.0) * static_cast<double>(values.size() - 1);
    const std::size_t lo = static_cast<std::size_t>(pos);
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    const double frac = pos - static_cast<double>(lo);
    return values[lo] * (1.0 - frac) + values[hi] * frac;
}

}  // namespace czthr
