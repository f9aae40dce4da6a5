#include "czthr/czt.hpp"

#include <cmath>
#include <numbers>
#include <sstream>
#include <stdexcept>

#include "czthr/fft.hpp"

namespace czthr {

namespace {

constexpr double kTwoPi = 2.0 * std::numbers::pi;

void check_transform_inputs(const CztPlan& plan, const SignalWindow& window) {
    validate_window(window);
    if (window.samples.size() != plan.n_input) {
        std::ostringstream oss;
        oss << "window length " << window.samples.size() << " does not match plan N="
            << plan.n_input;
        throw std::invalid_argument(oss.str());
    }
    const double fs = plan.sample_rate_hz;
    if (std::abs(window.sample_rate_hz - fs) > 1e-9 * fs) {
        std::ostringstream oss;
        oss << "window sample rate " << window.sample_rate_hz << " does not match plan rate "
            << fs;
        throw std::invalid_argument(oss.str());
    }
}

// Shared table construction once the contour parameters are fixed.
void materialize(CztPlan& plan) {
    const std::size_t n = plan.n_input;
    const std::size_t m = plan.m_bins;

    plan.a_point = {std::cos(plan.phase_start), std::sin(plan.phase_start)};
    plan.w_ratio = {std::cos(plan.phase_step), -std::sin(plan.phase_step)};

    plan.a_re.resize(n);
    plan.a_im.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double ang = plan.phase_start * static_cast<double>(j);
        plan.a_re[j] = std::cos(ang);
        plan.a_im[j] = -std::sin(ang);
    }

    plan.w_re.resize(m * n);
    plan.w_im.resize(m * n);
    for (std::size_t k = 0; k < m; ++k) {
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = plan.phase_step * static_cast<double>(k) * static_cast<double>(j);
            plan.w_re[k * n + j] = std::cos(ang);
            plan.w_im[k * n + j] = -std::sin(ang);
        }
    }

    // Chirp-convolution tables: with W = exp(-i*step), W^{t^2/2} has angle
    // -step*t^2/2.
    plan.conv_len = fft::next_pow2(n + m - 1);
    plan.chirp_in.resize(n);
    for (std::size_t j = 0; j < n; ++j) {
        const double ang = 0.5 * plan.phase_step * static_cast<double>(j) * static_cast<double>(j);
        const std::complex<double> half_chirp{std::cos(ang), -std::sin(ang)};
        plan.chirp_in[j] = std::complex<double>{plan.a_re[j], plan.a_im[j]} * half_chirp;
    }
    plan.chirp_out.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double ang = 0.5 * plan.phase_step * static_cast<double>(k) * static_cast<double>(k);
        plan.chirp_out[k] = {std::cos(ang), -std::sin(ang)};
    }
    std::vector<std::complex<double>> kernel(plan.conv_len, {0.0, 0.0});
    for (std::size_t t = 0; t < m; ++t) {
        const double ang = 0.5 * plan.phase_step * static_cast<double>(t) * static_cast<double>(t);
        kernel[t] = {std::cos(ang), std::sin(ang)};  // W^{-t^2/2}
    }
    for (std::size_t t = 1; t < n; ++t) {
        const double ang = 0.5 * plan.phase_step * static_cast<double>(t) * static_cast<double>(t);
        kernel[plan.conv_len - t] = {std::cos(ang), std::sin(ang)};
    }
    fft::fft_pow2(kernel, false);
    plan.kernel_fft = std::move(kernel);
}

Spectrum magnitude_of(ComplexSpectrum cs) {
    Spectrum out;
    out.freqs_hz = std::move(cs.freqs_hz);
    out.values.resize(cs.re.size());
    for (std::size_t k = 0; k < cs.re.size(); ++k) out.values[k] = std::hypot(cs.re[k], cs.im[k]);
    out.normalized = false;
    return out;
}

}  // namespace

std::vector<double> CztPlan::freqs_hz() const {
    std::vector<double> f(m_bins);
    for (std::size_t k = 0; k < m_bins; ++k) f[k] = freq_at(k);
    return f;
}

CztPlan make_plan(std::size_t n_input, std::size_t m_bins, double f_start_hz, double f_end_hz,
                  double sample_rate_hz) {
    if (n_input < 2) throw std::invalid_argument("make_plan: n_input must be >= 2");
    if (m_bins < 2) throw std::invalid_argument("make_plan: m_bins must be >= 2");
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("make_plan: sample rate must be positive");
    if (f_start_hz < 0.0) throw std::invalid_argument("make_plan: f_start must be nonnegative");
    if (!(f_start_hz < f_end_hz)) throw std::invalid_argument("make_plan: f_start must be below f_end");
    const double nyquist = sample_rate_hz / 2.0;
    if (f_end_hz > nyquist * (1.0 + 1e-12)) {
        std::ostringstream oss;
        oss << "make_plan: f_end " << f_end_hz << " Hz exceeds Nyquist " << nyquist << " Hz";
        throw std::invalid_argument(oss.str());
    }

    CztPlan plan;
    plan.n_input = n_input;
    plan.m_bins = m_bins;
    plan.f_start_hz = f_start_hz;
    plan.f_end_hz = f_end_hz;
    plan.sample_rate_hz = sample_rate_hz;
    plan.phase_start = kTwoPi * f_start_hz / sample_rate_hz;
    plan.phase_step = kTwoPi * plan.bin_step_hz() / sample_rate_hz;
    materialize(plan);
    return plan;
}

CztPlan make_hr_plan(std::size_t n_input, double sample_rate_hz) {
    return make_plan(n_input, n_input, kDefaultBandLoHz, kDefaultBandHiHz, sample_rate_hz);
}

CztPlan make_dft_plan(std::size_t n, double sample_rate_hz) {
    if (n < 2) throw std::invalid_argument("make_dft_plan: n must be >= 2");
    if (!(sample_rate_hz > 0.0))
        throw std::invalid_argument("make_dft_plan: sample rate must be positive");

    CztPlan plan;
    plan.n_input = n;
    plan.m_bins = n;
    plan.f_start_hz = 0.0;
    plan.f_end_hz = sample_rate_hz * static_cast<double>(n - 1) / static_cast<double>(n);
    plan.sample_rate_hz = sample_rate_hz;
    plan.phase_start = 0.0;
    plan.phase_step = kTwoPi / static_cast<double>(n);
    materialize(plan);
    return plan;
}

ComplexSpectrum czt_matrix_complex(const CztPlan& plan, const SignalWindow& window) {
    check_transform_inputs(plan, window);
    const std::size_t n = plan.n_input;
    const std::size_t m = plan.m_bins;
    const std::vector<double>& x = window.samples;

    std::vector<double> ax_re(n), ax_im(n);
    for (std::size_t j = 0; j < n; ++j) {
        ax_re[j] = plan.a_re[j] * x[j];
        ax_im[j] = plan.a_im[j] * x[j];
    }

    ComplexSpectrum out;
    out.freqs_hz = plan.freqs_hz();
    out.re.resize(m);
    out.im.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double* wr = &plan.w_re[k * n];
        const double* wi = &plan.w_im[k * n];
        double acc_re = 0.0;
        double acc_im = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            acc_re += wr[j] * ax_re[j] - wi[j] * ax_im[j];
            acc_im += wi[j] * ax_re[j] + wr[j] * ax_im[j];
        }
        out.re[k] = acc_re;
        out.im[k] = acc_im;
    }
    return out;
}

ComplexSpectrum czt_direct_complex(const CztPlan& plan, const SignalWindow& window) {
    check_transform_inputs(plan, window);
    const std::size_t n = plan.n_input;
    const std::size_t m = plan.m_bins;
    const std::vector<double>& x = window.samples;

    ComplexSpectrum out;
    out.freqs_hz = plan.freqs_hz();
    out.re.resize(m);
    out.im.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        // z_k^{-j} = exp(-i * j * phi_k) with phi_k the contour angle at bin k
        const double phi = plan.phase_start + plan.phase_step * static_cast<double>(k);
        double acc_re = 0.0;
        double acc_im = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            const double ang = phi * static_cast<double>(j);
            acc_re += x[j] * std::cos(ang);
            acc_im -= x[j] * std::sin(ang);
        }
        out.re[k] = acc_re;
        out.im[k] = acc_im;
    }
    return out;
}

ComplexSpectrum czt_fast_complex(const CztPlan& plan, const SignalWindow& window) {
    check_transform_inputs(plan, window);
    const std::size_t n = plan.n_input;
    const std::size_t m = plan.m_bins;

    std::vector<std::complex<double>> buf(plan.conv_len, {0.0, 0.0});
    for (std::size_t j = 0; j < n; ++j) buf[j] = window.samples[j] * plan.chirp_in[j];
    fft::fft_pow2(buf, false);
    for (std::size_t t = 0; t < plan.conv_len; ++t) buf[t] *= plan.kernel_fft[t];
    fft::fft_pow2(buf, true);

    ComplexSpectrum out;
    out.freqs_hz = plan.freqs_hz();
    out.re.resize(m);
    out.im.resize(m);
    for (std::size_t k = 0; k < m; ++k) {
        const std::complex<double> v = buf[k] * plan.chirp_out[k];
        out.re[k] = v.real();
        out.im[k] = v.imag();
    }
    return out;
}

Spectrum czt_matrix(const CztPlan& plan, const SignalWindow& window) {
    return magnitude_of(czt_matrix_complex(plan, window));
}

Spectrum czt_direct(const CztPlan& plan, const SignalWindow& window) {
    return magnitude_of(czt_direct_complex(plan, window));
}

Spectrum czt_fast(const CztPlan& plan, const SignalWindow& window) {
    return magnitude_of(czt_fast_complex(plan, window));
}

Spectrum fft_periodogram(const SignalWindow& window, Band band, std::size_t zero_pad_to,
                         bool welch) {
    validate_window(window);
    const double fs = window.sample_rate_hz;
    const double nyquist = fs / 2.0;
    if (!(band.lo_hz > 0.0) || !(band.lo_hz < band.hi_hz) ||
        band.hi_hz > nyquist * (1.0 + 1e-12)) {
        throw std::invalid_argument("fft_periodogram: band must lie within (0, Nyquist]");
    }
    const std::size_t n = window.samples.size();
    if (zero_pad_to != 0 && zero_pad_to < n)
        throw std::invalid_argument("fft_periodogram: zero_pad_to must be >= window length");

    std::vector<double> psd;     // magnitude-squared on the DFT grid
    std::size_t grid_len = 0;    // transform length defining the grid step

    if (!welch) {
        grid_len = zero_pad_to != 0 ? zero_pad_to : n;
        std::vector<double> padded(window.samples);
        padded.resize(grid_len, 0.0);
        const auto spec = fft::dft_real(padded);
        psd.resize(grid_len);
        for (std::size_t j = 0; j < grid_len; ++j) psd[j] = std::norm(spec[j]);
    } else {
        const std::size_t seg_len = n / 2;
        if (seg_len < 4)
            throw std::invalid_argument("fft_periodogram: window too short for Welch segments");
        const std::size_t hop = seg_len / 2;
        grid_len = (zero_pad_to != 0 && zero_pad_to > seg_len) ? zero_pad_to : seg_len;
        psd.assign(grid_len, 0.0);
        std::size_t count = 0;
        std::vector<double> seg(grid_len);
        for (std::size_t start = 0; start + seg_len <= n; start += hop) {
            std::fill(seg.begin(), seg.end(), 0.0);
            for (std::size_t j = 0; j < seg_len; ++j) {
                const double hann =
                    0.5 * (1.0 - std::cos(kTwoPi * static_cast<double>(j) /
                                          static_cast<double>(seg_len - 1)));
                seg[j] = window.samples[start + j] * hann;
            }
            const auto spec = fft::dft_real(seg);
            for (std::size_t j = 0; j < grid_len; ++j) psd[j] += std::norm(spec[j]);
            ++count;
        }
        for (auto& v : psd) v /= static_cast<double>(count);
    }

    Spectrum out;
    const double step = fs / static_cast<double>(grid_len);
    for (std::size_t j = 0; j < grid_len; ++j) {
        const double f = step * static_cast<double>(j);
        if (f >= band.lo_hz - 1e-12 && f <= band.hi_hz + 1e-12) {
            out.freqs_hz.push_back(f);
            out.values.push_back(psd[j]);
        }
    }
    if (out.freqs_hz.empty()) {
        std::ostringstream oss;
        oss << "fft_periodogram: band [" << band.lo_hz << ", " << band.hi_hz
            << "] Hz is too narrow for the " << step << " Hz grid";
        throw std::runtime_error(oss.str());
    }
    out.normalized = false;
    return out;
}

}  // namespace czthr
