#pragma once

#include <complex>
#include <cstddef>
#include <vector>

#include "czthr/signal.hpp"

namespace czthr {

inline constexpr double kDefaultBandLoHz = 0.66;
inline constexpr double kDefaultBandHiHz = 3.0;

/// Zoom-transform parameterization: the spiral contour z_k = A * W^{-k}
/// restricted to the unit circle, with every derived table materialized once
/// so transforms are pure matrix/vector work.
///
/// Bin k maps to f_k = f_start + k * (f_end - f_start) / (m_bins - 1),
/// endpoint-inclusive.
struct CztPlan {
    std::size_t n_input = 0;
    std::size_t m_bins = 0;
    double f_start_hz = 0.0;
    double f_end_hz = 0.0;
    double sample_rate_hz = 0.0;

    std::complex<double> a_point{1.0, 0.0};  // exp(+i * phase_start)
    std::complex<double> w_ratio{1.0, 0.0};  // exp(-i * phase_step)
    double phase_start = 0.0;                // 2*pi*f_start/fs
    double phase_step = 0.0;                 // 2*pi*bin_step/fs

    // Vandermonde blocks, m_bins x n_input row-major:
    //   w_re[k*n+j] = cos(phase_step*k*j), w_im[k*n+j] = -sin(phase_step*k*j)
    std::vector<double> w_re;
    std::vector<double> w_im;
    // Diagonal of A applied to a real signal: a_re[j] = cos(phase_start*j),
    // a_im[j] = -sin(phase_start*j), i.e. Re/Im of A^{-j}.
    std::vector<double> a_re;
    std::vector<double> a_im;

    // Chirp-convolution state for czt_fast.
    std::size_t conv_len = 0;
    std::vector<std::complex<double>> chirp_in;    // A^{-n} * W^{n^2/2}, length n_input
    std::vector<std::complex<double>> chirp_out;   // W^{k^2/2}, length m_bins
    std::vector<std::complex<double>> kernel_fft;  // FFT of W^{-m^2/2} kernel

    double bin_step_hz() const { return (f_end_hz - f_start_hz) / static_cast<double>(m_bins - 1); }
    double freq_at(std::size_t k) const { return f_start_hz + bin_step_hz() * static_cast<double>(k); }
    std::vector<double> freqs_hz() const;
};

/// Builds a plan for the band [f_start, f_end]. Rejects n_input < 2,
/// m_bins < 2, f_start < 0, f_start >= f_end and f_end above Nyquist.
CztPlan make_plan(std::size_t n_input, std::size_t m_bins, double f_start_hz, double f_end_hz,
                  double sample_rate_hz);

/// Plan with the default heart-rate band [0.66, 3.0] Hz and m_bins = n_input.
CztPlan make_hr_plan(std::size_t n_input, double sample_rate_hz);

/// Degenerate full-circle contour (A = 1, W = exp(-i*2*pi/n), M = N) whose
/// bins coincide with the DFT grid. Bypasses the Nyquist band check; meant
/// for verification against an FFT.
CztPlan make_dft_plan(std::size_t n, double sample_rate_hz);

/// Complex-valued zoom spectrum, kept split in Re/Im for the tests that need
/// to see the transform before the modulus.
struct ComplexSpectrum {
    std::vector<double> freqs_hz;
    std::vector<double> re;
    std::vector<double> im;
};

/// Matrix-form evaluation through the real block expansion
/// [X_Re; X_Im] = [[W_Re, -W_Im], [W_Im, W_Re]] [Ax_Re; Ax_Im].
ComplexSpectrum czt_matrix_complex(const CztPlan& plan, const SignalWindow& window);

/// Brute-force per-bin summation of sum_n x[n] z_k^{-n}; the oracle the other
/// two evaluation routes are checked against.
ComplexSpectrum czt_direct_complex(const CztPlan& plan, const SignalWindow& window);

/// Bluestein chirp-convolution evaluation, O((N+M) log(N+M)).
ComplexSpectrum czt_fast_complex(const CztPlan& plan, const SignalWindow& window);

Spectrum czt_matrix(const CztPlan& plan, const SignalWindow& window);
Spectrum czt_direct(const CztPlan& plan, const SignalWindow& window);
Spectrum czt_fast(const CztPlan& plan, const SignalWindow& window);

/// Magnitude-squared DFT spectrum masked to the band. With `welch` set,
/// averages Hann-windowed half-length segments at 50% overlap instead of the
/// single periodogram; zero_pad_to (when nonzero, >= segment length) sets the
/// transform length. No detrending happens here: callers that want the window
/// mean removed (the estimation pipeline does) apply remove_mean first.
Spectrum fft_periodogram(const SignalWindow& window, Band band, std::size_t zero_pad_to = 0,
                         bool welch = false);

}  // namespace czthr
