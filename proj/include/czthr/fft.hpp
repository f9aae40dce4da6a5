#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace czthr::fft {

bool is_pow2(std::size_t n);
std::size_t next_pow2(std::size_t n);

/// In-place radix-2 Cooley-Tukey transform. Size must be a power of two.
/// The inverse applies the 1/n scale.
void fft_pow2(std::vector<std::complex<double>>& a, bool inverse);

/// Forward DFT of arbitrary length: radix-2 when possible, otherwise
/// Bluestein's chirp convolution.
std::vector<std::complex<double>> dft(std::vector<std::complex<double>> x);

std::vector<std::complex<double>> dft_real(const std::vector<double>& x);

}  // namespace czthr::fft
