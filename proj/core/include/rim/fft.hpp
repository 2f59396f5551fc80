#pragma once

#include <complex>
#include <vector>

namespace rim::fft {

/// Unnormalized forward DFT, X[m] = sum_n x[n] e^{-j 2 pi m n / N}.
void forward(std::vector<std::complex<double>>& data);

/// Unnormalized inverse DFT (positive exponent, no 1/N factor).
void inverse(std::vector<std::complex<double>>& data);

/// Forward DFT of `input` zero-padded to `padded_size`.
std::vector<std::complex<double>> forward_padded(
    const std::vector<std::complex<double>>& input, std::size_t padded_size);

/// Inverse (positive-exponent) DFT of `input` zero-padded to `padded_size`.
std::vector<std::complex<double>> inverse_padded(
    const std::vector<std::complex<double>>& input, std::size_t padded_size);

}  // namespace rim::fft
