#pragma once

#include <complex>
#include <span>
#include <vector>

namespace kgs::fft {

enum class Sign { forward = -1, backward = +1 };

/// Unnormalized in-place multidimensional DFT over a row-major array with
/// the given extents. Plans are created once per (extents, sign) and shared.
void execute(std::span<std::complex<double>> data, std::span<const int> extents, Sign sign);

/// Forward transform scaled by 1/size, so a constant c maps to c at mode 0.
void forward_normalized(std::span<std::complex<double>> data, std::span<const int> extents);

/// Plain inverse (sum over modes); inverse of forward_normalized.
void backward(std::span<std::complex<double>> data, std::span<const int> extents);

}  // namespace kgs::fft
