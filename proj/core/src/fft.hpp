#pragma once

#include <complex>
#include <span>
#include <vector>

namespace nlslab::detail {

// unnormalized multi-dimensional DFT; sign -1 forward, +1 backward
void fft(std::span<const int> dims, const std::complex<double>* in, std::complex<double>* out, int sign);

}  // namespace nlslab::detail
