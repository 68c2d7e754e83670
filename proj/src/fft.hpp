#pragma once

#include <complex>
#include <cstddef>
#include <vector>

namespace cyclotopo::detail {

/// Forward DFT, X[f] = sum_n x[n] exp(-2 pi i f n / N). Plans are cached and
/// reused per length.
void fft_forward(std::vector<std::complex<double>>& inout);

/// Many forward transforms of length n stored back to back.
void fft_forward_many(std::complex<double>* data, std::size_t n, std::size_t howmany);

}  // namespace cyclotopo::detail
