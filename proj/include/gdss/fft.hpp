#pragma once

#include <complex>
#include <span>

namespace gdss {

using cplx = std::complex<double>;

/// In-place forward DFT, X[k] = sum_j x[j] exp(-2 pi i k j / n), backed by
/// FFTW. Plans are cached per length; safe to call from several threads.
void fft_forward(std::span<cplx> data);

}  // namespace gdss
