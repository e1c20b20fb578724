#pragma once

#include <cstdint>

#include "gdss/codes.hpp"
#include "gdss/config.hpp"
#include "gdss/waveform.hpp"

namespace gdss {

/// Ground truth of a single point target.
struct ChannelTruth {
    double delay = 0.0;    // t_d, seconds
    double doppler = 0.0;  // f_D, Hz
    cplx alpha{1.0, 0.0};

    /// Truth from a delay in T_s units and a Doppler in df units.
    static ChannelTruth normalized(double delay_samples, double doppler_bins, const RadarParams& params,
                                   cplx alpha = {1.0, 0.0});
};

/// Nearest-integer split of delay and Doppler; ties round to even.
struct TruthCells {
    long long lag = 0;         // l_d
    double frac_delay = 0.0;   // eps_t in [-1/2, 1/2]
    long long bin = 0;         // k_D
    double frac_doppler = 0.0; // eps_f in [-1/2, 1/2]
};

TruthCells decompose(const ChannelTruth& truth, const RadarParams& params);

/// True when N_t T_c <= t_d <= (N - N_t) T_c.
bool delay_in_window(double delay, const RadarParams& params);

/**
 * Noiseless echo r[j] = alpha s(j T_s - t_d) exp(i 2 pi f_D j T_s), with s the
 * transmitted pulse evaluated in continuous time. Throws std::domain_error
 * when the delay is outside the detectability window.
 */
ComplexSignal apply_channel(const CodeMatrix& code, const RadarParams& params, const ChannelTruth& truth);

/// Entry H_ij of the ideal-sinc sampled channel, i the receive index and j
/// the transmit index.
cplx h_matrix_entry(long long i, long long j, const ChannelTruth& truth, const RadarParams& params);

/// Per-sample noise variance for a target SNR: ref_energy / (N M 10^{snr/10}).
double noise_variance(double snr_db, double ref_energy, const RadarParams& params);

/**
 * Adds circular complex white Gaussian noise, real and imaginary parts each
 * of variance sigma^2/2. An SNR of +infinity returns the input unchanged.
 * Throws std::invalid_argument if ref_energy is not positive.
 */
ComplexSignal add_noise(const ComplexSignal& signal, double snr_db, std::uint64_t seed, const RadarParams& params,
                        double ref_energy);

/// Zeroes every sample with index below L; the receiver is blind while the
/// pulse is being transmitted.
ComplexSignal apply_receive_gating(const ComplexSignal& signal, const RadarParams& params);

}  // namespace gdss
