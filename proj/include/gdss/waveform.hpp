#pragma once

#include <span>
#include <vector>

#include "gdss/codes.hpp"
#include "gdss/config.hpp"
#include "gdss/fft.hpp"

namespace gdss {

/// Complex baseband samples spaced `sample_period` apart, index 0 first.
struct ComplexSignal {
    std::vector<cplx> samples;
    double sample_period = 1.0;

    std::size_t size() const { return samples.size(); }
    double energy() const;
};

/// Prototype pulse 2^{1/4} exp(-pi t^2), t in units of T_c.
double gaussian_pulse(double t);

/// Samples of the prototype are kept for |j| <= 3M/2 (3M samples total).
inline bool within_pulse_window(long long offset, int M) { return 2 * (offset < 0 ? -offset : offset) <= 3LL * M; }

/**
 * Discrete transmitted pulse
 *
 *   s[j] = (1/M) sum_{n<N_t} sum_{m=-N_f/2}^{N_f/2-1} X_tf[n,m] g[j - nM] W_M^{-mj}
 *
 * over j in [0, N*M), with g[j] = gaussian_pulse(j/M) truncated to the 3M
 * window. Contributions that fall at j < 0 are dropped.
 */
ComplexSignal synthesize_discrete(const CodeMatrix& code, const RadarParams& params);

/// Which continuous-time signal evaluate_continuous returns.
enum class PulseSupport {
    /// The untruncated Gaussian sum, defined for all t.
    analytic,
    /// The continuous counterpart of synthesize_discrete: each slot's
    /// Gaussian cut to |t/T_c - n| <= 3/2 and nothing before t = 0, so
    /// sampling at t = j T_s reproduces s[j].
    transmitted,
};

/**
 * s(t) = (1/M) sum_n sum_m X_tf[n,m] g(t/T_c - n) exp(i 2 pi m F_c t).
 *
 * Carries the same 1/M factor as the discrete pulse so both agree sample for
 * sample. `t` is in seconds.
 */
cplx evaluate_continuous(const CodeMatrix& code, const RadarParams& params, double t,
                         PulseSupport support = PulseSupport::analytic);

/// Vectorized evaluate_continuous over `times`.
std::vector<cplx> evaluate_continuous(const CodeMatrix& code, const RadarParams& params, std::span<const double> times,
                                      PulseSupport support = PulseSupport::analytic);

}  // namespace gdss
