#pragma once

#include <span>
#include <vector>

#include "gdss/codes.hpp"
#include "gdss/config.hpp"
#include "gdss/waveform.hpp"

namespace gdss {

/// Inclusive range of integer delay lags.
struct LagWindow {
    int lo = 0;
    int hi = 0;

    int size() const { return hi - lo + 1; }
    bool contains(int lag) const { return lag >= lo && lag <= hi; }
};

/// Detectability window [N_t M, (N - N_t) M] used by the receiver.
LagWindow receiver_window(const RadarParams& params);

/// Every lag at which two frame-length signals overlap.
LagWindow full_window(const RadarParams& params);

/**
 * Cross-ambiguity values A[l, k] for lags l in a window and all N*M Doppler
 * bins. Bins are stored 0..NM-1; bins above NM/2 stand for negative Doppler.
 * `scale` records the factor the raw values were divided by (1 when raw).
 */
class AmbiguitySurface {
public:
    AmbiguitySurface(LagWindow window, int bins, std::vector<cplx> values, double scale = 1.0);

    const LagWindow& window() const { return window_; }
    int bins() const { return bins_; }
    double scale() const { return scale_; }

    bool has_lag(int lag) const { return window_.contains(lag); }

    /// Value at (lag, bin); bin is taken modulo the bin count. Throws
    /// std::out_of_range for a lag outside the window.
    cplx at(int lag, int bin) const;
    double magnitude(int lag, int bin) const { return std::abs(at(lag, bin)); }

    /// One lag row, NM values.
    std::span<const cplx> row(int lag) const;

    /// Bin index mapped to (-NM/2, NM/2].
    int signed_bin(int bin) const;

    /// Copy with every value divided by `reference`.
    AmbiguitySurface normalized(double reference) const;

    /// Copy covering `wider` (which must contain the current window); the
    /// new rows are computed from r and s and scaled to match.
    AmbiguitySurface extended(LagWindow wider, const ComplexSignal& r, const ComplexSignal& s) const;

    const std::vector<cplx>& values() const { return values_; }

private:
    LagWindow window_;
    int bins_;
    std::vector<cplx> values_;
    double scale_;
};

/**
 * A[l, k] = sum_j r[j] s*[j - l] W_NM^{kj}, W_NM = exp(-2 pi i / NM), with
 * s[j - l] = 0 outside the frame. Each lag row is one NM-point FFT of the
 * shifted product. Throws std::invalid_argument on length mismatch, on a
 * length other than N*M, or on an empty window or one outside full_window.
 */
AmbiguitySurface discrete_ambiguity(const ComplexSignal& r, const ComplexSignal& s, LagWindow window,
                                    const RadarParams& params);

/**
 * Riemann-sum continuous ambiguity
 *   A(tau, nu) ~ T_s sum_j x[j] y*(j T_s - tau) exp(-2 pi i nu j T_s)
 * where y is the transmitted pulse of `y_code` in continuous time. tau in
 * seconds, nu in Hz.
 */
cplx continuous_ambiguity(const ComplexSignal& x, const CodeMatrix& y_code, double tau, double nu,
                          const RadarParams& params);

/// continuous_ambiguity on the grid taus x nus, row-major by tau.
std::vector<cplx> continuous_ambiguity_grid(const ComplexSignal& x, const CodeMatrix& y_code,
                                            std::span<const double> taus, std::span<const double> nus,
                                            const RadarParams& params);

/// |sinc(N_f ell / M) sinc(N_t k / N)|: normalized main-lobe magnitude at a
/// delay offset `ell` (T_s units) and Doppler offset `k` (df units).
double sinc_model(double ell, double k, const RadarParams& params);

inline constexpr double kDefaultConformanceDelta = 0.05;
inline constexpr int kDefaultOversample = 8;

struct ConformanceResult {
    double score = 0.0;  // max |A|/|A(0,0)| - model deviation over the grid
    bool pass = false;
    double worst_ell = 0.0;  // location of the largest deviation, T_s units
    double worst_k = 0.0;    // df units
};

/**
 * Compares the normalized auto-ambiguity of the code's pulse with
 * sinc_model over |tau| <= (M/N_f) T_s and |nu| <= (N/N_t) df, sampled at
 * `oversample` points per lag and per bin. Throws std::invalid_argument if
 * oversample < 4.
 */
ConformanceResult sinc_conformance(const CodeMatrix& code, const RadarParams& params,
                                   int oversample = kDefaultOversample, double delta = kDefaultConformanceDelta);

}  // namespace gdss
