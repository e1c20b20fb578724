#pragma once

#include <string>
#include <vector>

#include "gdss/ambiguity.hpp"
#include "gdss/config.hpp"
#include "gdss/optimizer.hpp"
#include "gdss/waveform.hpp"

namespace gdss {

/// Coarse target cell: integer lag and signed Doppler bin.
struct Detection {
    int lag = 0;
    int bin = 0;
    double peak_mag = 0.0;

    friend bool operator==(const Detection&, const Detection&) = default;
};

enum class Method { sinc2d, quadratic };

std::string to_string(Method method);
Method parse_method(const std::string& name);

struct Estimate {
    Detection detection;
    double eps_t = 0.0;  // fractional delay, T_s units, in [-1/2, 1/2]
    double eps_f = 0.0;  // fractional Doppler, df units, in [-1/2, 1/2]
    double alpha = 0.0;
    Method method = Method::sinc2d;
    bool converged = true;
    bool degenerate = false;  // quadratic stencil had no interior maximum
    int iterations = 0;
    double residual = 0.0;    // least-squares residual at the returned point (sinc2d)

    double delay_samples() const { return detection.lag + eps_t; }
    double doppler_bins() const { return detection.bin + eps_f; }
    double delay_seconds(const RadarParams& p) const { return delay_samples() * p.T_s; }
    double doppler_hz(const RadarParams& p) const { return doppler_bins() * p.df; }
};

inline constexpr double kDefaultThreshold = 0.5;

/// Optimizer contract for the sinc fit.
inline NelderMeadOptions sinc_fit_options() { return NelderMeadOptions{1e-8, 1e-8, 200, 0.1}; }

/**
 * Every cell with |A| > theta that is the largest magnitude within
 * +/- (floor(M/N_f), floor(N/N_t)) cells of itself; Doppler wraps. Sorted by
 * decreasing peak magnitude; empty when nothing crosses theta.
 */
std::vector<Detection> coarse_detect(const AmbiguitySurface& surface, double theta, const RadarParams& params);

/// |A| on the fit grid around a detection: rows l in [-M/N_f, M/N_f],
/// columns k in [-N/N_t, N/N_t], row-major.
std::vector<double> fit_grid_magnitudes(const AmbiguitySurface& surface, const Detection& det, const RadarParams& params);

struct SincFit {
    double residual = 0.0;
    double alpha = 0.0;
};

/// Least-squares residual of the sinc lobe shifted by (eps_t, eps_f) against
/// fit-grid magnitudes, with the amplitude solved in closed form (>= 0).
SincFit sinc_fit_residual(std::span<const double> grid, double eps_t, double eps_f, const RadarParams& params);

/// Three-point parabola vertex (plus - minus) / (4 centre - 2 plus - 2 minus).
/// NaN when the denominator is not positive (no interior maximum).
double quadratic_offset(double minus, double centre, double plus);

/// Fractional refinement by fitting the 2D sinc lobe.
Estimate refine_sinc2d(const AmbiguitySurface& surface, const Detection& det, const RadarParams& params,
                       const NelderMeadOptions& options = sinc_fit_options());

/// Fractional refinement from the five-point stencil.
Estimate refine_quadratic(const AmbiguitySurface& surface, const Detection& det);

/// Returns `surface` widened, if needed, so the refinement stencil of `det`
/// lies inside it.
AmbiguitySurface ensure_fit_coverage(const AmbiguitySurface& surface, const Detection& det, const ComplexSignal& r,
                                     const ComplexSignal& s, const RadarParams& params);

/// Normalized receiver surface: discrete_ambiguity over `window` divided by
/// A_ss[0, 0] = sum |s|^2.
AmbiguitySurface receiver_surface(const ComplexSignal& r, const ComplexSignal& s, LagWindow window,
                                  const RadarParams& params);

/// Full pipeline: normalized surface over `window`, coarse detection, then
/// per-detection refinement with `method`.
std::vector<Estimate> estimate(const ComplexSignal& r, const ComplexSignal& s, double theta, Method method,
                               const RadarParams& params, LagWindow window);
std::vector<Estimate> estimate(const ComplexSignal& r, const ComplexSignal& s, double theta, Method method,
                               const RadarParams& params);

}  // namespace gdss
