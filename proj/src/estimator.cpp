#include "gdss/estimator.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

namespace gdss {
namespace {

constexpr double kHalf = 0.5;

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

double clamp_half(double v) { return std::clamp(v, -kHalf, kHalf); }

int wrap(int bin, int bins) {
    int b = bin % bins;
    return b < 0 ? b + bins : b;
}

}  // namespace

std::string to_string(Method method) { return method == Method::sinc2d ? "sinc2d" : "quadratic"; }

Method parse_method(const std::string& name) {
    if (name == "sinc2d") return Method::sinc2d;
    if (name == "quadratic") return Method::quadratic;
    throw std::invalid_argument("unknown method '" + name + "' (expected sinc2d or quadratic)");
}

std::vector<Detection> coarse_detect(const AmbiguitySurface& surface, double theta, const RadarParams& params) {
    if (!(theta > 0.0)) throw std::invalid_argument("coarse_detect: threshold must be positive");
    const LagWindow w = surface.window();
    const int bins = surface.bins();
    const int lag_r = params.lag_half_width();
    const int bin_r = std::min(params.bin_half_width(), bins / 2);

    std::vector<Detection> found;
    for (int lag = w.lo; lag <= w.hi; ++lag) {
        const auto row = surface.row(lag);
        for (int b = 0; b < bins; ++b) {
            const double mag = std::abs(row[static_cast<std::size_t>(b)]);
            if (!(mag > theta)) continue;

            // Keep only the neighbourhood maximum; equal magnitudes go to the
            // cell that comes first in (lag, bin) scan order.
            bool is_max = true;
            for (int dl = -lag_r; dl <= lag_r && is_max; ++dl) {
                const int l2 = lag + dl;
                if (!w.contains(l2)) continue;
                const auto row2 = surface.row(l2);
                for (int dk = -bin_r; dk <= bin_r; ++dk) {
                    if (dl == 0 && dk == 0) continue;
                    const int b2 = wrap(b + dk, bins);
                    const double other = std::abs(row2[static_cast<std::size_t>(b2)]);
                    const bool earlier = l2 < lag || (l2 == lag && b2 < b);
                    if (other > mag || (other == mag && earlier)) {
                        is_max = false;
                        break;
                    }
                }
            }
            if (is_max) found.push_back(Detection{lag, surface.signed_bin(b), mag});
        }
    }
    std::stable_sort(found.begin(), found.end(),
                     [](const Detection& a, const Detection& b) { return a.peak_mag > b.peak_mag; });
    return found;
}

std::vector<double> fit_grid_magnitudes(const AmbiguitySurface& surface, const Detection& det,
                                        const RadarParams& params) {
    const int lr = params.lag_half_width();
    const int kr = params.bin_half_width();
    std::vector<double> grid;
    grid.reserve(static_cast<std::size_t>((2 * lr + 1) * (2 * kr + 1)));
    for (int dl = -lr; dl <= lr; ++dl)
        for (int dk = -kr; dk <= kr; ++dk) grid.push_back(surface.magnitude(det.lag + dl, det.bin + dk));
    return grid;
}

SincFit sinc_fit_residual(std::span<const double> grid, double eps_t, double eps_f, const RadarParams& params) {
    const int lr = params.lag_half_width();
    const int kr = params.bin_half_width();
    const std::size_t cols = static_cast<std::size_t>(2 * kr + 1);
    if (grid.size() != static_cast<std::size_t>(2 * lr + 1) * cols)
        throw std::invalid_argument("sinc_fit_residual: grid size does not match the geometry");

    // The lobe is separable, so evaluate each axis once.
    std::vector<double> lag_part(static_cast<std::size_t>(2 * lr + 1));
    std::vector<double> bin_part(cols);
    for (int dl = -lr; dl <= lr; ++dl)
        lag_part[static_cast<std::size_t>(dl + lr)] = std::abs(sinc(params.N_f * (dl - eps_t) / params.M));
    for (int dk = -kr; dk <= kr; ++dk)
        bin_part[static_cast<std::size_t>(dk + kr)] = std::abs(sinc(params.N_t * (dk - eps_f) / params.N));

    double ym = 0.0;
    double mm = 0.0;
    for (std::size_t a = 0; a < lag_part.size(); ++a)
        for (std::size_t b = 0; b < cols; ++b) {
            const double m = lag_part[a] * bin_part[b];
            ym += grid[a * cols + b] * m;
            mm += m * m;
        }
    SincFit fit;
    fit.alpha = mm > 0.0 ? std::max(0.0, ym / mm) : 0.0;
    for (std::size_t a = 0; a < lag_part.size(); ++a)
        for (std::size_t b = 0; b < cols; ++b) {
            const double e = grid[a * cols + b] - fit.alpha * lag_part[a] * bin_part[b];
            fit.residual += e * e;
        }
    return fit;
}

double quadratic_offset(double minus, double centre, double plus) {
    const double denom = 4.0 * centre - 2.0 * plus - 2.0 * minus;
    if (!(denom > 0.0)) return std::numeric_limits<double>::quiet_NaN();
    return (plus - minus) / denom;
}

Estimate refine_quadratic(const AmbiguitySurface& surface, const Detection& det) {
    const double centre = surface.magnitude(det.lag, det.bin);
    const double dt = quadratic_offset(surface.magnitude(det.lag - 1, det.bin), centre,
                                       surface.magnitude(det.lag + 1, det.bin));
    const double df = quadratic_offset(surface.magnitude(det.lag, det.bin - 1), centre,
                                       surface.magnitude(det.lag, det.bin + 1));
    Estimate est;
    est.detection = det;
    est.method = Method::quadratic;
    est.degenerate = std::isnan(dt) || std::isnan(df);
    est.eps_t = std::isnan(dt) ? 0.0 : clamp_half(dt);
    est.eps_f = std::isnan(df) ? 0.0 : clamp_half(df);
    est.alpha = centre;
    return est;
}

Estimate refine_sinc2d(const AmbiguitySurface& surface, const Detection& det, const RadarParams& params,
                       const NelderMeadOptions& options) {
    const std::vector<double> grid = fit_grid_magnitudes(surface, det, params);

    Estimate est;
    est.detection = det;
    est.method = Method::sinc2d;

    double energy = 0.0;
    for (double y : grid) energy += y * y;
    if (!(energy > 0.0)) {
        est.residual = 0.0;
        return est;
    }

    // Dividing by the data energy leaves the minimizer unchanged and makes
    // the search path independent of the surface scale.
    auto objective = [&](std::span<const double> x) {
        return sinc_fit_residual(grid, x[0], x[1], params).residual / energy;
    };

    const Estimate guess = refine_quadratic(surface, det);
    std::vector<double> start{guess.eps_t, guess.eps_f};
    const std::vector<double> origin{0.0, 0.0};
    if (objective(origin) < objective(start)) start = origin;

    const double lower[] = {-kHalf, -kHalf};
    const double upper[] = {kHalf, kHalf};
    const NelderMeadResult nm = minimize_bounded(objective, start, lower, upper, options);

    est.eps_t = clamp_half(nm.x[0]);
    est.eps_f = clamp_half(nm.x[1]);
    const SincFit fit = sinc_fit_residual(grid, est.eps_t, est.eps_f, params);
    est.alpha = fit.alpha;
    est.residual = fit.residual;
    est.converged = nm.converged;
    est.iterations = nm.iterations;
    return est;
}

AmbiguitySurface ensure_fit_coverage(const AmbiguitySurface& surface, const Detection& det, const ComplexSignal& r,
                                     const ComplexSignal& s, const RadarParams& params) {
    const int reach = std::max(1, params.lag_half_width());
    const LagWindow have = surface.window();
    if (have.contains(det.lag - reach) && have.contains(det.lag + reach)) return surface;
    const LagWindow full = full_window(params);
    LagWindow want{std::min(have.lo, det.lag - reach), std::max(have.hi, det.lag + reach)};
    if (want.lo < full.lo || want.hi > full.hi)
        throw std::out_of_range("refinement stencil extends past the frame");
    return surface.extended(want, r, s);
}

AmbiguitySurface receiver_surface(const ComplexSignal& r, const ComplexSignal& s, LagWindow window,
                                  const RadarParams& params) {
    const double reference = s.energy();
    if (!(reference > 0.0)) throw std::invalid_argument("reference pulse has zero energy");
    return discrete_ambiguity(r, s, window, params).normalized(reference);
}

std::vector<Estimate> estimate(const ComplexSignal& r, const ComplexSignal& s, double theta, Method method,
                               const RadarParams& params, LagWindow window) {
    AmbiguitySurface surface = receiver_surface(r, s, window, params);
    const std::vector<Detection> detections = coarse_detect(surface, theta, params);
    std::vector<Estimate> out;
    out.reserve(detections.size());
    for (const Detection& det : detections) {
        surface = ensure_fit_coverage(surface, det, r, s, params);
        out.push_back(method == Method::sinc2d ? refine_sinc2d(surface, det, params) : refine_quadratic(surface, det));
    }
    return out;
}

std::vector<Estimate> estimate(const ComplexSignal& r, const ComplexSignal& s, double theta, Method method,
                               const RadarParams& params) {
    return estimate(r, s, theta, method, params, receiver_window(params));
}

}  // namespace gdss
