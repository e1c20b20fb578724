#pragma once

#include <functional>
#include <span>
#include <vector>

namespace gdss {

struct NelderMeadOptions {
    double f_tol = 1e-8;  // spread of objective values across the simplex
    double x_tol = 1e-8;  // max coordinate distance of any vertex from the best
    int max_iterations = 200;
    double initial_step = 0.1;
};

struct NelderMeadResult {
    std::vector<double> x;
    double value = 0.0;
    int iterations = 0;
    int evaluations = 0;
    bool converged = false;
};

/**
 * Derivative-free simplex minimization inside the box [lower, upper].
 *
 * Standard reflection/expansion/contraction/shrink coefficients (1, 2, 1/2,
 * 1/2). Every trial point is clamped onto the box before it is evaluated, so
 * the objective is never called outside it. Stops when both tolerances hold
 * or after max_iterations; in the latter case the best vertex is returned
 * with converged = false. The returned value is never worse than f(x0).
 */
NelderMeadResult minimize_bounded(const std::function<double(std::span<const double>)>& objective,
                                  std::span<const double> x0, std::span<const double> lower,
                                  std::span<const double> upper, const NelderMeadOptions& options = {});

}  // namespace gdss
