#include "gdss/optimizer.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace gdss {
namespace {

struct Vertex {
    std::vector<double> x;
    double f;
};

}  // namespace

NelderMeadResult minimize_bounded(const std::function<double(std::span<const double>)>& objective,
                                  std::span<const double> x0, std::span<const double> lower,
                                  std::span<const double> upper, const NelderMeadOptions& options) {
    const std::size_t dim = x0.size();
    if (dim == 0 || lower.size() != dim || upper.size() != dim)
        throw std::invalid_argument("minimize_bounded: dimension mismatch");
    for (std::size_t i = 0; i < dim; ++i)
        if (!(lower[i] <= upper[i])) throw std::invalid_argument("minimize_bounded: empty box");

    NelderMeadResult result;
    auto clamp = [&](std::vector<double>& x) {
        for (std::size_t i = 0; i < dim; ++i) x[i] = std::clamp(x[i], lower[i], upper[i]);
    };
    auto eval = [&](std::vector<double> x) {
        clamp(x);
        ++result.evaluations;
        const double f = objective(x);
        return Vertex{std::move(x), std::isnan(f) ? HUGE_VAL : f};
    };

    std::vector<Vertex> simplex;
    simplex.reserve(dim + 1);
    simplex.push_back(eval(std::vector<double>(x0.begin(), x0.end())));
    for (std::size_t i = 0; i < dim; ++i) {
        std::vector<double> x = simplex.front().x;
        const double step = options.initial_step;
        x[i] = (x[i] + step <= upper[i]) ? x[i] + step : x[i] - step;
        simplex.push_back(eval(std::move(x)));
    }

    auto by_value = [](const Vertex& a, const Vertex& b) { return a.f < b.f; };
    auto converged = [&] {
        const Vertex& best = simplex.front();
        double f_spread = 0.0;
        double x_spread = 0.0;
        for (std::size_t v = 1; v < simplex.size(); ++v) {
            f_spread = std::max(f_spread, std::abs(simplex[v].f - best.f));
            for (std::size_t i = 0; i < dim; ++i) x_spread = std::max(x_spread, std::abs(simplex[v].x[i] - best.x[i]));
        }
        return f_spread <= options.f_tol && x_spread <= options.x_tol;
    };
    auto towards = [&](const std::vector<double>& from, const std::vector<double>& to, double coeff) {
        std::vector<double> x(dim);
        for (std::size_t i = 0; i < dim; ++i) x[i] = from[i] + coeff * (to[i] - from[i]);
        return x;
    };

    std::stable_sort(simplex.begin(), simplex.end(), by_value);
    while (!(result.converged = converged()) && result.iterations < options.max_iterations) {
        ++result.iterations;

        std::vector<double> centroid(dim, 0.0);
        for (std::size_t v = 0; v < dim; ++v)
            for (std::size_t i = 0; i < dim; ++i) centroid[i] += simplex[v].x[i] / static_cast<double>(dim);

        Vertex& worst = simplex.back();
        Vertex reflected = eval(towards(centroid, worst.x, -1.0));
        if (reflected.f < simplex.front().f) {
            Vertex expanded = eval(towards(centroid, worst.x, -2.0));
            worst = expanded.f < reflected.f ? std::move(expanded) : std::move(reflected);
        } else if (reflected.f < simplex[dim - 1].f) {
            worst = std::move(reflected);
        } else {
            const bool outside = reflected.f < worst.f;
            Vertex contracted = outside ? eval(towards(centroid, reflected.x, 0.5)) : eval(towards(centroid, worst.x, 0.5));
            if (contracted.f < (outside ? reflected.f : worst.f)) {
                worst = std::move(contracted);
            } else {
                for (std::size_t v = 1; v < simplex.size(); ++v)
                    simplex[v] = eval(towards(simplex.front().x, simplex[v].x, 0.5));
            }
        }
        std::stable_sort(simplex.begin(), simplex.end(), by_value);
    }

    result.x = simplex.front().x;
    result.value = simplex.front().f;
    return result;
}

}  // namespace gdss
