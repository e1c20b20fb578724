#include "gdss/ambiguity.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

namespace gdss {
namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

struct Support {
    int first = 0;
    int last = -1;
};

Support nonzero_support(const ComplexSignal& s) {
    Support sup;
    const int n = static_cast<int>(s.size());
    for (int j = 0; j < n; ++j)
        if (s.samples[static_cast<std::size_t>(j)] != cplx{}) {
            sup.first = j;
            break;
        }
    for (int j = n - 1; j >= 0; --j)
        if (s.samples[static_cast<std::size_t>(j)] != cplx{}) {
            sup.last = j;
            break;
        }
    return sup;
}

void fill_lag_row(std::span<cplx> row, const ComplexSignal& r, const ComplexSignal& s, Support sup, int lag) {
    std::fill(row.begin(), row.end(), cplx{});
    const int n = static_cast<int>(row.size());
    const int lo = std::max(0, lag + sup.first);
    const int hi = std::min(n - 1, lag + sup.last);
    for (int j = lo; j <= hi; ++j)
        row[static_cast<std::size_t>(j)] =
            r.samples[static_cast<std::size_t>(j)] * std::conj(s.samples[static_cast<std::size_t>(j - lag)]);
    fft_forward(row);
}

}  // namespace

LagWindow receiver_window(const RadarParams& params) { return {params.min_delay_lag(), params.max_delay_lag()}; }

LagWindow full_window(const RadarParams& params) { return {-params.frame_len + 1, params.frame_len - 1}; }

AmbiguitySurface::AmbiguitySurface(LagWindow window, int bins, std::vector<cplx> values, double scale)
    : window_(window), bins_(bins), values_(std::move(values)), scale_(scale) {
    if (window_.size() <= 0 || bins_ <= 0) throw std::invalid_argument("ambiguity surface must be non-empty");
    if (values_.size() != static_cast<std::size_t>(window_.size()) * static_cast<std::size_t>(bins_))
        throw std::invalid_argument("ambiguity surface value count does not match its grid");
}

cplx AmbiguitySurface::at(int lag, int bin) const {
    if (!has_lag(lag)) throw std::out_of_range("lag " + std::to_string(lag) + " outside the computed window");
    int b = bin % bins_;
    if (b < 0) b += bins_;
    return values_[static_cast<std::size_t>(lag - window_.lo) * static_cast<std::size_t>(bins_) + static_cast<std::size_t>(b)];
}

std::span<const cplx> AmbiguitySurface::row(int lag) const {
    if (!has_lag(lag)) throw std::out_of_range("lag " + std::to_string(lag) + " outside the computed window");
    return std::span<const cplx>(values_).subspan(static_cast<std::size_t>(lag - window_.lo) * static_cast<std::size_t>(bins_),
                                                  static_cast<std::size_t>(bins_));
}

int AmbiguitySurface::signed_bin(int bin) const {
    int b = bin % bins_;
    if (b < 0) b += bins_;
    return b > bins_ / 2 ? b - bins_ : b;
}

AmbiguitySurface AmbiguitySurface::normalized(double reference) const {
    if (!(reference > 0.0)) throw std::invalid_argument("normalization reference must be positive");
    std::vector<cplx> scaled(values_);
    for (cplx& v : scaled) v /= reference;
    return AmbiguitySurface(window_, bins_, std::move(scaled), scale_ * reference);
}

AmbiguitySurface AmbiguitySurface::extended(LagWindow wider, const ComplexSignal& r, const ComplexSignal& s) const {
    if (wider.lo > window_.lo || wider.hi < window_.hi)
        throw std::invalid_argument("extended window must contain the current window");
    if (static_cast<int>(r.size()) != bins_ || static_cast<int>(s.size()) != bins_)
        throw std::invalid_argument("extension signals must match the surface bin count");

    const Support sup = nonzero_support(s);
    std::vector<cplx> grown(static_cast<std::size_t>(wider.size()) * static_cast<std::size_t>(bins_));
    std::span<cplx> all(grown);
    for (int lag = wider.lo; lag <= wider.hi; ++lag) {
        auto dst = all.subspan(static_cast<std::size_t>(lag - wider.lo) * static_cast<std::size_t>(bins_),
                               static_cast<std::size_t>(bins_));
        if (has_lag(lag)) {
            auto src = row(lag);
            std::copy(src.begin(), src.end(), dst.begin());
        } else {
            fill_lag_row(dst, r, s, sup, lag);
            for (cplx& v : dst) v /= scale_;
        }
    }
    return AmbiguitySurface(wider, bins_, std::move(grown), scale_);
}

AmbiguitySurface discrete_ambiguity(const ComplexSignal& r, const ComplexSignal& s, LagWindow window,
                                    const RadarParams& params) {
    if (r.size() != s.size()) throw std::invalid_argument("ambiguity: signal lengths differ");
    if (static_cast<int>(r.size()) != params.frame_len)
        throw std::invalid_argument("ambiguity: signals must have N*M samples");
    if (window.size() <= 0) throw std::invalid_argument("ambiguity: empty lag window");
    const LagWindow full = full_window(params);
    if (window.lo < full.lo || window.hi > full.hi)
        throw std::invalid_argument("ambiguity: lag window exceeds the frame");

    const int bins = params.frame_len;
    const Support sup = nonzero_support(s);
    std::vector<cplx> values(static_cast<std::size_t>(window.size()) * static_cast<std::size_t>(bins));
    std::span<cplx> all(values);
    for (int lag = window.lo; lag <= window.hi; ++lag)
        fill_lag_row(all.subspan(static_cast<std::size_t>(lag - window.lo) * static_cast<std::size_t>(bins),
                                 static_cast<std::size_t>(bins)),
                     r, s, sup, lag);
    return AmbiguitySurface(window, bins, std::move(values));
}

std::vector<cplx> continuous_ambiguity_grid(const ComplexSignal& x, const CodeMatrix& y_code,
                                            std::span<const double> taus, std::span<const double> nus,
                                            const RadarParams& params) {
    const Support sup = nonzero_support(x);
    const int count = sup.last - sup.first + 1;
    std::vector<cplx> out(taus.size() * nus.size());
    if (count <= 0) return out;

    const double Ts = params.T_s;
    std::vector<cplx> kernel(nus.size() * static_cast<std::size_t>(count));
    for (std::size_t b = 0; b < nus.size(); ++b)
        for (int i = 0; i < count; ++i) {
            const double t = static_cast<double>(sup.first + i) * Ts;
            kernel[b * static_cast<std::size_t>(count) + static_cast<std::size_t>(i)] =
                std::polar(1.0, -2.0 * std::numbers::pi * std::fmod(nus[b] * t, 1.0));
        }

    std::vector<cplx> product(static_cast<std::size_t>(count));
    for (std::size_t a = 0; a < taus.size(); ++a) {
        for (int i = 0; i < count; ++i) {
            const int j = sup.first + i;
            const double t = static_cast<double>(j) * Ts - taus[a];
            product[static_cast<std::size_t>(i)] =
                x.samples[static_cast<std::size_t>(j)] *
                std::conj(evaluate_continuous(y_code, params, t, PulseSupport::transmitted));
        }
        for (std::size_t b = 0; b < nus.size(); ++b) {
            const cplx* kern = &kernel[b * static_cast<std::size_t>(count)];
            cplx acc{};
            for (int i = 0; i < count; ++i) acc += product[static_cast<std::size_t>(i)] * kern[i];
            out[a * nus.size() + b] = Ts * acc;
        }
    }
    return out;
}

cplx continuous_ambiguity(const ComplexSignal& x, const CodeMatrix& y_code, double tau, double nu,
                          const RadarParams& params) {
    const double taus[] = {tau};
    const double nus[] = {nu};
    return continuous_ambiguity_grid(x, y_code, taus, nus, params).front();
}

double sinc_model(double ell, double k, const RadarParams& params) {
    return std::abs(sinc(params.N_f * ell / params.M) * sinc(params.N_t * k / params.N));
}

ConformanceResult sinc_conformance(const CodeMatrix& code, const RadarParams& params, int oversample, double delta) {
    if (oversample < 4) throw std::invalid_argument("sinc_conformance: oversample must be at least 4");
    require_matching(code, params);

    const int lag_steps = static_cast<int>(std::floor(oversample * static_cast<double>(params.M) / params.N_f + 1e-9));
    const int bin_steps = static_cast<int>(std::floor(oversample * static_cast<double>(params.N) / params.N_t + 1e-9));
    std::vector<double> ells;
    std::vector<double> ks;
    for (int i = -lag_steps; i <= lag_steps; ++i) ells.push_back(static_cast<double>(i) / oversample);
    for (int i = -bin_steps; i <= bin_steps; ++i) ks.push_back(static_cast<double>(i) / oversample);
    std::vector<double> taus(ells.size());
    std::vector<double> nus(ks.size());
    std::transform(ells.begin(), ells.end(), taus.begin(), [&](double e) { return e * params.T_s; });
    std::transform(ks.begin(), ks.end(), nus.begin(), [&](double k) { return k * params.df; });

    const ComplexSignal s = synthesize_discrete(code, params);
    const std::vector<cplx> grid = continuous_ambiguity_grid(s, code, taus, nus, params);
    const double peak = std::abs(grid[static_cast<std::size_t>(lag_steps) * ks.size() + static_cast<std::size_t>(bin_steps)]);
    if (!(peak > 0.0)) throw std::runtime_error("sinc_conformance: zero auto-ambiguity at the origin");

    ConformanceResult result;
    for (std::size_t a = 0; a < ells.size(); ++a)
        for (std::size_t b = 0; b < ks.size(); ++b) {
            const double dev = std::abs(std::abs(grid[a * ks.size() + b]) / peak - sinc_model(ells[a], ks[b], params));
            if (dev > result.score) {
                result.score = dev;
                result.worst_ell = ells[a];
                result.worst_k = ks[b];
            }
        }
    result.pass = result.score <= delta;
    return result;
}

}  // namespace gdss
