#include "gdss/waveform.hpp"

#include <cmath>
#include <numbers>

namespace gdss {
namespace {

const double kPulseScale = std::pow(2.0, 0.25);
constexpr double kWindowHalfWidth = 1.5;  // in T_c, matches the 3M-sample window
constexpr double kEdgeTolerance = 1e-9;

// sum_m X[n, m] exp(i 2 pi m phase_cycles) over the occupied subcarriers.
cplx subcarrier_sum(const CodeMatrix& code, int n, double phase_cycles) {
    const int Nf = code.subcarriers();
    const cplx step = std::polar(1.0, 2.0 * std::numbers::pi * phase_cycles);
    cplx rot = std::polar(1.0, 2.0 * std::numbers::pi * phase_cycles * static_cast<double>(-(Nf / 2)));
    cplx acc{};
    for (int c = 0; c < Nf; ++c) {
        acc += static_cast<double>(code.at(n, c)) * rot;
        rot *= step;
    }
    return acc;
}

}  // namespace

double ComplexSignal::energy() const {
    double e = 0.0;
    for (const cplx& v : samples) e += std::norm(v);
    return e;
}

double gaussian_pulse(double t) { return kPulseScale * std::exp(-std::numbers::pi * t * t); }

ComplexSignal synthesize_discrete(const CodeMatrix& code, const RadarParams& params) {
    require_matching(code, params);
    const int M = params.M;
    const int len = params.frame_len;
    ComplexSignal s{std::vector<cplx>(static_cast<std::size_t>(len)), params.T_s};

    // The modulation W_M^{-mj} only depends on j mod M.
    std::vector<cplx> carrier(static_cast<std::size_t>(params.N_t * M));
    for (int n = 0; n < params.N_t; ++n)
        for (int r = 0; r < M; ++r) {
            cplx acc{};
            for (int c = 0; c < params.N_f; ++c) {
                const int m = c - params.N_f / 2;
                long long e = (1LL * m * r) % M;
                if (e < 0) e += M;
                acc += static_cast<double>(code.at(n, c)) *
                       std::polar(1.0, 2.0 * std::numbers::pi * static_cast<double>(e) / static_cast<double>(M));
            }
            carrier[static_cast<std::size_t>(n * M + r)] = acc;
        }

    const int reach = (3 * M) / 2;
    for (int n = 0; n < params.N_t; ++n) {
        const int centre = n * M;
        for (int j = std::max(0, centre - reach); j <= std::min(len - 1, centre + reach); ++j) {
            const long long offset = j - centre;
            if (!within_pulse_window(offset, M)) continue;
            const double g = gaussian_pulse(static_cast<double>(offset) / M);
            s.samples[static_cast<std::size_t>(j)] += g * carrier[static_cast<std::size_t>(n * M + j % M)];
        }
    }
    for (cplx& v : s.samples) v /= static_cast<double>(M);
    return s;
}

cplx evaluate_continuous(const CodeMatrix& code, const RadarParams& params, double t, PulseSupport support) {
    require_matching(code, params);
    const bool transmitted = support == PulseSupport::transmitted;
    if (transmitted && (t < -kEdgeTolerance * params.T_s || t >= params.frame_len * params.T_s)) return {};

    const double slot_time = t / params.T_c;
    cplx acc{};
    for (int n = 0; n < code.time_slots(); ++n) {
        const double offset = slot_time - n;
        if (transmitted && std::abs(offset) > kWindowHalfWidth + kEdgeTolerance) continue;
        const double g = gaussian_pulse(offset);
        if (g == 0.0) continue;
        acc += g * subcarrier_sum(code, n, params.F_c * t);
    }
    return acc / static_cast<double>(params.M);
}

std::vector<cplx> evaluate_continuous(const CodeMatrix& code, const RadarParams& params, std::span<const double> times,
                                      PulseSupport support) {
    std::vector<cplx> out;
    out.reserve(times.size());
    for (double t : times) out.push_back(evaluate_continuous(code, params, t, support));
    return out;
}

}  // namespace gdss
