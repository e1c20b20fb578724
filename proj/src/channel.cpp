#include "gdss/channel.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "gdss/rng.hpp"

namespace gdss {
namespace {

double sinc(double x) {
    if (x == 0.0) return 1.0;
    const double px = std::numbers::pi * x;
    return std::sin(px) / px;
}

}  // namespace

ChannelTruth ChannelTruth::normalized(double delay_samples, double doppler_bins, const RadarParams& params, cplx alpha) {
    return ChannelTruth{delay_samples * params.T_s, doppler_bins * params.df, alpha};
}

TruthCells decompose(const ChannelTruth& truth, const RadarParams& params) {
    // nearbyint under the default rounding mode rounds half to even.
    const double delay_units = truth.delay / params.T_s;
    const double doppler_units = truth.doppler / params.df;
    TruthCells cells;
    cells.lag = static_cast<long long>(std::nearbyint(delay_units));
    cells.frac_delay = delay_units - static_cast<double>(cells.lag);
    cells.bin = static_cast<long long>(std::nearbyint(doppler_units));
    cells.frac_doppler = doppler_units - static_cast<double>(cells.bin);
    return cells;
}

bool delay_in_window(double delay, const RadarParams& params) {
    const double slack = 1e-12 * params.T_c;
    return delay >= params.N_t * params.T_c - slack && delay <= (params.N - params.N_t) * params.T_c + slack;
}

ComplexSignal apply_channel(const CodeMatrix& code, const RadarParams& params, const ChannelTruth& truth) {
    if (!delay_in_window(truth.delay, params))
        throw std::domain_error("target delay outside the detectability window [N_t T_c, (N - N_t) T_c]");
    require_matching(code, params);

    ComplexSignal r{std::vector<cplx>(static_cast<std::size_t>(params.frame_len)), params.T_s};
    if (truth.alpha == cplx{}) return r;
    const double lag = truth.delay / params.T_s;
    for (int j = 0; j < params.frame_len; ++j) {
        const double t = (static_cast<double>(j) - lag) * params.T_s;
        const cplx echo = evaluate_continuous(code, params, t, PulseSupport::transmitted);
        if (echo == cplx{}) continue;
        const double phase = 2.0 * std::numbers::pi * truth.doppler * params.T_s * static_cast<double>(j);
        r.samples[static_cast<std::size_t>(j)] = truth.alpha * echo * std::polar(1.0, phase);
    }
    return r;
}

cplx h_matrix_entry(long long i, long long j, const ChannelTruth& truth, const RadarParams& params) {
    const double Ts = params.T_s;
    const double bandwidth = 1.0 / Ts - std::abs(truth.doppler);
    if (bandwidth <= 0.0) return {};
    const double phase = std::numbers::pi * (truth.delay + static_cast<double>(i + j) * Ts) * truth.doppler;
    const double arg = bandwidth * (truth.delay + static_cast<double>(j - i) * Ts);
    return Ts * bandwidth * std::polar(1.0, phase) * sinc(arg);
}

double noise_variance(double snr_db, double ref_energy, const RadarParams& params) {
    return ref_energy / (static_cast<double>(params.frame_len) * std::pow(10.0, snr_db / 10.0));
}

ComplexSignal add_noise(const ComplexSignal& signal, double snr_db, std::uint64_t seed, const RadarParams& params,
                        double ref_energy) {
    if (!(ref_energy > 0.0)) throw std::invalid_argument("add_noise: reference energy must be positive");
    if (std::isinf(snr_db) && snr_db > 0) return signal;
    if (std::isnan(snr_db)) throw std::invalid_argument("add_noise: SNR is NaN");

    const double sigma = std::sqrt(noise_variance(snr_db, ref_energy, params) / 2.0);
    Rng rng(seed);
    ComplexSignal out = signal;
    for (cplx& v : out.samples) {
        const double re = rng.normal();
        const double im = rng.normal();
        v += cplx{sigma * re, sigma * im};
    }
    return out;
}

ComplexSignal apply_receive_gating(const ComplexSignal& signal, const RadarParams& params) {
    ComplexSignal out = signal;
    const std::size_t blind = std::min(out.samples.size(), static_cast<std::size_t>(std::max(0, params.L)));
    std::fill(out.samples.begin(), out.samples.begin() + static_cast<std::ptrdiff_t>(blind), cplx{});
    return out;
}

}  // namespace gdss
