#pragma once

#include <stdexcept>
#include <string>

namespace gdss {

/// Thrown when a frame geometry is inconsistent. `parameter()` names the
/// offending field so callers can tell violations apart.
class ParameterError : public std::invalid_argument {
public:
    ParameterError(std::string parameter, const std::string& what)
        : std::invalid_argument(what), parameter_(std::move(parameter)) {}

    const std::string& parameter() const noexcept { return parameter_; }

private:
    std::string parameter_;
};

/**
 * Frame geometry of one pulse repetition interval.
 *
 * A frame holds N pulse intervals of M samples each. The transmitted pulse
 * occupies the first N_t intervals and N_f subcarriers. All delays are
 * expressed in sample periods T_s and all Dopplers in bins of df, so with the
 * default T_c = 1 the numbers are dimensionless.
 */
struct RadarParams {
    int N = 64;
    int M = 16;
    int N_t = 8;
    int N_f = 8;
    double T_c = 1.0;

    double F_c = 1.0;       // subcarrier spacing, 1/T_c
    double T_s = 1.0 / 16;  // sample period, T_c/M
    double df = 1.0 / 64;   // Doppler bin width, F_c/N
    int frame_len = 1024;   // N*M samples
    int L = 160;            // (N_t+2)*M samples occupied by the pulse

    /// Main-lobe half extents used by the fine estimators.
    int lag_half_width() const { return M / N_f; }
    int bin_half_width() const { return N / N_t; }

    /// Detectability window [N_t*M, (N-N_t)*M] in samples.
    int min_delay_lag() const { return N_t * M; }
    int max_delay_lag() const { return (N - N_t) * M; }

    friend bool operator==(const RadarParams&, const RadarParams&) = default;
};

/// Builds a validated RadarParams. Throws ParameterError on any violation.
RadarParams make_params(int N, int M, int N_t, int N_f, double T_c = 1.0);

}  // namespace gdss
