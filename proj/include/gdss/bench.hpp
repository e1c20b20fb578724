#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "gdss/codes.hpp"
#include "gdss/config.hpp"
#include "gdss/estimator.hpp"
#include "gdss/optimizer.hpp"
#include "gdss/rng.hpp"

namespace gdss {

struct BenchConfig {
    RadarParams params;
    CodeMatrix code = paper_good_code();
    std::vector<double> snr_db{0.0, 10.0, 20.0, 30.0};
    int trials = 1000;
    std::uint64_t seed = 1;
    double theta = kDefaultThreshold;
    double delta = kDefaultConformanceDelta;
    NelderMeadOptions optimizer = sinc_fit_options();
    int workers = 1;
    bool include_baseline = false;
};

/// Planted target of one trial: delay lag + frac_delay (T_s), Doppler bin + frac_doppler (df).
struct TrialTruth {
    int lag = 0;
    double frac_delay = 0.0;
    int bin = 0;
    double frac_doppler = 0.0;

    double delay_samples() const { return lag + frac_delay; }
    double doppler_bins() const { return bin + frac_doppler; }
};

/// Draws a truth: lag uniform on [N_t M, (N - N_t) M], bin uniform on
/// [-N/N_t, N/N_t], fractions uniform on [-1/2, 1/2]. A fraction that would
/// push the delay out of the window is mirrored.
TrialTruth draw_truth(const RadarParams& params, Rng& rng);

struct MethodOutcome {
    double eps_t = 0.0;
    double eps_f = 0.0;
    double delay_error = 0.0;    // estimate - truth, T_s units
    double doppler_error = 0.0;  // estimate - truth, df units
    bool converged = true;
    double refine_ms = 0.0;
};

struct TrialRecord {
    std::size_t index = 0;
    std::uint64_t seed = 0;
    double snr_db = 0.0;
    TrialTruth truth;
    Detection detection;  // cell used for refinement
    bool miss = false;    // nothing crossed theta, or the strongest peak is off the true cell
    MethodOutcome sinc2d;
    MethodOutcome quadratic;
    MethodOutcome baseline;  // eps = 0 at the detected cell
    double coarse_ms = 0.0;
};

/**
 * One Monte Carlo trial: channel, noise, receive gating, ambiguity surface,
 * coarse detection, then both refinements on the same frame. Without a
 * usable detection the global maximum cell of the surface is refined and
 * the trial is flagged as a miss.
 */
TrialRecord run_trial(const BenchConfig& cfg, double snr_db, std::uint64_t trial_seed, std::size_t index = 0);

/// The K trials at one SNR; trial i uses derive_seed(cfg.seed, i). Records
/// are in index order whatever the worker count.
std::vector<TrialRecord> run_trials(const BenchConfig& cfg, double snr_db);

struct RmseReport {
    double snr_db = 0.0;
    std::string method;
    double rmse_delay = 0.0;
    double rmse_doppler = 0.0;
    double miss_rate = 0.0;
    int trials = 0;
    double mean_coarse_ms = 0.0;
    double mean_refine_ms = 0.0;
};

/// Aggregates records for "sinc2d", "quadratic" or "baseline".
RmseReport summarize(const std::vector<TrialRecord>& records, const std::string& method, double snr_db);

/// One report per (snr, method): SNRs in the given order, methods sinc2d,
/// quadratic, then baseline when enabled. Throws on an empty SNR list.
std::vector<RmseReport> sweep(const BenchConfig& cfg);

void write_sweep_csv(std::ostream& out, const std::vector<RmseReport>& reports);

/// FNV-1a 64 over the code's text form.
std::uint64_t code_hash(const CodeMatrix& code);

/// Sidecar JSON describing how a sweep was produced.
std::string sweep_metadata_json(const BenchConfig& cfg, double conformance_score);

struct StageTiming {
    std::string stage;
    double mean_ms = 0.0;
    double std_ms = 0.0;
    int reps = 0;
};

/**
 * Mean wall time of coarse estimation (surface plus detection), sinc2d
 * refinement and quadratic refinement on one noisy frame at `snr_db`.
 * `warmup` untimed runs precede the `reps` timed ones.
 */
std::vector<StageTiming> time_stages(const BenchConfig& cfg, int reps = 100, int warmup = 5, double snr_db = 30.0);

void write_timing_csv(std::ostream& out, const std::vector<StageTiming>& rows);

}  // namespace gdss
