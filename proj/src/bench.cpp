#include "gdss/bench.hpp"

#include <algorithm>
#include <atomic>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <exception>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <thread>

#include "json.hpp"

#include "gdss/channel.hpp"
#include "gdss/waveform.hpp"

namespace gdss {
namespace {

using Clock = std::chrono::steady_clock;

double elapsed_ms(Clock::time_point since) {
    return std::chrono::duration<double, std::milli>(Clock::now() - since).count();
}

MethodOutcome score(const Estimate& est, const Detection& det, const TrialTruth& truth) {
    MethodOutcome out;
    out.eps_t = est.eps_t;
    out.eps_f = est.eps_f;
    out.delay_error = (det.lag + est.eps_t) - truth.delay_samples();
    out.doppler_error = (det.bin + est.eps_f) - truth.doppler_bins();
    out.converged = est.converged;
    return out;
}

Detection global_peak(const AmbiguitySurface& surface) {
    Detection best{surface.window().lo, 0, -1.0};
    for (int lag = surface.window().lo; lag <= surface.window().hi; ++lag) {
        const auto row = surface.row(lag);
        for (int b = 0; b < surface.bins(); ++b) {
            const double mag = std::abs(row[static_cast<std::size_t>(b)]);
            if (mag > best.peak_mag) best = Detection{lag, surface.signed_bin(b), mag};
        }
    }
    return best;
}

// A frame of the trial pipeline up to the receiver input.
struct Frame {
    TrialTruth truth;
    ComplexSignal s;
    ComplexSignal r;
};

Frame make_frame(const BenchConfig& cfg, double snr_db, std::uint64_t trial_seed) {
    Rng rng(trial_seed);
    Frame f;
    f.truth = draw_truth(cfg.params, rng);
    const std::uint64_t noise_seed = rng.next();
    f.s = synthesize_discrete(cfg.code, cfg.params);
    const ChannelTruth channel = ChannelTruth::normalized(f.truth.delay_samples(), f.truth.doppler_bins(), cfg.params);
    const ComplexSignal echo = apply_channel(cfg.code, cfg.params, channel);
    f.r = apply_receive_gating(add_noise(echo, snr_db, noise_seed, cfg.params, f.s.energy()), cfg.params);
    return f;
}

template <typename Body>
std::vector<double> time_reps(int reps, int warmup, int inner, Body&& body) {
    for (int i = 0; i < warmup; ++i) body();
    std::vector<double> out;
    out.reserve(static_cast<std::size_t>(reps));
    for (int i = 0; i < reps; ++i) {
        const auto t0 = Clock::now();
        for (int j = 0; j < inner; ++j) body();
        out.push_back(elapsed_ms(t0) / inner);
    }
    return out;
}

StageTiming describe(std::string stage, const std::vector<double>& ms) {
    StageTiming row;
    row.stage = std::move(stage);
    row.reps = static_cast<int>(ms.size());
    double sum = 0.0;
    for (double v : ms) sum += v;
    row.mean_ms = sum / static_cast<double>(ms.size());
    double var = 0.0;
    for (double v : ms) var += (v - row.mean_ms) * (v - row.mean_ms);
    row.std_ms = ms.size() > 1 ? std::sqrt(var / static_cast<double>(ms.size() - 1)) : 0.0;
    return row;
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.10g", v);
    return buf;
}

}  // namespace

TrialTruth draw_truth(const RadarParams& params, Rng& rng) {
    TrialTruth t;
    t.lag = static_cast<int>(rng.uniform_int(params.min_delay_lag(), params.max_delay_lag()));
    const int kmax = params.bin_half_width();
    t.bin = static_cast<int>(rng.uniform_int(-kmax, kmax));
    t.frac_delay = rng.uniform(-0.5, 0.5);
    t.frac_doppler = rng.uniform(-0.5, 0.5);
    if (!delay_in_window(t.delay_samples() * params.T_s, params)) t.frac_delay = -t.frac_delay;
    return t;
}

TrialRecord run_trial(const BenchConfig& cfg, double snr_db, std::uint64_t trial_seed, std::size_t index) {
    TrialRecord rec;
    rec.index = index;
    rec.seed = trial_seed;
    rec.snr_db = snr_db;

    const Frame f = make_frame(cfg, snr_db, trial_seed);
    rec.truth = f.truth;
    const RadarParams& p = cfg.params;

    const auto t0 = Clock::now();
    AmbiguitySurface surface = receiver_surface(f.r, f.s, receiver_window(p), p);
    const std::vector<Detection> found = coarse_detect(surface, cfg.theta, p);
    rec.coarse_ms = elapsed_ms(t0);

    if (found.empty()) {
        rec.detection = global_peak(surface);
        rec.miss = true;
    } else {
        rec.detection = found.front();
        rec.miss = rec.detection.lag != f.truth.lag || rec.detection.bin != f.truth.bin;
    }
    surface = ensure_fit_coverage(surface, rec.detection, f.r, f.s, p);

    auto t1 = Clock::now();
    const Estimate fit = refine_sinc2d(surface, rec.detection, p, cfg.optimizer);
    const double sinc_ms = elapsed_ms(t1);
    t1 = Clock::now();
    const Estimate quad = refine_quadratic(surface, rec.detection);
    const double quad_ms = elapsed_ms(t1);

    rec.sinc2d = score(fit, rec.detection, f.truth);
    rec.sinc2d.refine_ms = sinc_ms;
    rec.quadratic = score(quad, rec.detection, f.truth);
    rec.quadratic.refine_ms = quad_ms;
    rec.baseline = score(Estimate{}, rec.detection, f.truth);
    return rec;
}

std::vector<TrialRecord> run_trials(const BenchConfig& cfg, double snr_db) {
    if (cfg.trials <= 0) throw std::invalid_argument("bench: trial count must be positive");
    const std::size_t count = static_cast<std::size_t>(cfg.trials);
    std::vector<TrialRecord> records(count);
    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::atomic<bool> failed{false};

    auto worker = [&] {
        for (std::size_t i = next++; i < count && !failed; i = next++) {
            try {
                records[i] = run_trial(cfg, snr_db, derive_seed(cfg.seed, i), i);
            } catch (...) {
                if (!failed.exchange(true)) failure = std::current_exception();
            }
        }
    };
    const int workers = std::max(1, std::min<int>(cfg.workers, cfg.trials));
    if (workers == 1) {
        worker();
    } else {
        std::vector<std::thread> pool;
        for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
        for (auto& t : pool) t.join();
    }
    if (failure) std::rethrow_exception(failure);
    return records;
}

RmseReport summarize(const std::vector<TrialRecord>& records, const std::string& method, double snr_db) {
    const MethodOutcome TrialRecord::*pick = nullptr;
    if (method == "sinc2d") pick = &TrialRecord::sinc2d;
    else if (method == "quadratic") pick = &TrialRecord::quadratic;
    else if (method == "baseline") pick = &TrialRecord::baseline;
    else throw std::invalid_argument("unknown bench method '" + method + "'");

    RmseReport rep;
    rep.snr_db = snr_db;
    rep.method = method;
    rep.trials = static_cast<int>(records.size());
    if (records.empty()) return rep;

    double sq_delay = 0.0;
    double sq_doppler = 0.0;
    double coarse = 0.0;
    double refine = 0.0;
    int misses = 0;
    for (const TrialRecord& r : records) {
        const MethodOutcome& m = r.*pick;
        sq_delay += m.delay_error * m.delay_error;
        sq_doppler += m.doppler_error * m.doppler_error;
        coarse += r.coarse_ms;
        refine += m.refine_ms;
        misses += r.miss ? 1 : 0;
    }
    const double k = static_cast<double>(records.size());
    rep.rmse_delay = std::sqrt(sq_delay / k);
    rep.rmse_doppler = std::sqrt(sq_doppler / k);
    rep.miss_rate = misses / k;
    rep.mean_coarse_ms = coarse / k;
    rep.mean_refine_ms = refine / k;
    return rep;
}

std::vector<RmseReport> sweep(const BenchConfig& cfg) {
    if (cfg.snr_db.empty()) throw std::invalid_argument("sweep: SNR list is empty");
    require_matching(cfg.code, cfg.params);
    std::vector<RmseReport> out;
    for (double snr : cfg.snr_db) {
        const std::vector<TrialRecord> records = run_trials(cfg, snr);
        out.push_back(summarize(records, "sinc2d", snr));
        out.push_back(summarize(records, "quadratic", snr));
        if (cfg.include_baseline) out.push_back(summarize(records, "baseline", snr));
    }
    return out;
}

void write_sweep_csv(std::ostream& out, const std::vector<RmseReport>& reports) {
    out << "snr_db,method,rmse_delay,rmse_doppler,miss_rate,trials,mean_coarse_ms,mean_refine_ms\n";
    for (const RmseReport& r : reports)
        out << fmt(r.snr_db) << ',' << r.method << ',' << fmt(r.rmse_delay) << ',' << fmt(r.rmse_doppler) << ','
            << fmt(r.miss_rate) << ',' << r.trials << ',' << fmt(r.mean_coarse_ms) << ',' << fmt(r.mean_refine_ms)
            << '\n';
}

std::uint64_t code_hash(const CodeMatrix& code) {
    std::ostringstream text;
    write_code(text, code);
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text.str()) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string sweep_metadata_json(const BenchConfig& cfg, double conformance_score) {
    const RadarParams& p = cfg.params;
    nlohmann::json rows = nlohmann::json::array();
    for (int n = 0; n < cfg.code.time_slots(); ++n) {
        nlohmann::json row = nlohmann::json::array();
        for (int c = 0; c < cfg.code.subcarriers(); ++c) row.push_back(cfg.code.at(n, c));
        rows.push_back(row);
    }
    char hash[17];
    std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(code_hash(cfg.code)));
    nlohmann::json meta = {
        {"seed", cfg.seed},
        {"code_hash", hash},
        {"code", rows},
        {"conformance_score", conformance_score},
        {"params", {{"N", p.N}, {"M", p.M}, {"N_t", p.N_t}, {"N_f", p.N_f}, {"T_c", p.T_c}}},
        {"delta", cfg.delta},
        {"theta", cfg.theta},
        {"trials", cfg.trials},
        {"snr_db", cfg.snr_db},
        {"optimizer",
         {{"method", "bounded Nelder-Mead"},
          {"f_tol", cfg.optimizer.f_tol},
          {"x_tol", cfg.optimizer.x_tol},
          {"max_iterations", cfg.optimizer.max_iterations},
          {"initial_step", cfg.optimizer.initial_step}}},
    };
    return meta.dump(2);
}

std::vector<StageTiming> time_stages(const BenchConfig& cfg, int reps, int warmup, double snr_db) {
    if (reps <= 0) throw std::invalid_argument("time_stages: reps must be positive");
    const RadarParams& p = cfg.params;
    const Frame f = make_frame(cfg, snr_db, cfg.seed);

    AmbiguitySurface surface = receiver_surface(f.r, f.s, receiver_window(p), p);
    std::vector<Detection> found = coarse_detect(surface, cfg.theta, p);
    const Detection det = found.empty() ? global_peak(surface) : found.front();
    surface = ensure_fit_coverage(surface, det, f.r, f.s, p);

    volatile double sink = 0.0;
    const auto coarse = time_reps(reps, warmup, 1, [&] {
        const AmbiguitySurface a = receiver_surface(f.r, f.s, receiver_window(p), p);
        sink = sink + static_cast<double>(coarse_detect(a, cfg.theta, p).size());
    });
    const auto sinc = time_reps(reps, warmup, 1, [&] { sink = sink + refine_sinc2d(surface, det, p, cfg.optimizer).eps_t; });
    // A single quadratic refinement is close to the clock resolution, so each
    // repetition times a batch.
    const auto quad = time_reps(reps, warmup, 1000, [&] { sink = sink + refine_quadratic(surface, det).eps_t; });

    return {describe("coarse", coarse), describe("sinc2d_refine", sinc), describe("quadratic_refine", quad)};
}

void write_timing_csv(std::ostream& out, const std::vector<StageTiming>& rows) {
    out << "stage,mean_ms,std_ms,reps\n";
    for (const StageTiming& r : rows) out << r.stage << ',' << fmt(r.mean_ms) << ',' << fmt(r.std_ms) << ',' << r.reps << '\n';
}

}  // namespace gdss
