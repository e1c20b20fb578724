#include "cli.hpp"

#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <random>
#include <sstream>

#include "CLI11.hpp"
#include "json.hpp"

#include "gdss/ambiguity.hpp"
#include "gdss/bench.hpp"
#include "gdss/channel.hpp"
#include "gdss/codes.hpp"
#include "gdss/config.hpp"
#include "gdss/estimator.hpp"
#include "gdss/signal_io.hpp"
#include "gdss/waveform.hpp"

namespace gdss::cli {
namespace {

// Raised for bad user input discovered after parsing; maps to exit code 1.
struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct ParamFlags {
    int N = 64;
    int M = 16;
    std::optional<int> N_t;
    std::optional<int> N_f;
    std::optional<double> T_c;
    std::string config;
};

void add_param_flags(CLI::App* app, ParamFlags& f) {
    app->add_option("--N", f.N, "pulse intervals per frame")->capture_default_str();
    app->add_option("--M", f.M, "samples per pulse interval")->capture_default_str();
    app->add_option("--N_t", f.N_t, "occupied time slots (default: from the code, else 8)");
    app->add_option("--N_f", f.N_f, "occupied subcarriers (default: from the code, else 8)");
    app->add_option("--T_c,--tc", f.T_c, "pulse interval in seconds; adds physical units to reports");
    app->add_option("--config", f.config, "key = value file; command-line flags take precedence");
}

RadarParams resolve_params(const ParamFlags& f, const CodeMatrix* code = nullptr) {
    const int nt = f.N_t.value_or(code ? code->time_slots() : 8);
    const int nf = f.N_f.value_or(code ? code->subcarriers() : 8);
    return make_params(f.N, f.M, nt, nf, f.T_c.value_or(1.0));
}

std::string option_key(const std::string& name) {
    std::string key = name;
    for (char& c : key)
        if (c == '_') c = '-';
    return key;
}

// Fills every option of `app` that was not given on the command line from
// the config file. Keys are option names without the leading dashes; an
// underscore may stand for a dash (snr_db for --snr-db).
void apply_config(CLI::App* app, const std::string& path) {
    if (path.empty()) return;
    std::vector<CLI::ConfigItem> items;
    try {
        items = CLI::ConfigTOML().from_file(path);
    } catch (const CLI::Error& e) {
        throw UsageError("config '" + path + "': " + e.what());
    }
    for (const CLI::ConfigItem& item : items) {
        if (item.name == "++" || item.name == "--") continue;  // section markers
        if (!item.parents.empty() && !(item.parents.size() == 1 && item.parents.front() == app->get_name())) continue;
        CLI::Option* opt = app->get_option_no_throw("--" + item.name);
        if (opt == nullptr) opt = app->get_option_no_throw("--" + option_key(item.name));
        if (opt == nullptr || item.name == "config")
            throw UsageError("config '" + path + "': unknown key '" + item.name + "' for " + app->get_name());
        if (opt->count() > 0) continue;
        opt->clear();
        opt->add_result(item.inputs);
        opt->run_callback();
    }
}

std::uint64_t resolve_seed(const std::optional<std::uint64_t>& seed, std::ostream& err) {
    if (seed) return *seed;
    std::random_device rd;
    const std::uint64_t drawn = (static_cast<std::uint64_t>(rd()) << 32) ^ rd();
    err << "seed: " << drawn << '\n';
    return drawn;
}

double parse_snr(const std::string& text) {
    if (text == "inf" || text == "+inf" || text == "Inf") return HUGE_VAL;
    std::size_t used = 0;
    double v = 0.0;
    try {
        v = std::stod(text, &used);
    } catch (const std::exception&) {
        used = 0;
    }
    if (used == 0 || used != text.size() || std::isnan(v)) throw UsageError("bad SNR value '" + text + "'");
    return v;
}

// Writes via `body` to the named file, or to `out` when the name is empty or "-".
template <typename Body>
void emit(const std::string& path, std::ostream& out, Body&& body) {
    if (path.empty() || path == "-") {
        body(out);
        return;
    }
    std::ofstream file(path);
    if (!file) throw std::runtime_error("cannot open '" + path + "' for writing");
    body(file);
    if (!file) throw std::runtime_error("write to '" + path + "' failed");
}

std::string fmt(double v) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.17g", v);
    return buf;
}

std::uint64_t fnv1a(const std::string& text) {
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char c : text) {
        h ^= c;
        h *= 0x100000001b3ULL;
    }
    return h;
}

std::string default_config_text() {
    const RadarParams p;
    const NelderMeadOptions nm = sinc_fit_options();
    std::ostringstream s;
    s << "N=" << p.N << "\nM=" << p.M << "\nN_t=" << p.N_t << "\nN_f=" << p.N_f << "\nT_c=" << fmt(p.T_c)
      << "\ntheta=" << fmt(kDefaultThreshold) << "\ndelta=" << fmt(kDefaultConformanceDelta)
      << "\noversample=" << kDefaultOversample << "\nf_tol=" << fmt(nm.f_tol) << "\nx_tol=" << fmt(nm.x_tol)
      << "\nmax_iterations=" << nm.max_iterations << "\ninitial_step=" << fmt(nm.initial_step) << '\n';
    return s.str();
}

CodeMatrix load_code_or_default(const std::string& path) { return path.empty() ? paper_good_code() : load_code(path); }

}  // namespace

int dispatch(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    CLI::App app{"Gaussian-pulse spread-spectrum radar: code screening, simulation and delay/Doppler estimation",
                 "gdss"};
    app.require_subcommand(0, 1);
    bool show_version = false;
    app.add_flag("--version", show_version, "print version and default-config hash");

    // gen-code
    ParamFlags gen_p;
    std::optional<std::uint64_t> gen_seed;
    std::string gen_out;
    std::string gen_preset = "random";
    auto* gen = app.add_subcommand("gen-code", "write a random +/-1 code matrix");
    add_param_flags(gen, gen_p);
    gen->add_option("--seed", gen_seed, "generator seed (random when omitted)");
    gen->add_option("--out", gen_out, "output file (default: stdout)");
    gen->add_option("--preset", gen_preset, "random, good or bad (the two reference 8x8 matrices)")
        ->check(CLI::IsMember({"random", "good", "bad"}));

    // show-code
    ParamFlags show_p;
    std::string show_in;
    bool show_dd = false;
    auto* show = app.add_subcommand("show-code", "print a code matrix and its delay-Doppler magnitudes");
    add_param_flags(show, show_p);
    show->add_option("--in", show_in, "code file");
    show->add_flag("--dd", show_dd, "also print |X[k, l]| on the N x M delay-Doppler grid");

    // check-code
    ParamFlags check_p;
    std::string check_code;
    double check_delta = kDefaultConformanceDelta;
    int check_os = kDefaultOversample;
    auto* check = app.add_subcommand("check-code", "score a code's main lobe against the 2D sinc model");
    add_param_flags(check, check_p);
    check->add_option("--code", check_code, "code file");
    check->add_option("--delta", check_delta, "acceptance threshold on the deviation")->capture_default_str();
    check->add_option("--oversample", check_os, "grid points per lag and per bin")->capture_default_str();

    // synth
    ParamFlags synth_p;
    std::string synth_code;
    std::string synth_out;
    auto* synth = app.add_subcommand("synth", "write the discrete transmitted pulse");
    add_param_flags(synth, synth_p);
    synth->add_option("--code", synth_code, "code file");
    synth->add_option("--out", synth_out, "signal CSV (default: stdout)");

    // simulate
    ParamFlags sim_p;
    std::string sim_code;
    std::optional<double> sim_delay;
    double sim_doppler = 0.0;
    double sim_alpha = 1.0;
    std::string sim_snr = "inf";
    bool sim_noiseless = false;
    bool sim_no_gating = false;
    std::optional<std::uint64_t> sim_seed;
    std::string sim_out;
    auto* sim = app.add_subcommand("simulate", "pass the pulse through a point-target channel");
    add_param_flags(sim, sim_p);
    sim->add_option("--code", sim_code, "code file");
    sim->add_option("--delay", sim_delay, "target delay in T_s units");
    sim->add_option("--doppler", sim_doppler, "target Doppler in df units")->capture_default_str();
    sim->add_option("--alpha", sim_alpha, "real channel gain")->capture_default_str();
    sim->add_option("--snr-db", sim_snr, "SNR in dB, or inf")->capture_default_str();
    sim->add_flag("--noiseless", sim_noiseless, "same as --snr-db inf");
    sim->add_flag("--no-gating", sim_no_gating, "keep samples taken while the pulse is on air");
    sim->add_option("--seed", sim_seed, "noise seed (random when omitted)");
    sim->add_option("--out", sim_out, "signal CSV (default: stdout)");

    // ambiguity
    ParamFlags amb_p;
    std::string amb_r;
    std::string amb_s;
    std::optional<int> amb_lmin;
    std::optional<int> amb_lmax;
    bool amb_norm = false;
    std::string amb_out;
    auto* amb = app.add_subcommand("ambiguity", "cross-ambiguity surface of two signal files");
    add_param_flags(amb, amb_p);
    amb->add_option("--r", amb_r, "received signal CSV");
    amb->add_option("--s", amb_s, "reference signal CSV");
    amb->add_option("--lmin", amb_lmin, "first lag (default N_t M)");
    amb->add_option("--lmax", amb_lmax, "last lag (default (N - N_t) M)");
    amb->add_flag("--normalize", amb_norm, "divide by sum |s|^2");
    amb->add_option("--out", amb_out, "surface CSV (default: stdout)");

    // estimate
    ParamFlags est_p;
    std::string est_r;
    std::string est_s;
    std::string est_method = "sinc2d";
    double est_theta = kDefaultThreshold;
    bool est_json = false;
    std::optional<int> est_lmin;
    std::optional<int> est_lmax;
    auto* est = app.add_subcommand("estimate", "detect targets and refine their delay and Doppler");
    add_param_flags(est, est_p);
    est->add_option("--r", est_r, "received signal CSV");
    est->add_option("--s", est_s, "reference signal CSV");
    est->add_option("--method", est_method, "sinc2d or quadratic")
        ->check(CLI::IsMember({"sinc2d", "quadratic"}))
        ->capture_default_str();
    est->add_option("--theta", est_theta, "detection threshold on the normalized surface")->capture_default_str();
    est->add_flag("--json", est_json, "one JSON object per detection");
    est->add_option("--lmin", est_lmin, "first lag searched");
    est->add_option("--lmax", est_lmax, "last lag searched");

    // sweep
    ParamFlags sw_p;
    std::string sw_code;
    std::vector<double> sw_snr{0.0, 10.0, 20.0, 30.0};
    int sw_trials = 1000;
    std::optional<std::uint64_t> sw_seed;
    double sw_theta = kDefaultThreshold;
    double sw_delta = kDefaultConformanceDelta;
    int sw_workers = 1;
    bool sw_baseline = false;
    std::string sw_out;
    std::string sw_meta;
    auto* sw = app.add_subcommand("sweep", "Monte Carlo RMSE versus SNR");
    add_param_flags(sw, sw_p);
    sw->add_option("--code", sw_code, "code file (default: the reference good code)");
    sw->add_option("--snr-db", sw_snr, "SNR list in dB")->capture_default_str();
    sw->add_option("--trials", sw_trials, "trials per SNR")->capture_default_str();
    sw->add_option("--seed", sw_seed, "master seed (random when omitted)");
    sw->add_option("--theta", sw_theta, "detection threshold")->capture_default_str();
    sw->add_option("--delta", sw_delta, "conformance threshold recorded in the metadata")->capture_default_str();
    sw->add_option("--workers", sw_workers, "parallel trial workers")->capture_default_str();
    sw->add_flag("--baseline", sw_baseline, "add the no-refinement row");
    sw->add_option("--out", sw_out, "results CSV (default: stdout)");
    sw->add_option("--meta", sw_meta, "metadata JSON (default: <out>.json when --out is a file)");

    // time-stages
    ParamFlags ts_p;
    std::string ts_code;
    int ts_reps = 100;
    int ts_warmup = 5;
    double ts_snr = 30.0;
    std::optional<std::uint64_t> ts_seed;
    std::string ts_out;
    auto* ts = app.add_subcommand("time-stages", "mean wall time of coarse and fine estimation");
    add_param_flags(ts, ts_p);
    ts->add_option("--code", ts_code, "code file (default: the reference good code)");
    ts->add_option("--reps", ts_reps, "timed repetitions")->capture_default_str();
    ts->add_option("--warmup", ts_warmup, "untimed repetitions first")->capture_default_str();
    ts->add_option("--snr-db", ts_snr, "SNR of the timed frame")->capture_default_str();
    ts->add_option("--seed", ts_seed, "frame seed (random when omitted)");
    ts->add_option("--out", ts_out, "timing CSV (default: stdout)");

    std::vector<std::string> reversed(args.rbegin(), args.rend());
    try {
        app.parse(reversed);
    } catch (const CLI::CallForHelp&) {
        out << app.help();
        return kOk;
    } catch (const CLI::CallForAllHelp&) {
        out << app.help("", CLI::AppFormatMode::All);
        return kOk;
    } catch (const CLI::ParseError& e) {
        err << "gdss: " << e.what() << "\n\n" << app.help();
        return kUsage;
    }

    if (show_version) {
        char hash[17];
        std::snprintf(hash, sizeof hash, "%016llx", static_cast<unsigned long long>(fnv1a(default_config_text())));
        out << "gdss " << kVersion << " (config " << hash << ")\n";
        return kOk;
    }
    if (app.get_subcommands().empty()) {
        err << app.help();
        return kUsage;
    }

    CLI::App* sub = app.get_subcommands().front();
    auto need = [&](const std::string& value, const char* flag) {
        if (value.empty()) throw UsageError(sub->get_name() + ": " + flag + " is required");
    };

    try {
        if (sub == gen) {
            apply_config(gen, gen_p.config);
            const CodeMatrix code = gen_preset == "good" ? paper_good_code()
                                    : gen_preset == "bad"  ? paper_bad_code()
                                                           : random_code(resolve_params(gen_p), resolve_seed(gen_seed, err));
            emit(gen_out, out, [&](std::ostream& o) { write_code(o, code); });
        } else if (sub == show) {
            apply_config(show, show_p.config);
            need(show_in, "--in");
            const CodeMatrix code = load_code(show_in);
            out << "code " << code.time_slots() << " x " << code.subcarriers() << " (time slots x subcarriers)\n";
            for (int n = 0; n < code.time_slots(); ++n) {
                out << "  n=" << n << ':';
                for (int c = 0; c < code.subcarriers(); ++c) out << (code.at(n, c) > 0 ? "  +1" : "  -1");
                out << '\n';
            }
            if (show_dd) {
                const RadarParams p = resolve_params(show_p, &code);
                const DDMatrix dd = to_delay_doppler(code, p);
                out << "|X[k, l]|, rows k = 0.." << p.N - 1 << ", columns l = 0.." << p.M - 1 << '\n';
                for (int k = 0; k < p.N; ++k) {
                    for (int l = 0; l < p.M; ++l) {
                        char buf[16];
                        std::snprintf(buf, sizeof buf, "%s%.4f", l ? " " : "", std::abs(dd.at(k, l)));
                        out << buf;
                    }
                    out << '\n';
                }
            }
        } else if (sub == check) {
            apply_config(check, check_p.config);
            need(check_code, "--code");
            const CodeMatrix code = load_code(check_code);
            const RadarParams p = resolve_params(check_p, &code);
            const ConformanceResult r = sinc_conformance(code, p, check_os, check_delta);
            out << "score " << fmt(r.score) << " delta " << fmt(check_delta) << " worst_ell " << fmt(r.worst_ell)
                << " worst_k " << fmt(r.worst_k) << '\n'
                << (r.pass ? "PASS" : "FAIL") << '\n';
        } else if (sub == synth) {
            apply_config(synth, synth_p.config);
            need(synth_code, "--code");
            const CodeMatrix code = load_code(synth_code);
            const RadarParams p = resolve_params(synth_p, &code);
            const ComplexSignal s = synthesize_discrete(code, p);
            emit(synth_out, out, [&](std::ostream& o) { write_signal_csv(o, s); });
        } else if (sub == sim) {
            apply_config(sim, sim_p.config);
            need(sim_code, "--code");
            if (!sim_delay) throw UsageError("simulate: --delay is required");
            const CodeMatrix code = load_code(sim_code);
            const RadarParams p = resolve_params(sim_p, &code);
            const double snr = sim_noiseless ? HUGE_VAL : parse_snr(sim_snr);
            const ChannelTruth truth = ChannelTruth::normalized(*sim_delay, sim_doppler, p, {sim_alpha, 0.0});
            if (!delay_in_window(truth.delay, p))
                throw UsageError("simulate: delay must lie in [" + std::to_string(p.min_delay_lag()) + ", " +
                                 std::to_string(p.max_delay_lag()) + "] T_s");
            const ComplexSignal s = synthesize_discrete(code, p);
            ComplexSignal r = apply_channel(code, p, truth);
            if (snr != HUGE_VAL) r = add_noise(r, snr, resolve_seed(sim_seed, err), p, s.energy());
            if (!sim_no_gating) r = apply_receive_gating(r, p);
            emit(sim_out, out, [&](std::ostream& o) { write_signal_csv(o, r); });
        } else if (sub == amb) {
            apply_config(amb, amb_p.config);
            need(amb_r, "--r");
            need(amb_s, "--s");
            const RadarParams p = resolve_params(amb_p);
            const ComplexSignal r = load_signal(amb_r, p.T_s);
            const ComplexSignal s = load_signal(amb_s, p.T_s);
            const LagWindow w{amb_lmin.value_or(p.min_delay_lag()), amb_lmax.value_or(p.max_delay_lag())};
            AmbiguitySurface surface = amb_norm ? receiver_surface(r, s, w, p) : discrete_ambiguity(r, s, w, p);
            emit(amb_out, out, [&](std::ostream& o) { write_surface_csv(o, surface); });
        } else if (sub == est) {
            apply_config(est, est_p.config);
            need(est_r, "--r");
            need(est_s, "--s");
            const RadarParams p = resolve_params(est_p);
            const ComplexSignal r = load_signal(est_r, p.T_s);
            const ComplexSignal s = load_signal(est_s, p.T_s);
            const LagWindow w{est_lmin.value_or(p.min_delay_lag()), est_lmax.value_or(p.max_delay_lag())};
            const std::vector<Estimate> found = estimate(r, s, est_theta, parse_method(est_method), p, w);
            const bool physical = est_p.T_c.has_value();
            for (const Estimate& e : found) {
                if (est_json) {
                    nlohmann::json j = {{"l_hat", e.detection.lag},      {"k_hat", e.detection.bin},
                                        {"eps_t", e.eps_t},              {"eps_f", e.eps_f},
                                        {"alpha", e.alpha},              {"delay_Ts", e.delay_samples()},
                                        {"doppler_df", e.doppler_bins()}, {"converged", e.converged}};
                    if (physical) {
                        j["delay_s"] = e.delay_seconds(p);
                        j["doppler_hz"] = e.doppler_hz(p);
                    }
                    out << j.dump() << '\n';
                } else {
                    out << "lag " << e.detection.lag << " bin " << e.detection.bin << " eps_t " << fmt(e.eps_t)
                        << " eps_f " << fmt(e.eps_f) << " alpha " << fmt(e.alpha) << " delay_Ts "
                        << fmt(e.delay_samples()) << " doppler_df " << fmt(e.doppler_bins());
                    if (physical) out << " delay_s " << fmt(e.delay_seconds(p)) << " doppler_hz " << fmt(e.doppler_hz(p));
                    out << (e.converged ? "" : " (not converged)") << '\n';
                }
            }
            if (found.empty()) err << "no detection above theta " << fmt(est_theta) << '\n';
        } else if (sub == sw) {
            apply_config(sw, sw_p.config);
            BenchConfig cfg;
            cfg.code = load_code_or_default(sw_code);
            cfg.params = resolve_params(sw_p, &cfg.code);
            cfg.snr_db = sw_snr;
            cfg.trials = sw_trials;
            cfg.seed = resolve_seed(sw_seed, err);
            cfg.theta = sw_theta;
            cfg.delta = sw_delta;
            cfg.workers = sw_workers;
            cfg.include_baseline = sw_baseline;
            if (cfg.snr_db.empty()) throw UsageError("sweep: --snr-db list is empty");
            if (cfg.trials <= 0) throw UsageError("sweep: --trials must be positive");
            const double score = sinc_conformance(cfg.code, cfg.params).score;
            const std::vector<RmseReport> reports = sweep(cfg);
            emit(sw_out, out, [&](std::ostream& o) { write_sweep_csv(o, reports); });
            std::string meta_path = sw_meta;
            if (meta_path.empty() && !sw_out.empty() && sw_out != "-") meta_path = sw_out + ".json";
            if (!meta_path.empty())
                emit(meta_path, out, [&](std::ostream& o) { o << sweep_metadata_json(cfg, score) << '\n'; });
            else
                err << sweep_metadata_json(cfg, score) << '\n';
        } else if (sub == ts) {
            apply_config(ts, ts_p.config);
            BenchConfig cfg;
            cfg.code = load_code_or_default(ts_code);
            cfg.params = resolve_params(ts_p, &cfg.code);
            cfg.seed = resolve_seed(ts_seed, err);
            if (ts_reps <= 0 || ts_warmup < 0) throw UsageError("time-stages: --reps must be positive");
            const std::vector<StageTiming> rows = time_stages(cfg, ts_reps, ts_warmup, ts_snr);
            emit(ts_out, out, [&](std::ostream& o) { write_timing_csv(o, rows); });
        }
    } catch (const UsageError& e) {
        err << "gdss: " << e.what() << '\n';
        return kUsage;
    } catch (const ParameterError& e) {
        err << "gdss: invalid " << e.parameter() << ": " << e.what() << '\n';
        return kUsage;
    } catch (const std::exception& e) {
        err << "gdss " << sub->get_name() << ": " << e.what() << '\n';
        return kFailure;
    }
    return kOk;
}

int dispatch(int argc, const char* const* argv) {
    std::vector<std::string> args;
    for (int i = 1; i < argc; ++i) args.emplace_back(argv[i]);
    return dispatch(args, std::cout, std::cerr);
}

}  // namespace gdss::cli
