// czthr: heart-rate estimation around the spectral-zoom chirp-z transform.
// Exit codes: 0 success, 1 runtime/data error, 2 usage error.

#include <algorithm>
#include <atomic>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "czthr/czt.hpp"
#include "czthr/deep.hpp"
#include "czthr/eval.hpp"
#include "czthr/hr.hpp"
#include "czthr/synth.hpp"

namespace fs = std::filesystem;
using namespace czthr;

namespace {

struct UsageError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

std::vector<std::string> split(const std::string& text, char sep) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : text) {
        if (c == sep) {
            out.push_back(cur);
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(cur);
    return out;
}

double parse_double(const std::string& tok, const std::string& what) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing characters");
        return v;
    } catch (const std::exception&) {
        throw UsageError("cannot parse " + what + " '" + tok + "'");
    }
}

Band parse_band(const std::string& hz, const std::string& bpm) {
    Band band;
    if (hz.empty() && bpm.empty()) return band;
    const std::string& text = hz.empty() ? bpm : hz;
    const auto parts = split(text, ':');
    if (parts.size() != 2) throw UsageError("band must be lo:hi, got '" + text + "'");
    band.lo_hz = parse_double(parts[0], "band edge");
    band.hi_hz = parse_double(parts[1], "band edge");
    if (hz.empty()) {
        band.lo_hz /= 60.0;
        band.hi_hz /= 60.0;
    }
    if (!(band.lo_hz < band.hi_hz)) throw UsageError("band must satisfy lo < hi");
    return band;
}

std::vector<Method> parse_methods(const std::vector<std::string>& names, bool allow_deep) {
    if (names.empty()) throw UsageError("at least one method is required");
    std::vector<Method> out;
    for (const std::string& name : names) {
        Method m;
        try {
            m = method_from_string(name);
        } catch (const std::exception& e) {
            throw UsageError(e.what());
        }
        if (m == Method::DeepCzt && !allow_deep)
            throw UsageError("the deep method is not available for this subcommand");
        if (std::find(out.begin(), out.end(), m) != out.end())
            throw UsageError("duplicate method '" + name + "'");
        out.push_back(m);
    }
    return out;
}

HrProfile parse_profile(const std::string& text) {
    const auto head = text.find(':');
    if (head == std::string::npos)
        throw UsageError("profile must be constant:BPM, ramp:FROM:TO or piecewise:T:BPM,...");
    const std::string kind = text.substr(0, head);
    const std::string rest = text.substr(head + 1);
    try {
        if (kind == "constant") {
            return HrProfile::constant(parse_double(rest, "profile BPM"));
        }
        if (kind == "ramp") {
            const auto parts = split(rest, ':');
            if (parts.size() != 2) throw UsageError("ramp profile needs FROM:TO");
            return HrProfile::ramp(parse_double(parts[0], "ramp start"),
                                   parse_double(parts[1], "ramp end"));
        }
        if (kind == "piecewise") {
            std::vector<std::pair<double, double>> points;
            for (const std::string& item : split(rest, ',')) {
                const auto parts = split(item, ':');
                if (parts.size() != 2) throw UsageError("piecewise points are T:BPM");
                points.emplace_back(parse_double(parts[0], "point time"),
                                    parse_double(parts[1], "point BPM"));
            }
            return HrProfile::piecewise(std::move(points));
        }
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());  // profile invariants are argument errors
    }
    throw UsageError("unknown profile kind '" + kind + "'");
}

std::vector<std::pair<int, double>> parse_harmonics(const std::string& text) {
    if (text.empty() || text == "none") return {};
    std::vector<std::pair<int, double>> out;
    for (const std::string& item : split(text, ',')) {
        const auto parts = split(item, ':');
        if (parts.size() != 2) throw UsageError("harmonics are ORDER:AMP,...");
        const double order = parse_double(parts[0], "harmonic order");
        if (order != static_cast<int>(order))
            throw UsageError("harmonic order must be an integer");
        out.emplace_back(static_cast<int>(order), parse_double(parts[1], "harmonic amplitude"));
    }
    return out;
}

// --config FILE: JSON object whose keys mirror the long flags ('_' and '-'
// interchangeable). Explicit command-line flags win; config values are
// appended as synthetic tokens so normal validation still applies.
std::vector<std::string> merge_config(std::vector<std::string> args) {
    std::string config_path;
    for (std::size_t i = 0; i < args.size(); ++i) {
        if (args[i] == "--config" && i + 1 < args.size())
            config_path = args[i + 1];
        else if (args[i].rfind("--config=", 0) == 0)
            config_path = args[i].substr(9);
    }
    if (config_path.empty()) return args;

    std::ifstream f(config_path);
    if (!f) throw std::runtime_error("cannot open config file: " + config_path);
    nlohmann::json doc;
    try {
        f >> doc;
    } catch (const std::exception& e) {
        throw std::runtime_error(config_path + ": " + e.what());
    }
    if (!doc.is_object()) throw std::runtime_error(config_path + ": config must be a JSON object");

    const auto as_token = [&](const nlohmann::json& v) -> std::string {
        if (v.is_string()) return v.get<std::string>();
        return v.dump();
    };
    for (const auto& [key, value] : doc.items()) {
        std::string flag = "--" + key;
        std::replace(flag.begin(), flag.end(), '_', '-');
        const bool explicit_flag =
            std::any_of(args.begin(), args.end(), [&](const std::string& a) {
                return a == flag || a.rfind(flag + "=", 0) == 0;
            });
        if (explicit_flag || value.is_null()) continue;
        if (value.is_boolean()) {
            if (value.get<bool>()) args.push_back(flag);
            continue;
        }
        args.push_back(flag);
        if (value.is_array()) {
            std::string joined;
            for (const auto& item : value) {
                if (!joined.empty()) joined += ',';
                joined += as_token(item);
            }
            args.push_back(joined);
        } else {
            args.push_back(as_token(value));
        }
    }
    return args;
}

// ---------------------------------------------------------------------------

struct EstimateArgs {
    std::vector<std::string> inputs;
    std::string method = "czt";
    std::string model_path;
    std::string band_hz, band_bpm;
    std::size_t window = 256;
    std::size_t overlap = 0;
    double fs = 0.0;
    unsigned jobs = 1;
    bool window_set = false;
};

int run_estimate(const EstimateArgs& a) {
    const Method method = parse_methods({a.method}, true).front();
    const Band band = parse_band(a.band_hz, a.band_bpm);

    std::optional<DeepCztModel> model;
    std::size_t window = a.window;
    if (method == Method::DeepCzt) {
        if (a.model_path.empty())
            throw UsageError("the deep method requires --model CHECKPOINT");
        model = load_checkpoint_file(a.model_path);
        if (!a.window_set) window = model->n_input;
        if (window != model->n_input) {
            std::ostringstream os;
            os << "model expects " << model->n_input << "-sample windows, requested " << window;
            throw std::runtime_error(os.str());
        }
    } else if (!a.model_path.empty()) {
        throw UsageError("--model only applies to the deep method");
    }

    struct TraceResult {
        std::vector<std::pair<std::size_t, double>> rows;  // (window_index, bpm)
        std::vector<std::string> warnings;
        std::string subject;
        std::exception_ptr failure;
    };
    std::vector<TraceResult> results(a.inputs.size());

    auto run_one = [&](std::size_t t) {
        TraceResult& res = results[t];
        try {
            const Trace trace = load_trace(a.inputs[t], a.fs);
            res.subject = trace.subject_id;
            const auto windows = window_signal(trace, window, a.overlap);
            for (std::size_t w = 0; w < windows.size(); ++w) {
                try {
                    const double bpm =
                        method == Method::DeepCzt
                            ? deep_estimate_bpm(*model, windows[w])
                            : estimate_window(windows[w], method, band).bpm;
                    res.rows.emplace_back(w, bpm);
                } catch (const std::exception& e) {
                    std::ostringstream os;
                    os << "warning: " << trace.subject_id << "#" << w << ": " << e.what();
                    res.warnings.push_back(os.str());
                }
            }
        } catch (...) {
            res.failure = std::current_exception();
        }
    };

    const unsigned jobs = std::max(1u, std::min<unsigned>(
                                            a.jobs, static_cast<unsigned>(a.inputs.size())));
    if (jobs <= 1) {
        for (std::size_t t = 0; t < a.inputs.size(); ++t) run_one(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        for (unsigned j = 0; j < jobs; ++j)
            pool.emplace_back([&] {
                for (std::size_t t = next.fetch_add(1); t < a.inputs.size();
                     t = next.fetch_add(1))
                    run_one(t);
            });
        for (auto& th : pool) th.join();
    }
    for (const TraceResult& res : results)
        if (res.failure) std::rethrow_exception(res.failure);

    std::string out = "subject,window_index,hr_bpm\n";
    for (const TraceResult& res : results) {
        for (const std::string& warning : res.warnings) std::cerr << warning << "\n";
        for (const auto& [w, bpm] : res.rows) {
            out += res.subject;
            out += ',';
            out += std::to_string(w);
            out += ',';
            out += format_sig(bpm);
            out += '\n';
        }
    }
    std::fputs(out.c_str(), stdout);
    return 0;
}

struct TrainArgs {
    std::string data_dir;
    std::string out_path;
    std::string band_hz, band_bpm;
    std::size_t window = 256;
    double fs = 0.0;
    TrainConfig cfg;
};

int run_train(const TrainArgs& a) {
    const Band band = parse_band(a.band_hz, a.band_bpm);
    if (!fs::is_directory(a.data_dir))
        throw std::runtime_error("--data is not a directory: " + a.data_dir);

    std::vector<fs::path> trace_files;
    for (const auto& entry : fs::directory_iterator(a.data_dir)) {
        if (!entry.is_regular_file() || entry.path().extension() != ".csv") continue;
        const std::string stem = entry.path().stem().string();
        if (stem.size() >= 3 && stem.compare(stem.size() - 3, 3, "_gt") == 0) continue;
        trace_files.push_back(entry.path());
    }
    std::sort(trace_files.begin(), trace_files.end());
    if (trace_files.empty())
        throw std::runtime_error("no trace CSVs found in " + a.data_dir);

    std::vector<LabeledWindow> pool;
    double fs_hz = 0.0;
    for (const fs::path& file : trace_files) {
        const fs::path gt = file.parent_path() / (file.stem().string() + "_gt.csv");
        if (!fs::exists(gt))
            throw std::runtime_error("no ground truth for " + file.string() + " (expected " +
                                     gt.string() + ")");
        Trace trace = load_trace(file.string(), a.fs);
        attach_ground_truth(trace, gt.string());
        if (fs_hz == 0.0) fs_hz = trace.sample_rate_hz;
        const auto windows = window_trace(trace, a.window);
        pool.insert(pool.end(), windows.begin(), windows.end());
    }

    DeepCztModel model = make_model(a.window, a.window, band.lo_hz, band.hi_hz, fs_hz);
    TrainConfig cfg = a.cfg;
    cfg.progress = &std::cerr;
    const TrainReport report = train(model, pool, cfg);
    save_checkpoint(model, a.out_path);

    nlohmann::json j;
    j["traces"] = trace_files.size();
    j["windows"] = pool.size();
    j["window_size"] = a.window;
    j["band_hz"] = {band.lo_hz, band.hi_hz};
    j["alpha"] = cfg.alpha;
    j["beta"] = cfg.beta;
    j["unregularized"] = cfg.beta == 0.0;
    j["learning_rate"] = cfg.learning_rate;
    j["epochs"] = cfg.epochs;
    j["batch_size"] = cfg.batch_size;
    j["target_smoothing_bpm"] = cfg.target_smoothing_bpm;
    j["seed"] = cfg.seed;
    j["baseline_val_mae_bpm"] = report.baseline_val_mae_bpm;
    j["final_val_loss"] = report.final_val_loss;
    j["final_val_mae_bpm"] = report.final_val_mae_bpm;
    j["clamped_targets"] = report.clamped_targets;
    j["checkpoint"] = a.out_path;
    auto history = nlohmann::json::array();
    for (const EpochStats& e : report.epochs)
        history.push_back({{"epoch", e.epoch + 1},
                           {"train_loss", e.train_loss},
                           {"val_loss", e.val_loss},
                           {"val_mae_bpm", e.val_mae_bpm},
                           {"learning_rate", e.learning_rate}});
    j["history"] = std::move(history);
    std::fputs((j.dump(2) + "\n").c_str(), stdout);
    return 0;
}

struct SweepArgs {
    std::string input;
    std::string gt_path;
    std::string band_hz, band_bpm;
    std::vector<std::size_t> sizes{64, 128, 256, 512};
    std::vector<std::string> methods{"peak", "fft", "czt"};
    double fs = 0.0;
};

int run_sweep(const SweepArgs& a) {
    const Band band = parse_band(a.band_hz, a.band_bpm);
    const std::vector<Method> methods = parse_methods(a.methods, false);
    if (a.sizes.empty()) throw UsageError("at least one window size is required");

    Trace trace = load_trace(a.input, a.fs);
    std::string gt = a.gt_path;
    if (gt.empty()) {
        const fs::path p(a.input);
        const fs::path sidecar = p.parent_path() / (p.stem().string() + "_gt.csv");
        if (!fs::exists(sidecar))
            throw std::runtime_error("no ground truth: pass --gt or provide " +
                                     sidecar.string());
        gt = sidecar.string();
    }
    attach_ground_truth(trace, gt);

    EvalOptions opts;
    opts.band = band;
    std::string out = "window_size,method,windows,skipped,mae_bpm\n";
    for (const std::size_t size : a.sizes) {
        EvalReport report;
        try {
            report = evaluate({trace}, methods, size, opts);
        } catch (const std::exception& e) {
            std::cerr << "warning: window size " << size << " skipped: " << e.what() << "\n";
            continue;
        }
        for (const MethodSummary& s : report.aggregates) {
            out += std::to_string(size);
            out += ',';
            out += to_string(s.method);
            out += ',';
            out += std::to_string(s.windows);
            out += ',';
            out += std::to_string(s.skipped);
            out += ',';
            if (s.windows > s.skipped) out += format_sig(s.metrics.mae);
            out += '\n';
        }
    }
    std::fputs(out.c_str(), stdout);
    return 0;
}

struct SpectrumArgs {
    std::string input;
    std::string method = "czt";
    std::string band_hz, band_bpm;
    std::size_t window = 256;
    std::size_t window_index = 0;
    double fs = 0.0;
};

int run_spectrum(const SpectrumArgs& a) {
    const Method method = parse_methods({a.method}, false).front();
    if (method == Method::PeakIbi)
        throw UsageError("spectrum supports the fft and czt methods only");
    const Band band = parse_band(a.band_hz, a.band_bpm);

    const Trace trace = load_trace(a.input, a.fs);
    const auto windows = window_signal(trace, a.window);
    if (a.window_index >= windows.size()) {
        std::ostringstream os;
        os << "window index " << a.window_index << " out of range; trace has "
           << windows.size() << " windows";
        throw std::runtime_error(os.str());
    }
    const SignalWindow win = remove_mean(windows[a.window_index]);

    Spectrum spec;
    if (method == Method::CztArgmax) {
        const CztPlan plan =
            make_plan(a.window, a.window, band.lo_hz, band.hi_hz, win.sample_rate_hz);
        spec = czt_matrix(plan, win);
    } else {
        spec = fft_periodogram(win, band);
    }
    std::string out = "freq_hz,magnitude\n";
    for (std::size_t k = 0; k < spec.size(); ++k) {
        out += format_sig(spec.freqs_hz[k]);
        out += ',';
        out += format_sig(spec.values[k]);
        out += '\n';
    }
    std::fputs(out.c_str(), stdout);
    return 0;
}

struct SynthArgs {
    std::string profile;
    std::string out_dir;
    std::string harmonics = "2:0.35";
    std::string wander;
    double duration = 60.0;
    double fs = 30.0;
    double amplitude = 1.0;
    double phase = 0.0;
    double snr = 0.0;
    bool snr_set = false;
    std::uint64_t seed = 0;
};

int run_synth(const SynthArgs& a) {
    SynthSpec spec;
    spec.hr_profile = parse_profile(a.profile);
    spec.duration_s = a.duration;
    spec.sample_rate_hz = a.fs;
    spec.amplitude = a.amplitude;
    spec.phase_rad = a.phase;
    spec.harmonics = parse_harmonics(a.harmonics);
    if (a.snr_set) spec.noise_snr_db = a.snr;
    if (!a.wander.empty()) {
        const auto parts = split(a.wander, ':');
        if (parts.size() != 2) throw UsageError("wander must be FREQ:AMP");
        spec.baseline_wander = BaselineWander{parse_double(parts[0], "wander frequency"),
                                              parse_double(parts[1], "wander amplitude")};
    }
    spec.seed = a.seed;

    SignalWindow signal;
    try {
        signal = synth_signal(spec);  // every spec field maps to a flag
    } catch (const std::invalid_argument& e) {
        throw UsageError(e.what());
    }
    std::vector<double> hr(signal.samples.size());
    for (std::size_t i = 0; i < hr.size(); ++i)
        hr[i] = spec.hr_profile.bpm_at(static_cast<double>(i) / a.fs, spec.duration_s);

    fs::create_directories(a.out_dir);
    const fs::path dir(a.out_dir);
    {
        std::ofstream f(dir / "trace.csv", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / "trace.csv").string());
        f << trace_csv(signal.samples, a.fs);
    }
    {
        std::ofstream f(dir / "trace_gt.csv", std::ios::binary);
        if (!f) throw std::runtime_error("cannot write " + (dir / "trace_gt.csv").string());
        f << gt_csv_per_sample(hr, a.fs);
    }
    std::cerr << "wrote " << (dir / "trace.csv").string() << " and "
              << (dir / "trace_gt.csv").string() << " (" << signal.samples.size()
              << " samples)\n";
    return 0;
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"heart-rate estimation with the spectral-zoom chirp-z transform"};
    app.require_subcommand(1);
    std::string config_path;  // consumed by merge_config; declared so CLI11 accepts it

    EstimateArgs est;
    auto* est_cmd = app.add_subcommand("estimate", "per-window HR estimates for traces");
    est_cmd->add_option("--input", est.inputs, "trace CSV (repeatable)")->required();
    est_cmd->add_option("--method", est.method, "peak|fft|czt|deep")->capture_default_str();
    auto* est_window =
        est_cmd->add_option("--window", est.window, "window length in samples")
            ->capture_default_str();
    est_cmd->add_option("--overlap", est.overlap, "window overlap in samples");
    auto* est_band = est_cmd->add_option("--band", est.band_hz, "analysis band lo:hi in Hz");
    est_cmd->add_option("--band-bpm", est.band_bpm, "analysis band lo:hi in BPM")
        ->excludes(est_band);
    est_cmd->add_option("--model", est.model_path, "deep-CZT checkpoint");
    est_cmd->add_option("--fs", est.fs, "sample rate for rate-only traces");
    est_cmd->add_option("--jobs", est.jobs, "parallel trace workers");
    est_cmd->add_option("--config", config_path, "JSON config file");

    TrainArgs tr;
    auto* tr_cmd = app.add_subcommand("train", "train a deep-CZT model on a trace directory");
    tr_cmd->add_option("--data", tr.data_dir, "directory of trace CSVs with *_gt.csv sidecars")
        ->required();
    tr_cmd->add_option("--out", tr.out_path, "checkpoint output path")->required();
    tr_cmd->add_option("--window", tr.window, "window length in samples")
        ->capture_default_str();
    auto* tr_band = tr_cmd->add_option("--band", tr.band_hz, "analysis band lo:hi in Hz");
    tr_cmd->add_option("--band-bpm", tr.band_bpm, "analysis band lo:hi in BPM")
        ->excludes(tr_band);
    tr_cmd->add_option("--alpha", tr.cfg.alpha, "EMD loss weight")->capture_default_str();
    tr_cmd->add_option("--beta", tr.cfg.beta, "SMO loss weight")->capture_default_str();
    tr_cmd->add_option("--lr", tr.cfg.learning_rate, "learning rate")->capture_default_str();
    tr_cmd->add_option("--epochs", tr.cfg.epochs, "training epochs")->capture_default_str();
    tr_cmd->add_option("--batch-size", tr.cfg.batch_size, "minibatch size")
        ->capture_default_str();
    tr_cmd->add_option("--val-fraction", tr.cfg.val_fraction, "held-out validation fraction")
        ->capture_default_str();
    tr_cmd->add_option("--sigma", tr.cfg.target_smoothing_bpm,
                       "Gaussian target smoothing in BPM");
    tr_cmd->add_option("--weight-decay", tr.cfg.weight_decay, "AdamW weight decay");
    tr_cmd->add_option("--seed", tr.cfg.seed, "training seed")->capture_default_str();
    tr_cmd->add_option("--fs", tr.fs, "sample rate for rate-only traces");
    tr_cmd->add_option("--config", config_path, "JSON config file");

    SweepArgs sw;
    auto* sw_cmd = app.add_subcommand("sweep", "MAE-vs-window-size table for a trace");
    sw_cmd->add_option("--input", sw.input, "trace CSV")->required();
    sw_cmd->add_option("--gt", sw.gt_path, "ground-truth CSV (default <stem>_gt.csv)");
    sw_cmd->add_option("--sizes", sw.sizes, "window sizes")
        ->delimiter(',')
        ->capture_default_str();
    sw_cmd->add_option("--methods", sw.methods, "methods to compare")
        ->delimiter(',')
        ->capture_default_str();
    auto* sw_band = sw_cmd->add_option("--band", sw.band_hz, "analysis band lo:hi in Hz");
    sw_cmd->add_option("--band-bpm", sw.band_bpm, "analysis band lo:hi in BPM")
        ->excludes(sw_band);
    sw_cmd->add_option("--fs", sw.fs, "sample rate for rate-only traces");
    sw_cmd->add_option("--config", config_path, "JSON config file");

    SpectrumArgs sp;
    auto* sp_cmd = app.add_subcommand("spectrum", "plot-ready spectrum of one window");
    sp_cmd->add_option("--input", sp.input, "trace CSV")->required();
    sp_cmd->add_option("--method", sp.method, "fft|czt")->capture_default_str();
    sp_cmd->add_option("--window", sp.window, "window length in samples")
        ->capture_default_str();
    sp_cmd->add_option("--window-index", sp.window_index, "which window to transform")
        ->capture_default_str();
    auto* sp_band = sp_cmd->add_option("--band", sp.band_hz, "analysis band lo:hi in Hz");
    sp_cmd->add_option("--band-bpm", sp.band_bpm, "analysis band lo:hi in BPM")
        ->excludes(sp_band);
    sp_cmd->add_option("--fs", sp.fs, "sample rate for rate-only traces");
    sp_cmd->add_option("--config", config_path, "JSON config file");

    SynthArgs sy;
    auto* sy_cmd = app.add_subcommand("synth", "write a synthetic trace + ground truth");
    sy_cmd->add_option("--profile", sy.profile,
                       "constant:BPM | ramp:FROM:TO | piecewise:T:BPM,...")
        ->required();
    sy_cmd->add_option("--out", sy.out_dir, "output directory")->required();
    sy_cmd->add_option("--duration", sy.duration, "seconds")->capture_default_str();
    sy_cmd->add_option("--fs", sy.fs, "sample rate in Hz")->capture_default_str();
    sy_cmd->add_option("--amplitude", sy.amplitude, "fundamental amplitude")
        ->capture_default_str();
    sy_cmd->add_option("--phase", sy.phase, "initial phase in radians");
    auto* snr_opt = sy_cmd->add_option("--snr", sy.snr, "additive noise SNR in dB");
    sy_cmd->add_option("--harmonics", sy.harmonics, "ORDER:AMP,... or none")
        ->capture_default_str();
    sy_cmd->add_option("--wander", sy.wander, "baseline wander FREQ:AMP");
    sy_cmd->add_option("--seed", sy.seed, "noise seed")->capture_default_str();
    sy_cmd->add_option("--config", config_path, "JSON config file");

    std::vector<std::string> args(argv + 1, argv + argc);
    try {
        args = merge_config(args);
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    std::vector<const char*> cargs;
    cargs.push_back(argv[0]);
    for (const std::string& a : args) cargs.push_back(a.c_str());

    try {
        app.parse(static_cast<int>(cargs.size()), cargs.data());
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        app.exit(e);
        return 2;
    }
    est.window_set = est_window->count() > 0;
    sy.snr_set = snr_opt->count() > 0;

    try {
        if (est_cmd->parsed()) return run_estimate(est);
        if (tr_cmd->parsed()) return run_train(tr);
        if (sw_cmd->parsed()) return run_sweep(sw);
        if (sp_cmd->parsed()) return run_spectrum(sp);
        if (sy_cmd->parsed()) return run_synth(sy);
    } catch (const UsageError& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
