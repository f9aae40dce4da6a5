#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <iostream>
#include <optional>
#include <stdexcept>
#include <utility>
#include <vector>

#include "czthr/czt.hpp"
#include "czthr/deep.hpp"
#include "czthr/eval.hpp"
#include "czthr/hr.hpp"
#include "czthr/synth.hpp"

namespace py = pybind11;
using namespace czthr;

namespace {

SignalWindow as_window(std::vector<double> samples, double fs) {
    SignalWindow w{std::move(samples), fs};
    validate_window(w);
    return w;
}

py::tuple spectrum_tuple(const Spectrum& s) {
    return py::make_tuple(s.freqs_hz, s.values);
}

py::dict metrics_dict(const Metrics& m) {
    py::dict d;
    d["mae"] = m.mae;
    d["rmse"] = m.rmse;
    d["mape"] = m.mape;
    d["pearson_r"] = m.pearson_r ? py::cast(*m.pearson_r) : py::none();
    return d;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "heart-rate estimation with the spectral-zoom chirp-z transform";
    m.attr("__version__") = "0.1.0";

    m.def(
        "czt_spectrum",
        [](std::vector<double> x, double fs, double lo_hz, double hi_hz, std::size_t bins,
           bool fast) {
            const SignalWindow win = remove_mean(as_window(std::move(x), fs));
            if (bins == 0) bins = win.samples.size();
            const CztPlan plan = make_plan(win.samples.size(), bins, lo_hz, hi_hz, fs);
            return spectrum_tuple(fast ? czt_fast(plan, win) : czt_matrix(plan, win));
        },
        py::arg("x"), py::arg("fs"), py::arg("lo_hz") = kDefaultBandLoHz,
        py::arg("hi_hz") = kDefaultBandHiHz, py::arg("bins") = 0, py::arg("fast") = false,
        "Mean-removed zoom spectrum over [lo_hz, hi_hz]; returns (freqs_hz, magnitudes).");

    m.def(
        "fft_spectrum",
        [](std::vector<double> x, double fs, double lo_hz, double hi_hz,
           std::size_t zero_pad_to, bool welch) {
            const SignalWindow win = remove_mean(as_window(std::move(x), fs));
            return spectrum_tuple(fft_periodogram(win, Band{lo_hz, hi_hz}, zero_pad_to, welch));
        },
        py::arg("x"), py::arg("fs"), py::arg("lo_hz") = kDefaultBandLoHz,
        py::arg("hi_hz") = kDefaultBandHiHz, py::arg("zero_pad_to") = 0,
        py::arg("welch") = false,
        "Mean-removed periodogram masked to [lo_hz, hi_hz]; returns (freqs_hz, magnitudes).");

    m.def(
        "estimate_bpm",
        [](std::vector<double> x, double fs, const std::string& method, double lo_hz,
           double hi_hz) {
            const Method parsed = method_from_string(method);
            if (parsed == Method::DeepCzt)
                throw std::invalid_argument("use DeepCztModel.estimate for the deep method");
            return estimate_window(as_window(std::move(x), fs), parsed, Band{lo_hz, hi_hz}).bpm;
        },
        py::arg("x"), py::arg("fs"), py::arg("method") = "czt",
        py::arg("lo_hz") = kDefaultBandLoHz, py::arg("hi_hz") = kDefaultBandHiHz,
        "Single-window HR estimate with the peak, fft or czt method.");

    m.def(
        "metrics",
        [](const std::vector<double>& preds, const std::vector<double>& gts) {
            return metrics_dict(metrics(preds, gts));
        },
        py::arg("preds"), py::arg("gts"),
        "MAE / RMSE / MAPE / Pearson r between predictions and ground truth.");

    py::class_<HrProfile>(m, "HrProfile")
        .def_static("constant", &HrProfile::constant, py::arg("bpm"))
        .def_static("ramp", &HrProfile::ramp, py::arg("from_bpm"), py::arg("to_bpm"))
        .def_static("piecewise", &HrProfile::piecewise, py::arg("points"))
        .def("bpm_at", &HrProfile::bpm_at, py::arg("t_s"), py::arg("duration_s"))
        .def("phase_cycles", &HrProfile::phase_cycles, py::arg("t_s"), py::arg("duration_s"))
        .def("mean_bpm", &HrProfile::mean_bpm, py::arg("t0_s"), py::arg("t1_s"),
             py::arg("duration_s"));

    py::class_<BaselineWander>(m, "BaselineWander")
        .def(py::init<>())
        .def(py::init([](double freq_hz, double amplitude) {
                 return BaselineWander{freq_hz, amplitude};
             }),
             py::arg("freq_hz"), py::arg("amplitude"))
        .def_readwrite("freq_hz", &BaselineWander::freq_hz)
        .def_readwrite("amplitude", &BaselineWander::amplitude);

    py::class_<SynthSpec>(m, "SynthSpec")
        .def(py::init<>())
        .def_readwrite("hr_profile", &SynthSpec::hr_profile)
        .def_readwrite("duration_s", &SynthSpec::duration_s)
        .def_readwrite("sample_rate_hz", &SynthSpec::sample_rate_hz)
        .def_readwrite("amplitude", &SynthSpec::amplitude)
        .def_readwrite("phase_rad", &SynthSpec::phase_rad)
        .def_readwrite("harmonics", &SynthSpec::harmonics)
        .def_readwrite("noise_snr_db", &SynthSpec::noise_snr_db)
        .def_readwrite("baseline_wander", &SynthSpec::baseline_wander)
        .def_readwrite("seed", &SynthSpec::seed);

    m.def(
        "synth_signal",
        [](const SynthSpec& spec) { return synth_signal(spec).samples; }, py::arg("spec"),
        "Synthesize a PPG-like signal; returns the sample list.");
    m.def("default_harmonics", &default_harmonics);

    py::class_<SensorModel>(m, "SensorModel")
        .def_static("identity", &SensorModel::identity)
        .def_static("affine", &SensorModel::affine, py::arg("gain"), py::arg("offset_bpm"))
        .def_static("quantize", &SensorModel::quantize)
        .def("apply", &SensorModel::apply, py::arg("hr_bpm"));

    py::class_<DatasetSpec>(m, "DatasetSpec")
        .def(py::init<>())
        .def_readwrite("window_len", &DatasetSpec::window_len)
        .def_readwrite("sample_rate_hz", &DatasetSpec::sample_rate_hz)
        .def_readwrite("hr_lo_bpm", &DatasetSpec::hr_lo_bpm)
        .def_readwrite("hr_hi_bpm", &DatasetSpec::hr_hi_bpm)
        .def_readwrite("amplitude", &DatasetSpec::amplitude)
        .def_readwrite("harmonics", &DatasetSpec::harmonics)
        .def_readwrite("noise_snr_db", &DatasetSpec::noise_snr_db)
        .def_readwrite("random_phase", &DatasetSpec::random_phase)
        .def_readwrite("seed", &DatasetSpec::seed)
        .def_readwrite("tag", &DatasetSpec::tag);

    m.def(
        "synth_dataset",
        [](const DatasetSpec& family, std::size_t count, const SensorModel& sensor) {
            py::list out;
            for (const LabeledWindow& item : synth_dataset(family, count, sensor))
                out.append(py::make_tuple(item.window.samples, item.hr_gt_bpm, item.source_tag));
            return out;
        },
        py::arg("family"), py::arg("count"), py::arg("sensor") = SensorModel::identity(),
        "Family of labeled constant-HR windows; returns [(samples, hr_bpm, tag), ...].");

    py::class_<DeepCztModel>(m, "DeepCztModel")
        .def_readonly("n_input", &DeepCztModel::n_input)
        .def_readonly("m_bins", &DeepCztModel::m_bins)
        .def_readonly("f_start_hz", &DeepCztModel::f_start_hz)
        .def_readonly("f_end_hz", &DeepCztModel::f_end_hz)
        .def_readonly("sample_rate_hz", &DeepCztModel::sample_rate_hz)
        .def("param_count", &DeepCztModel::param_count)
        .def("freqs_hz", &DeepCztModel::freqs_hz)
        .def(
            "probabilities",
            [](const DeepCztModel& model, std::vector<double> x) {
                const SignalWindow win =
                    remove_mean(as_window(std::move(x), model.sample_rate_hz));
                return deep_forward(model, win).probs;
            },
            py::arg("x"), "Softmax response of the mean-removed window.")
        .def(
            "estimate",
            [](const DeepCztModel& model, std::vector<double> x) {
                return deep_estimate_bpm(model,
                                         as_window(std::move(x), model.sample_rate_hz));
            },
            py::arg("x"), "HR at the argmax response bin, in BPM.");

    m.def(
        "make_model",
        [](std::size_t n_input, std::size_t m_bins, double f_start_hz, double f_end_hz,
           double fs) { return make_model(n_input, m_bins, f_start_hz, f_end_hz, fs); },
        py::arg("n_input"), py::arg("m_bins"), py::arg("f_start_hz"), py::arg("f_end_hz"),
        py::arg("fs"));
    m.def(
        "make_model", [](std::size_t n_input, double fs) { return make_model(n_input, fs); },
        py::arg("n_input"), py::arg("fs"),
        "Deep-CZT layer initialized to the classical kernel on [0.66, 3] Hz with M = N.");

    m.def("save_checkpoint",
          py::overload_cast<const DeepCztModel&, const std::string&>(&save_checkpoint),
          py::arg("model"), py::arg("path"));
    m.def("load_checkpoint", &load_checkpoint_file, py::arg("path"));

    m.def(
        "train_model",
        [](DeepCztModel& model, const py::sequence& data, double alpha, double beta, double lr,
           std::size_t epochs, std::size_t batch_size, std::size_t patience, double lr_factor,
           double sigma, double weight_decay, double val_fraction, std::uint64_t seed,
           bool verbose) {
            std::vector<LabeledWindow> pool;
            pool.reserve(py::len(data));
            for (const py::handle& item : data) {
                const py::sequence pair = py::reinterpret_borrow<py::sequence>(item);
                if (py::len(pair) < 2)
                    throw std::invalid_argument("data items are (samples, hr_bpm[, tag])");
                LabeledWindow lw;
                lw.window.samples = pair[0].cast<std::vector<double>>();
                lw.window.sample_rate_hz = model.sample_rate_hz;
                lw.hr_gt_bpm = pair[1].cast<double>();
                if (py::len(pair) > 2) lw.source_tag = pair[2].cast<std::string>();
                pool.push_back(std::move(lw));
            }
            TrainConfig cfg;
            cfg.alpha = alpha;
            cfg.beta = beta;
            cfg.learning_rate = lr;
            cfg.epochs = epochs;
            cfg.batch_size = batch_size;
            cfg.patience = patience;
            cfg.lr_factor = lr_factor;
            cfg.target_smoothing_bpm = sigma;
            cfg.weight_decay = weight_decay;
            cfg.val_fraction = val_fraction;
            cfg.seed = seed;
            if (verbose) cfg.progress = &std::cerr;

            TrainReport report;
            {
                py::gil_scoped_release release;
                report = train(model, pool, cfg);
            }
            py::dict out;
            out["baseline_val_mae_bpm"] = report.baseline_val_mae_bpm;
            out["final_val_loss"] = report.final_val_loss;
            out["final_val_mae_bpm"] = report.final_val_mae_bpm;
            out["clamped_targets"] = report.clamped_targets;
            py::list history;
            for (const EpochStats& e : report.epochs) {
                py::dict row;
                row["epoch"] = e.epoch + 1;
                row["train_loss"] = e.train_loss;
                row["val_loss"] = e.val_loss;
                row["val_mae_bpm"] = e.val_mae_bpm;
                row["learning_rate"] = e.learning_rate;
                history.append(row);
            }
            out["history"] = history;
            return out;
        },
        py::arg("model"), py::arg("data"), py::arg("alpha") = 100.0, py::arg("beta") = 0.01,
        py::arg("lr") = 1e-4, py::arg("epochs") = 50, py::arg("batch_size") = 32,
        py::arg("patience") = 5, py::arg("lr_factor") = 0.9, py::arg("sigma") = 0.0,
        py::arg("weight_decay") = 0.0, py::arg("val_fraction") = 0.1, py::arg("seed") = 0,
        py::arg("verbose") = false,
        "Train in place on (samples, hr_bpm[, tag]) pairs; returns the report as a dict.");

    m.def("emd_loss", &emd_loss, py::arg("probs"), py::arg("target"));
    m.def(
        "smo_loss", [](const DeepCztModel& model) { return smo_loss(model); },
        py::arg("model"));
    m.def("derive_seed", &derive_seed, py::arg("base"), py::arg("index"));
}
