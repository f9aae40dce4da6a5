// Acceptance gate: one criterion per line, [PASS]/[FAIL] verdicts, exit 0 only
// when every criterion holds. Each check states its measured value so a failure
// is diagnosable from the log alone.

#include <chrono>
#include <cmath>
#include <complex>
#include <cstdio>
#include <functional>
#include <random>
#include <sstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "czthr/czt.hpp"
#include "czthr/deep.hpp"
#include "czthr/eval.hpp"
#include "czthr/fft.hpp"
#include "czthr/hr.hpp"
#include "czthr/synth.hpp"
#include "helpers.hpp"

using namespace czthr;
using Clock = std::chrono::steady_clock;

namespace {

double seconds_since(Clock::time_point t0) {
    return std::chrono::duration<double>(Clock::now() - t0).count();
}

void require(bool cond, const std::string& detail) {
    if (!cond) throw std::runtime_error(detail);
}

std::string fmt(const char* pattern, double a, double b = 0.0, double c = 0.0) {
    char buf[160];
    std::snprintf(buf, sizeof buf, pattern, a, b, c);
    return buf;
}

double rel_err(const std::vector<double>& re_a, const std::vector<double>& im_a,
               const std::vector<double>& re_b, const std::vector<double>& im_b) {
    double diff = 0.0, scale = 0.0;
    for (std::size_t k = 0; k < re_a.size(); ++k) {
        diff = std::max(diff, std::hypot(re_a[k] - re_b[k], im_a[k] - im_b[k]));
        scale = std::max(scale, std::hypot(re_b[k], im_b[k]));
    }
    return scale > 0.0 ? diff / scale : diff;
}

std::size_t argmax_bin(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t k = 1; k < v.size(); ++k)
        if (v[k] > v[best]) best = k;
    return best;
}

// --- criterion bodies -------------------------------------------------------

std::string transform_oracle_equivalence() {
    const auto t0 = Clock::now();
    std::mt19937_64 rng(101);
    const std::size_t sizes[] = {64, 128, 256, 512};
    std::uniform_int_distribution<int> pick(0, 3);
    double worst_matrix = 0.0, worst_fast = 0.0;
    for (int i = 0; i < 100; ++i) {
        const std::size_t n = sizes[pick(rng)];
        const std::size_t m = sizes[pick(rng)];
        const SignalWindow w = testutil::randn_window(n, 30.0, static_cast<unsigned>(500 + i));
        const CztPlan plan = make_plan(n, m, 0.66, 3.0, 30.0);
        const ComplexSpectrum oracle = czt_direct_complex(plan, w);
        const ComplexSpectrum mat = czt_matrix_complex(plan, w);
        const ComplexSpectrum fast = czt_fast_complex(plan, w);
        worst_matrix = std::max(worst_matrix, rel_err(mat.re, mat.im, oracle.re, oracle.im));
        worst_fast = std::max(worst_fast, rel_err(fast.re, fast.im, oracle.re, oracle.im));
    }
    require(worst_matrix <= 1e-9, fmt("matrix vs direct rel err %.3g > 1e-9", worst_matrix));
    require(worst_fast <= 1e-8, fmt("fast vs direct rel err %.3g > 1e-8", worst_fast));

    double worst_dft = 0.0;
    for (const std::size_t n : sizes) {
        const SignalWindow w = testutil::randn_window(n, 30.0, static_cast<unsigned>(900 + n));
        const CztPlan plan = make_dft_plan(n, 30.0);
        const ComplexSpectrum got = czt_fast_complex(plan, w);
        const auto ref = fft::dft_real(w.samples);
        std::vector<double> re(n), im(n);
        for (std::size_t k = 0; k < n; ++k) {
            re[k] = ref[k].real();
            im[k] = ref[k].imag();
        }
        worst_dft = std::max(worst_dft, rel_err(got.re, got.im, re, im));
    }
    require(worst_dft <= 1e-9, fmt("DFT degeneration rel err %.3g > 1e-9", worst_dft));

    // Informational: evaluation-cost ratio of the two routes at N = M = 1024.
    const SignalWindow big = testutil::randn_window(1024, 30.0, 77);
    const CztPlan big_plan = make_plan(1024, 1024, 0.66, 3.0, 30.0);
    const auto tm = Clock::now();
    for (int r = 0; r < 5; ++r) czt_matrix(big_plan, big);
    const double t_matrix = seconds_since(tm) / 5.0;
    const auto tf = Clock::now();
    for (int r = 0; r < 5; ++r) czt_fast(big_plan, big);
    const double t_fast = seconds_since(tf) / 5.0;

    const double elapsed = seconds_since(t0);
    require(elapsed < 30.0, fmt("runtime %.1f s >= 30 s", elapsed));
    return fmt("worst matrix %.2g, fast %.2g; 1024-point matrix/fast time ratio %.1fx",
               worst_matrix, worst_fast, t_matrix / t_fast);
}

std::string resolution_ratio() {
    const CztPlan plan = make_hr_plan(256, 30.0);
    const double ratio = (30.0 / 256.0) / plan.bin_step_hz();
    require(ratio >= 12.5 && ratio <= 13.1, fmt("ratio %.4f outside [12.5, 13.1]", ratio));
    return fmt("FFT-to-CZT bin width ratio %.2f", ratio);
}

std::string quantization_bound_accuracy() {
    std::ostringstream detail;
    double mae256_czt = 0.0, mae256_fft = 0.0;
    for (const std::size_t size : {64, 128, 256, 512}) {
        DatasetSpec family;
        family.window_len = size;
        family.seed = 7000 + size;
        const auto tones = synth_dataset(family, 200, SensorModel::identity());
        double czt_mae = 0.0, fft_mae = 0.0;
        for (const LabeledWindow& item : tones) {
            czt_mae += std::abs(
                estimate_window(item.window, Method::CztArgmax, Band{}).bpm - item.hr_gt_bpm);
            fft_mae += std::abs(
                estimate_window(item.window, Method::FftArgmax, Band{}).bpm - item.hr_gt_bpm);
        }
        czt_mae /= 200.0;
        fft_mae /= 200.0;
        require(czt_mae < fft_mae,
                fmt("window %g: CZT MAE %.3f not below FFT MAE %.3f",
                    static_cast<double>(size), czt_mae, fft_mae));
        if (size == 256) {
            mae256_czt = czt_mae;
            mae256_fft = fft_mae;
        }
    }
    require(mae256_czt <= 0.30, fmt("N=256 CZT MAE %.3f > 0.30 BPM", mae256_czt));
    require(mae256_fft >= 1.0 && mae256_fft <= 3.6,
            fmt("N=256 FFT MAE %.3f outside [1.0, 3.6] BPM", mae256_fft));
    return fmt("N=256 MAE: CZT %.3f BPM, FFT %.3f BPM; ordering holds at all sizes",
               mae256_czt, mae256_fft);
}

std::string peak_failure_mode() {
    const SignalWindow tone = testutil::tone(45.0, 20 * 64, 30.0, 0.0, 1.0);
    std::size_t peak_failures = 0, czt_ok = 0;
    for (std::size_t w = 0; w < 20; ++w) {
        SignalWindow win;
        win.sample_rate_hz = 30.0;
        win.samples.assign(tone.samples.begin() + static_cast<std::ptrdiff_t>(w * 64),
                           tone.samples.begin() + static_cast<std::ptrdiff_t>((w + 1) * 64));
        try {
            estimate_window(win, Method::PeakIbi, Band{});
        } catch (const std::exception& e) {
            require(std::string(e.what()).find("insufficient peaks") != std::string::npos,
                    std::string("unexpected peak failure: ") + e.what());
            ++peak_failures;
        }
        const double bpm = estimate_window(win, Method::CztArgmax, Band{}).bpm;
        if (std::abs(bpm - 45.0) < 3.0) ++czt_ok;
    }
    require(peak_failures > 10,
            fmt("peak counting failed on %g/20 windows, need > 10",
                static_cast<double>(peak_failures)));
    require(czt_ok == 20,
            fmt("CZT succeeded on %g/20 windows, need 20", static_cast<double>(czt_ok)));
    return fmt("peak counting failed %g/20 windows, CZT tracked 20/20",
               static_cast<double>(peak_failures));
}

std::string gradient_correctness() {
    double worst = 0.0;
    for (int trial = 0; trial < 20; ++trial) {
        DeepCztModel model = make_model(16, 8, 0.66, 3.0, 30.0);
        std::mt19937_64 rng(1300 + static_cast<unsigned>(trial));
        std::uniform_real_distribution<double> mag(0.01, 0.05);
        std::uniform_int_distribution<int> coin(0, 1);
        for (double& w : model.w_tilde) w += (coin(rng) ? 1.0 : -1.0) * mag(rng);

        const SignalWindow win = testutil::randn_window(16, 30.0, 2000 + trial);
        std::uniform_real_distribution<double> hr(45.0, 170.0);
        const std::vector<double> target = target_distribution(model, hr(rng), 8.0);
        const std::vector<double> grad = combined_backward(model, win, target);

        double max_abs = 0.0;
        for (double g : grad) max_abs = std::max(max_abs, std::abs(g));
        const double h = 1e-5;
        for (std::size_t i = 0; i < model.param_count(); ++i) {
            const double keep = model.w_tilde[i];
            const auto loss_at = [&](double v) {
                model.w_tilde[i] = v;
                const DeepForward fwd = deep_forward(model, win);
                const LossBreakdown l = combined_loss(model, fwd.probs, target);
                return l.combined;
            };
            const double fd = (loss_at(keep + h) - loss_at(keep - h)) / (2.0 * h);
            model.w_tilde[i] = keep;
            worst = std::max(worst, std::abs(fd - grad[i]) / max_abs);
        }
    }
    require(worst <= 1e-4, fmt("max relative gradient error %.3g > 1e-4", worst));
    return fmt("max relative error %.2g over 20 models", worst);
}

std::string initialization_identity() {
    const DeepCztModel model = make_model(256, 30.0);
    std::mt19937_64 rng(411);
    std::uniform_real_distribution<double> hr(45.0, 170.0);
    std::uniform_real_distribution<double> phase(0.0, testutil::kTwoPi);
    std::size_t agree = 0;
    for (int i = 0; i < 200; ++i) {
        const SignalWindow w = i < 100
                                   ? testutil::randn_window(256, 30.0, 3000 + i)
                                   : testutil::tone(hr(rng), 256, 30.0, phase(rng), 1.0);
        const double deep = deep_estimate_bpm(model, w);
        const double classic = estimate_window(w, Method::CztArgmax, Band{}).bpm;
        // same bin iff the BPM values match; the grid step is 0.55 BPM
        if (std::abs(deep - classic) < 1e-9) ++agree;
    }
    require(agree == 200,
            fmt("argmax agreement %g/200, need 200", static_cast<double>(agree)));
    return "argmax HR identical on 100 random + 100 tonal windows";
}

std::string emd_ordinality() {
    for (std::size_t m = 2; m <= 32; ++m) {
        for (std::size_t i = 0; i < m; ++i) {
            std::vector<double> p(m, 0.0);
            p[i] = 1.0;
            std::vector<double> by_dist(m, -1.0);
            for (std::size_t j = 0; j < m; ++j) {
                std::vector<double> t(m, 0.0);
                t[j] = 1.0;
                const double d = emd_loss(p, t);
                const std::size_t dist = i > j ? i - j : j - i;
                const double expect = static_cast<double>(dist) / static_cast<double>(m);
                require(std::abs(d - expect) < 1e-14,
                        fmt("M=%g one-hot EMD %.6f != %.6f", static_cast<double>(m), d,
                            expect));
                by_dist[dist] = d;
            }
            double prev = 0.0;
            for (std::size_t dist = 0; dist < m; ++dist) {
                if (by_dist[dist] < 0.0) continue;  // distance unreachable from bin i
                require(by_dist[dist] >= prev,
                        fmt("EMD not monotone at M=%g", static_cast<double>(m)));
                prev = by_dist[dist];
            }
        }
    }
    std::vector<double> a{1.0, 0.0, 0.0, 0.0}, b{0.0, 1.0, 0.0, 0.0}, c{0.0, 0.0, 0.0, 1.0};
    require(emd_loss(a, b) == 0.25, "M=4 adjacent-bin EMD != 0.25");
    require(emd_loss(a, c) == 0.75, "M=4 far-bin EMD != 0.75");
    return "one-hot sweep monotone for M <= 32; 0.25/0.75 exact at M=4";
}

std::string sensor_adaptation_training() {
    const auto t0 = Clock::now();
    DatasetSpec spec;
    spec.window_len = 256;
    spec.amplitude = 0.05;
    const SensorModel sensor = SensorModel::affine(1.0, 3.0);
    spec.seed = 1001;
    const auto train_set = synth_dataset(spec, 1000, sensor);
    spec.seed = 2002;
    const auto val_set = synth_dataset(spec, 200, sensor);

    DeepCztModel model = make_model(256, 30.0);
    TrainConfig cfg;
    cfg.learning_rate = 1e-3;
    cfg.epochs = 100;
    cfg.batch_size = 32;
    cfg.target_smoothing_bpm = 1.0;
    cfg.seed = 7;
    const TrainReport report = train(model, train_set, val_set, cfg);

    const double frozen = report.baseline_val_mae_bpm;
    const double trained = report.final_val_mae_bpm;
    const double elapsed = seconds_since(t0);
    require(frozen >= 2.4 && frozen <= 3.6,
            fmt("frozen classical MAE %.3f outside [2.4, 3.6] BPM", frozen));
    require(trained <= 1.0, fmt("trained val MAE %.3f > 1.0 BPM", trained));
    require(elapsed < 600.0, fmt("training took %.0f s >= 600 s", elapsed));
    return fmt("val MAE %.3f BPM vs frozen %.3f BPM in %.0f s", trained, frozen, elapsed);
}

std::string smo_dominance() {
    DatasetSpec spec;
    spec.window_len = 256;
    spec.amplitude = 0.05;
    const SensorModel sensor = SensorModel::affine(1.0, 3.0);
    spec.seed = 3003;
    const auto train_set = synth_dataset(spec, 200, sensor);
    spec.seed = 4004;
    const auto val_set = synth_dataset(spec, 50, sensor);

    DeepCztModel model = make_model(256, 30.0);
    TrainConfig cfg;
    cfg.beta = 1e3;
    cfg.learning_rate = 1e-3;
    cfg.epochs = 10;
    cfg.batch_size = 32;
    cfg.target_smoothing_bpm = 1.0;
    cfg.seed = 9;
    train(model, train_set, val_set, cfg);

    const double drift = smo_loss(model);
    require(drift <= 0.01, fmt("post-training smo loss %.4g > 0.01", drift));

    spec.seed = 5005;
    const auto held_out = synth_dataset(spec, 100, SensorModel::identity());
    const CztPlan plan = make_hr_plan(256, 30.0);
    std::size_t agree = 0;
    for (const LabeledWindow& item : held_out) {
        const SignalWindow w = remove_mean(item.window);
        const std::size_t deep_bin = argmax_bin(deep_forward(model, w).probs);
        const std::size_t czt_bin = argmax_bin(czt_matrix(plan, w).values);
        if (deep_bin == czt_bin) ++agree;
    }
    require(agree >= 95,
            fmt("argmax agreement %g/100 < 95", static_cast<double>(agree)));
    return fmt("smo %.2g, argmax agreement %g/100", drift, static_cast<double>(agree));
}

std::string checkpoint_roundtrip() {
    const std::size_t dims[10][2] = {{64, 64},  {96, 48},  {128, 200}, {256, 256}, {32, 100},
                                     {40, 40},  {48, 64},  {100, 32},  {72, 96},   {56, 128}};
    for (int i = 0; i < 10; ++i) {
        DeepCztModel model = make_model(dims[i][0], dims[i][1], 0.66, 3.0, 30.0);
        std::mt19937_64 rng(600 + static_cast<unsigned>(i));
        std::uniform_real_distribution<double> delta(-0.05, 0.05);
        for (double& w : model.w_tilde) w += delta(rng);

        const SignalWindow w =
            testutil::randn_window(dims[i][0], 30.0, 700 + static_cast<unsigned>(i));
        const DeepForward before = deep_forward(model, w);
        const DeepCztModel loaded = load_checkpoint(save_checkpoint(model));
        const DeepForward after = deep_forward(loaded, w);
        require(before.x_re == after.x_re && before.x_im == after.x_im &&
                    before.modulus == after.modulus && before.probs == after.probs,
                fmt("forward not bit-identical after round trip %g",
                    static_cast<double>(i)));
    }
    return "forward bit-identical after save/load on 10 models";
}

std::string metrics_unit_tests() {
    const Metrics single = metrics({66.0}, {60.0});
    require(single.mae == 6.0 && single.rmse == 6.0, "preds [66] vs gts [60]: MAE/RMSE != 6");
    require(std::abs(single.mape - 10.0) < 1e-12, "preds [66] vs gts [60]: MAPE != 10.0");
    const Metrics pair = metrics({58.0, 62.0}, {60.0, 60.0});
    require(pair.mae == 2.0 && pair.rmse == 2.0, "paired MAE/RMSE != 2");
    require(!pair.pearson_r.has_value(), "constant ground truth must have no Pearson r");

    std::mt19937_64 rng(987);
    std::uniform_int_distribution<std::size_t> len(1, 50);
    std::uniform_real_distribution<double> bpm(40.0, 180.0);
    for (int i = 0; i < 1000; ++i) {
        const std::size_t n = len(rng);
        std::vector<double> preds(n), gts(n);
        for (std::size_t j = 0; j < n; ++j) {
            preds[j] = bpm(rng);
            gts[j] = bpm(rng);
        }
        const Metrics m = metrics(preds, gts);
        require(m.rmse >= m.mae - 1e-12,
                fmt("rmse %.6f < mae %.6f on random report", m.rmse, m.mae));
    }
    return "hand-computed triples exact; rmse >= mae on 1000 random reports";
}

}  // namespace

int main() {
    const std::pair<const char*, std::function<std::string()>> criteria[] = {
        {"transform oracle equivalence", transform_oracle_equivalence},
        {"spectral zoom resolution ratio", resolution_ratio},
        {"quantization-bound accuracy", quantization_bound_accuracy},
        {"peak-detector failure mode", peak_failure_mode},
        {"gradient correctness", gradient_correctness},
        {"initialization identity", initialization_identity},
        {"EMD ordinality", emd_ordinality},
        {"sensor-adaptation training", sensor_adaptation_training},
        {"SMO regularization dominance", smo_dominance},
        {"checkpoint round-trip", checkpoint_roundtrip},
        {"metrics unit tests", metrics_unit_tests},
    };

    bool all_pass = true;
    int id = 0;
    for (const auto& [name, body] : criteria) {
        ++id;
        try {
            const std::string detail = body();
            std::printf("[PASS] %2d %s — %s\n", id, name, detail.c_str());
        } catch (const std::exception& e) {
            all_pass = false;
            std::printf("[FAIL] %2d %s — %s\n", id, name, e.what());
        }
        std::fflush(stdout);
    }
    return all_pass ? 0 : 1;
}
