#include "czthr/deep.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <numeric>
#include <ostream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "czthr/czt.hpp"
#include "czthr/synth.hpp"  // derive_seed

namespace czthr {
namespace {

void check_window(const DeepCztModel& model, const SignalWindow& window) {
    validate_window(window);
    if (window.samples.size() != model.n_input) {
        std::ostringstream os;
        os << "window has " << window.samples.size() << " samples but the model expects "
           << model.n_input;
        throw std::invalid_argument(os.str());
    }
    const double rel = std::abs(window.sample_rate_hz - model.sample_rate_hz) /
                       model.sample_rate_hz;
    if (rel > 1e-9) {
        std::ostringstream os;
        os << "window sample rate " << window.sample_rate_hz << " Hz does not match the model's "
           << model.sample_rate_hz << " Hz";
        throw std::invalid_argument(os.str());
    }
}

void check_dist_pair(const std::vector<double>& probs, const std::vector<double>& target) {
    if (probs.empty()) throw std::invalid_argument("distribution is empty");
    if (probs.size() != target.size())
        throw std::invalid_argument("distributions have different lengths");
}

void forward_core(const DeepCztModel& model, const double* x, DeepForward& out) {
    const std::size_t n = model.n_input, m = model.m_bins;
    out.x_re.resize(m);
    out.x_im.resize(m);
    out.modulus.resize(m);
    out.probs.resize(m);

    std::vector<double> ax_re(n), ax_im(n);
    for (std::size_t j = 0; j < n; ++j) {
        ax_re[j] = model.a_re[j] * x[j];
        ax_im[j] = model.a_im[j] * x[j];
    }
    for (std::size_t k = 0; k < m; ++k) {
        const double* wr = model.w_tilde.data() + k * 2 * n;
        const double* wi = wr + n;
        double re = 0.0, im = 0.0;
        for (std::size_t j = 0; j < n; ++j) {
            re += wr[j] * ax_re[j] - wi[j] * ax_im[j];
            im += wi[j] * ax_re[j] + wr[j] * ax_im[j];
        }
        out.x_re[k] = re;
        out.x_im[k] = im;
        out.modulus[k] = std::hypot(re, im);
        if (!std::isfinite(out.modulus[k])) {
            std::ostringstream os;
            os << "non-finite response at bin " << k << "; the model has diverged";
            throw std::runtime_error(os.str());
        }
    }
    const double peak = *std::max_element(out.modulus.begin(), out.modulus.end());
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        out.probs[k] = std::exp(out.modulus[k] - peak);
        sum += out.probs[k];
    }
    for (std::size_t k = 0; k < m; ++k) out.probs[k] /= sum;
}

std::size_t argmax_first(const std::vector<double>& v) {
    std::size_t best = 0;
    for (std::size_t i = 1; i < v.size(); ++i)
        if (v[i] > v[best]) best = i;
    return best;
}

void emd_backward_core(const DeepCztModel& model, const double* x, const DeepForward& fwd,
                       const std::vector<double>& target, double scale,
                       std::vector<double>& grad) {
    const std::size_t n = model.n_input, m = model.m_bins;
    // dEMD/dp via CDF differences: g_p[j] = (2/M) * sum_{k>=j} cumsum(p-t)[k].
    std::vector<double> gp(m);
    double cdf = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        cdf += fwd.probs[k] - target[k];
        gp[k] = cdf;
    }
    double suffix = 0.0;
    const double inv_m = 2.0 / static_cast<double>(m);
    for (std::size_t k = m; k-- > 0;) {
        suffix += gp[k];
        gp[k] = inv_m * suffix * scale;
    }
    // softmax backprop, then modulus backprop onto the two weight blocks
    double dot = 0.0;
    for (std::size_t k = 0; k < m; ++k) dot += gp[k] * fwd.probs[k];
    std::vector<double> u(m), v(m);
    for (std::size_t k = 0; k < m; ++k) {
        const double gm = fwd.probs[k] * (gp[k] - dot);
        const double safe = fwd.modulus[k] > 0.0 ? fwd.modulus[k] : 1.0;
        u[k] = gm * fwd.x_re[k] / safe;
        v[k] = gm * fwd.x_im[k] / safe;
    }
    std::vector<double> ax_re(n), ax_im(n);
    for (std::size_t j = 0; j < n; ++j) {
        ax_re[j] = model.a_re[j] * x[j];
        ax_im[j] = model.a_im[j] * x[j];
    }
    for (std::size_t k = 0; k < m; ++k) {
        double* gr = grad.data() + k * 2 * n;
        double* gi = gr + n;
        const double uk = u[k], vk = v[k];
        for (std::size_t j = 0; j < n; ++j) {
            gr[j] += uk * ax_re[j] + vk * ax_im[j];
            gi[j] += -uk * ax_im[j] + vk * ax_re[j];
        }
    }
}

// Fisher-Yates with the raw generator; avoids std::shuffle's
// implementation-defined draw sequence so runs are reproducible everywhere.
void shuffle_indices(std::vector<std::size_t>& idx, std::mt19937_64& rng) {
    for (std::size_t i = idx.size(); i > 1; --i)
        std::swap(idx[i - 1], idx[rng() % i]);
}

struct AdamState {
    std::vector<double> m, v;
    std::size_t step = 0;
};

void adamw_step(DeepCztModel& model, const std::vector<double>& grad, AdamState& st, double lr,
                double weight_decay) {
    constexpr double b1 = 0.9, b2 = 0.999, eps = 1e-8;
    ++st.step;
    const double c1 = 1.0 - std::pow(b1, static_cast<double>(st.step));
    const double c2 = 1.0 - std::pow(b2, static_cast<double>(st.step));
    for (std::size_t i = 0; i < grad.size(); ++i) {
        st.m[i] = b1 * st.m[i] + (1.0 - b1) * grad[i];
        st.v[i] = b2 * st.v[i] + (1.0 - b2) * grad[i] * grad[i];
        const double update = (st.m[i] / c1) / (std::sqrt(st.v[i] / c2) + eps);
        double w = model.w_tilde[i] - lr * (update + weight_decay * model.w_tilde[i]);
        // HardTanh keeps every weight a valid cosine/sine sample.
        model.w_tilde[i] = std::min(1.0, std::max(-1.0, w));
    }
}

struct PreppedData {
    std::vector<std::vector<double>> x;  // mean-removed samples
    std::vector<std::vector<double>> target;
    std::vector<double> label_bpm;
};

PreppedData prep(const DeepCztModel& model, const std::vector<LabeledWindow>& items,
                 double sigma_bpm, std::size_t& clamped_total) {
    PreppedData out;
    out.x.reserve(items.size());
    out.target.reserve(items.size());
    out.label_bpm.reserve(items.size());
    for (const auto& item : items) {
        check_window(model, item.window);
        if (!std::isfinite(item.hr_gt_bpm) || item.hr_gt_bpm <= 0.0) {
            std::ostringstream os;
            os << "ground-truth HR " << item.hr_gt_bpm << " BPM is not usable";
            throw std::invalid_argument(os.str());
        }
        bool clamped = false;
        out.target.push_back(target_distribution(model, item.hr_gt_bpm, sigma_bpm, &clamped));
        if (clamped) ++clamped_total;
        out.x.push_back(remove_mean(item.window).samples);
        out.label_bpm.push_back(item.hr_gt_bpm);
    }
    return out;
}

void check_config(const TrainConfig& cfg) {
    if (!(cfg.alpha >= 0.0) || !(cfg.beta >= 0.0))
        throw std::invalid_argument("loss weights must be >= 0");
    if (!(cfg.learning_rate > 0.0)) throw std::invalid_argument("learning rate must be positive");
    if (cfg.epochs == 0) throw std::invalid_argument("epochs must be >= 1");
    if (cfg.batch_size == 0) throw std::invalid_argument("batch size must be >= 1");
    if (!(cfg.lr_factor > 0.0) || cfg.lr_factor > 1.0)
        throw std::invalid_argument("LR factor must lie in (0, 1]");
    if (!(cfg.min_improvement >= 0.0))
        throw std::invalid_argument("min improvement must be >= 0");
    if (!(cfg.target_smoothing_bpm >= 0.0))
        throw std::invalid_argument("target smoothing must be >= 0");
    if (!(cfg.weight_decay >= 0.0)) throw std::invalid_argument("weight decay must be >= 0");
}

}  // namespace

double DeepCztModel::bin_step_hz() const {
    return (f_end_hz - f_start_hz) / static_cast<double>(m_bins - 1);
}

double DeepCztModel::freq_at(std::size_t k) const {
    return f_start_hz + bin_step_hz() * static_cast<double>(k);
}

std::vector<double> DeepCztModel::freqs_hz() const {
    std::vector<double> f(m_bins);
    for (std::size_t k = 0; k < m_bins; ++k) f[k] = freq_at(k);
    return f;
}

DeepCztModel make_model(std::size_t n_input, std::size_t m_bins, double f_start_hz,
                        double f_end_hz, double sample_rate_hz) {
    const CztPlan plan = make_plan(n_input, m_bins, f_start_hz, f_end_hz, sample_rate_hz);
    DeepCztModel model;
    model.n_input = n_input;
    model.m_bins = m_bins;
    model.f_start_hz = f_start_hz;
    model.f_end_hz = f_end_hz;
    model.sample_rate_hz = sample_rate_hz;
    model.a_re = plan.a_re;
    model.a_im = plan.a_im;
    model.w_tilde.resize(model.param_count());
    for (std::size_t k = 0; k < m_bins; ++k) {
        double* row = model.w_tilde.data() + k * 2 * n_input;
        std::copy_n(plan.w_re.data() + k * n_input, n_input, row);
        std::copy_n(plan.w_im.data() + k * n_input, n_input, row + n_input);
    }
    model.w_tilde_init = model.w_tilde;
    return model;
}

DeepCztModel make_model(std::size_t n_input, double sample_rate_hz) {
    return make_model(n_input, n_input, kDefaultBandLoHz, kDefaultBandHiHz, sample_rate_hz);
}

DeepForward deep_forward(const DeepCztModel& model, const SignalWindow& window) {
    check_window(model, window);
    DeepForward out;
    forward_core(model, window.samples.data(), out);
    return out;
}

double deep_estimate_bpm(const DeepCztModel& model, const SignalWindow& window) {
    check_window(model, window);
    const SignalWindow centered = remove_mean(window);
    DeepForward fwd;
    forward_core(model, centered.samples.data(), fwd);
    return 60.0 * model.freq_at(argmax_first(fwd.probs));
}

std::vector<double> target_distribution(const DeepCztModel& model, double hr_bpm,
                                        double sigma_bpm, bool* clamped) {
    if (!std::isfinite(hr_bpm) || hr_bpm <= 0.0)
        throw std::invalid_argument("target HR must be finite and positive");
    if (!(sigma_bpm >= 0.0) || !std::isfinite(sigma_bpm))
        throw std::invalid_argument("target smoothing must be finite and >= 0");

    const double lo = 60.0 * model.f_start_hz;
    const double hi = 60.0 * model.f_end_hz;
    double center = hr_bpm;
    bool hit_edge = false;
    if (center < lo) {
        center = lo;
        hit_edge = true;
    } else if (center > hi) {
        center = hi;
        hit_edge = true;
    }
    if (clamped) *clamped = hit_edge;

    const std::size_t m = model.m_bins;
    std::vector<double> t(m, 0.0);
    if (sigma_bpm == 0.0) {
        const double step_bpm = 60.0 * model.bin_step_hz();
        auto idx = static_cast<std::size_t>(
            std::min(std::max(std::round((center - lo) / step_bpm), 0.0),
                     static_cast<double>(m - 1)));
        t[idx] = 1.0;
        return t;
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < m; ++k) {
        const double d = (60.0 * model.freq_at(k) - center) / sigma_bpm;
        t[k] = std::exp(-0.5 * d * d);
        sum += t[k];
    }
    for (double& v : t) v /= sum;
    return t;
}

double emd_loss(const std::vector<double>& probs, const std::vector<double>& target) {
    check_dist_pair(probs, target);
    double cdf = 0.0, acc = 0.0;
    for (std::size_t k = 0; k < probs.size(); ++k) {
        cdf += probs[k] - target[k];
        acc += cdf * cdf;
    }
    return acc / static_cast<double>(probs.size());
}

double cross_entropy_loss(const std::vector<double>& probs, std::size_t target_bin) {
    if (target_bin >= probs.size()) throw std::invalid_argument("target bin out of range");
    const double p = probs[target_bin];
    if (!(p > 0.0))
        throw std::invalid_argument(
            "zero probability at the target bin; floor the distribution first");
    return -std::log(p);
}

double smo_loss(const DeepCztModel& model) {
    double acc = 0.0;
    for (std::size_t i = 0; i < model.w_tilde.size(); ++i)
        acc += std::abs(model.w_tilde[i] - model.w_tilde_init[i]);
    return acc / static_cast<double>(model.param_count());
}

LossBreakdown combined_loss(const DeepCztModel& model, const std::vector<double>& probs,
                            const std::vector<double>& target, double alpha, double beta) {
    LossBreakdown out;
    out.emd = emd_loss(probs, target);
    out.smo = smo_loss(model);
    out.combined = alpha * out.emd + beta * out.smo;
    return out;
}

void emd_backward_accumulate(const DeepCztModel& model, const SignalWindow& window,
                             const DeepForward& fwd, const std::vector<double>& target,
                             double scale, std::vector<double>& grad) {
    check_window(model, window);
    if (fwd.probs.size() != model.m_bins || fwd.x_re.size() != model.m_bins)
        throw std::invalid_argument("forward pass does not match the model");
    check_dist_pair(fwd.probs, target);
    if (grad.size() != model.param_count())
        throw std::invalid_argument("gradient buffer has the wrong size");
    emd_backward_core(model, window.samples.data(), fwd, target, scale, grad);
}

void smo_backward_accumulate(const DeepCztModel& model, double scale, std::vector<double>& grad) {
    if (grad.size() != model.param_count())
        throw std::invalid_argument("gradient buffer has the wrong size");
    const double s = scale / static_cast<double>(model.param_count());
    for (std::size_t i = 0; i < grad.size(); ++i) {
        const double d = model.w_tilde[i] - model.w_tilde_init[i];
        if (d > 0.0)
            grad[i] += s;
        else if (d < 0.0)
            grad[i] -= s;
    }
}

std::vector<double> combined_backward(const DeepCztModel& model, const SignalWindow& window,
                                      const std::vector<double>& target, double alpha,
                                      double beta) {
    std::vector<double> grad(model.param_count(), 0.0);
    const DeepForward fwd = deep_forward(model, window);
    emd_backward_accumulate(model, window, fwd, target, alpha, grad);
    smo_backward_accumulate(model, beta, grad);
    return grad;
}

TrainReport train(DeepCztModel& model, const std::vector<LabeledWindow>& train_set,
                  const std::vector<LabeledWindow>& val_set, const TrainConfig& cfg) {
    check_config(cfg);
    if (train_set.empty()) throw std::invalid_argument("training set is empty");
    if (val_set.empty()) throw std::invalid_argument("validation set is empty");

    TrainReport report;
    const PreppedData tr = prep(model, train_set, cfg.target_smoothing_bpm,
                                report.clamped_targets);
    const PreppedData va = prep(model, val_set, cfg.target_smoothing_bpm,
                                report.clamped_targets);

    const std::size_t p = model.param_count();
    AdamState adam;
    adam.m.assign(p, 0.0);
    adam.v.assign(p, 0.0);

    DeepForward fwd;
    auto validate_pass = [&](double* mae_out) {
        double emd_sum = 0.0, abs_err = 0.0;
        for (std::size_t i = 0; i < va.x.size(); ++i) {
            forward_core(model, va.x[i].data(), fwd);
            emd_sum += emd_loss(fwd.probs, va.target[i]);
            const double pred = 60.0 * model.freq_at(argmax_first(fwd.probs));
            abs_err += std::abs(pred - va.label_bpm[i]);
        }
        if (mae_out) *mae_out = abs_err / static_cast<double>(va.x.size());
        return cfg.alpha * emd_sum / static_cast<double>(va.x.size()) +
               cfg.beta * smo_loss(model);
    };
    validate_pass(&report.baseline_val_mae_bpm);

    std::vector<std::size_t> order(tr.x.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(derive_seed(cfg.seed, 0xD33Full));
    std::vector<double> grad(p);

    double lr = cfg.learning_rate;
    double best_val = std::numeric_limits<double>::infinity();
    std::size_t bad_epochs = 0;

    for (std::size_t epoch = 0; epoch < cfg.epochs; ++epoch) {
        shuffle_indices(order, rng);
        double epoch_loss = 0.0;
        for (std::size_t start = 0; start < order.size(); start += cfg.batch_size) {
            const std::size_t stop = std::min(start + cfg.batch_size, order.size());
            const auto bsz = static_cast<double>(stop - start);
            std::fill(grad.begin(), grad.end(), 0.0);
            double emd_sum = 0.0;
            for (std::size_t s = start; s < stop; ++s) {
                const std::size_t i = order[s];
                forward_core(model, tr.x[i].data(), fwd);
                emd_sum += emd_loss(fwd.probs, tr.target[i]);
                // scale folds the batch mean and alpha into the per-sample grad
                const double scale = cfg.alpha / bsz;
                emd_backward_core(model, tr.x[i].data(), fwd, tr.target[i], scale, grad);
            }
            smo_backward_accumulate(model, cfg.beta, grad);
            const double batch_loss = cfg.alpha * emd_sum / bsz + cfg.beta * smo_loss(model);
            epoch_loss += batch_loss * bsz;
            adamw_step(model, grad, adam, lr, cfg.weight_decay);
        }
        epoch_loss /= static_cast<double>(order.size());

        double val_mae = 0.0;
        const double val_loss = validate_pass(&val_mae);
        report.epochs.push_back({epoch, epoch_loss, val_loss, val_mae, lr});
        if (cfg.progress) {
            *cfg.progress << "epoch " << (epoch + 1) << "/" << cfg.epochs << " train "
                          << epoch_loss << " val " << val_loss << " mae " << val_mae << " lr "
                          << lr << "\n";
        }
        if (val_loss < best_val - cfg.min_improvement) {
            best_val = val_loss;
            bad_epochs = 0;
        } else if (++bad_epochs > cfg.patience) {
            lr *= cfg.lr_factor;
            bad_epochs = 0;
        }
    }

    report.final_val_loss = validate_pass(&report.final_val_mae_bpm);
    return report;
}

TrainReport train(DeepCztModel& model, const std::vector<LabeledWindow>& data,
                  const TrainConfig& cfg) {
    check_config(cfg);
    if (data.size() < 2) throw std::invalid_argument("need at least two windows to split");
    if (!(cfg.val_fraction > 0.0) || !(cfg.val_fraction < 1.0))
        throw std::invalid_argument("validation fraction must lie in (0, 1)");

    std::vector<std::size_t> order(data.size());
    std::iota(order.begin(), order.end(), 0);
    std::mt19937_64 rng(derive_seed(cfg.seed, 0x5A17ull));
    shuffle_indices(order, rng);

    auto n_val = static_cast<std::size_t>(
        std::ceil(cfg.val_fraction * static_cast<double>(data.size())));
    n_val = std::min(n_val, data.size() - 1);
    std::vector<LabeledWindow> train_set, val_set;
    train_set.reserve(data.size() - n_val);
    val_set.reserve(n_val);
    for (std::size_t i = 0; i < order.size(); ++i) {
        auto& dst = (i < order.size() - n_val) ? train_set : val_set;
        dst.push_back(data[order[i]]);
    }
    return train(model, train_set, val_set, cfg);
}

namespace {

constexpr std::array<char, 4> kMagic = {'D', 'C', 'Z', 'T'};
constexpr std::uint32_t kVersion = 1;

void put_u32(std::vector<std::uint8_t>& out, std::uint32_t v) {
    for (int s = 0; s < 32; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

void put_f64(std::vector<std::uint8_t>& out, double d) {
    std::uint64_t v = 0;
    std::memcpy(&v, &d, sizeof v);
    for (int s = 0; s < 64; s += 8) out.push_back(static_cast<std::uint8_t>(v >> s));
}

std::uint32_t get_u32(const std::uint8_t* p) {
    std::uint32_t v = 0;
    for (int i = 3; i >= 0; --i) v = (v << 8) | p[i];
    return v;
}

double get_f64(const std::uint8_t* p) {
    std::uint64_t v = 0;
    for (int i = 7; i >= 0; --i) v = (v << 8) | p[i];
    double d = 0.0;
    std::memcpy(&d, &v, sizeof d);
    return d;
}

}  // namespace

std::uint32_t crc32_ieee(const std::uint8_t* data, std::size_t len) {
    static const auto table = [] {
        std::array<std::uint32_t, 256> t{};
        for (std::uint32_t i = 0; i < 256; ++i) {
            std::uint32_t c = i;
            for (int bit = 0; bit < 8; ++bit)
                c = (c & 1u) ? (0xEDB88320u ^ (c >> 1)) : (c >> 1);
            t[i] = c;
        }
        return t;
    }();
    std::uint32_t crc = 0xFFFFFFFFu;
    for (std::size_t i = 0; i < len; ++i)
        crc = table[(crc ^ data[i]) & 0xFFu] ^ (crc >> 8);
    return crc ^ 0xFFFFFFFFu;
}

std::vector<std::uint8_t> save_checkpoint(const DeepCztModel& model) {
    if (model.w_tilde.size() != model.param_count() ||
        model.w_tilde_init.size() != model.param_count())
        throw std::invalid_argument("model weights have inconsistent sizes");
    std::vector<std::uint8_t> out;
    out.reserve(44 + 16 * model.param_count());
    for (char c : kMagic) out.push_back(static_cast<std::uint8_t>(c));
    put_u32(out, kVersion);
    put_u32(out, static_cast<std::uint32_t>(model.m_bins));
    put_u32(out, static_cast<std::uint32_t>(model.n_input));
    put_f64(out, model.f_start_hz);
    put_f64(out, model.f_end_hz);
    put_f64(out, model.sample_rate_hz);
    for (double w : model.w_tilde) put_f64(out, w);
    for (double w : model.w_tilde_init) put_f64(out, w);
    put_u32(out, crc32_ieee(out.data(), out.size()));
    return out;
}

void save_checkpoint(const DeepCztModel& model, const std::string& path) {
    const std::vector<std::uint8_t> bytes = save_checkpoint(model);
    std::ofstream f(path, std::ios::binary | std::ios::trunc);
    if (!f) throw std::runtime_error("cannot open checkpoint file for writing: " + path);
    f.write(reinterpret_cast<const char*>(bytes.data()),
            static_cast<std::streamsize>(bytes.size()));
    if (!f) throw std::runtime_error("cannot write checkpoint file: " + path);
}

DeepCztModel load_checkpoint(const std::vector<std::uint8_t>& bytes) {
    if (bytes.size() < 44) throw std::runtime_error("unexpected end of checkpoint");
    if (!std::equal(kMagic.begin(), kMagic.end(),
                    reinterpret_cast<const char*>(bytes.data())))
        throw std::runtime_error("checkpoint: bad magic");
    const std::uint32_t version = get_u32(bytes.data() + 4);
    if (version != kVersion) {
        std::ostringstream os;
        os << "checkpoint: unsupported version " << version;
        throw std::runtime_error(os.str());
    }
    const std::uint32_t m = get_u32(bytes.data() + 8);
    const std::uint32_t n = get_u32(bytes.data() + 12);
    if (m < 2 || n < 2) throw std::runtime_error("checkpoint: degenerate dimensions");
    const std::size_t params = static_cast<std::size_t>(m) * 2 * n;
    const std::size_t expected = 40 + 16 * params + 4;
    if (bytes.size() < expected) throw std::runtime_error("unexpected end of checkpoint");
    if (bytes.size() > expected) {
        std::ostringstream os;
        os << "checkpoint: " << bytes.size() - expected << " trailing bytes";
        throw std::runtime_error(os.str());
    }
    const std::uint32_t stored = get_u32(bytes.data() + bytes.size() - 4);
    const std::uint32_t actual = crc32_ieee(bytes.data(), bytes.size() - 4);
    if (stored != actual) {
        std::ostringstream os;
        os << "checkpoint: CRC mismatch, stored " << stored << ", computed " << actual;
        throw std::runtime_error(os.str());
    }
    const double f_start = get_f64(bytes.data() + 16);
    const double f_end = get_f64(bytes.data() + 24);
    const double fs = get_f64(bytes.data() + 32);

    DeepCztModel model;
    try {
        model = make_model(n, m, f_start, f_end, fs);
    } catch (const std::invalid_argument& e) {
        throw std::runtime_error(std::string("checkpoint: invalid frequency grid: ") + e.what());
    }
    const std::uint8_t* p = bytes.data() + 40;
    for (std::size_t i = 0; i < params; ++i, p += 8) model.w_tilde[i] = get_f64(p);
    for (std::size_t i = 0; i < params; ++i, p += 8) model.w_tilde_init[i] = get_f64(p);
    return model;
}

DeepCztModel load_checkpoint_file(const std::string& path) {
    std::ifstream f(path, std::ios::binary);
    if (!f) throw std::runtime_error("cannot open checkpoint file: " + path);
    std::vector<std::uint8_t> bytes((std::istreambuf_iterator<char>(f)),
                                    std::istreambuf_iterator<char>());
    return load_checkpoint(bytes);
}

}  // namespace czthr
