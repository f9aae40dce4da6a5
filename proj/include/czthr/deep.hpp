#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "czthr/signal.hpp"

namespace czthr {

/// Trainable spectral-zoom layer. The modulation diagonal (a_re, a_im) is
/// fixed; the M x 2N weight block w_tilde = [W_Re | W_Im] is learnable and
/// starts as the classical CZT kernel, so an untrained model reproduces the
/// classical transform exactly.
struct DeepCztModel {
    std::size_t n_input = 0;
    std::size_t m_bins = 0;
    double f_start_hz = 0.0;
    double f_end_hz = 0.0;
    double sample_rate_hz = 0.0;
    std::vector<double> a_re, a_im;             // size N
    std::vector<double> w_tilde, w_tilde_init;  // M x 2N row-major, row = [W_Re[k] | W_Im[k]]

    double bin_step_hz() const;
    double freq_at(std::size_t k) const;
    std::vector<double> freqs_hz() const;
    std::size_t param_count() const { return m_bins * 2 * n_input; }
};

DeepCztModel make_model(std::size_t n_input, std::size_t m_bins, double f_start_hz,
                        double f_end_hz, double sample_rate_hz);
/// Heart-rate band [0.66, 3] Hz with M = N.
DeepCztModel make_model(std::size_t n_input, double sample_rate_hz);

struct DeepForward {
    std::vector<double> x_re, x_im;  // per-bin complex response
    std::vector<double> modulus;
    std::vector<double> probs;  // softmax over the modulus
};

/// Raw network pass; does not remove the window mean.
DeepForward deep_forward(const DeepCztModel& model, const SignalWindow& window);

/// Removes the mean, runs the network, returns 60 * freq at the argmax bin.
double deep_estimate_bpm(const DeepCztModel& model, const SignalWindow& window);

/// Ground-truth distribution on the model's BPM grid: one-hot at the nearest
/// bin, or a normalized Gaussian with sigma_bpm > 0. HR outside the grid is
/// clamped to the edge; *clamped reports when that happened.
std::vector<double> target_distribution(const DeepCztModel& model, double hr_bpm,
                                        double sigma_bpm = 0.0, bool* clamped = nullptr);

/// Squared-CDF earth mover's distance, averaged over bins.
double emd_loss(const std::vector<double>& probs, const std::vector<double>& target);
/// -log(probs[target_bin]); the ordinality-blind ablation baseline. Callers
/// floor vanishing probabilities (e.g. at 1e-12) before calling.
double cross_entropy_loss(const std::vector<double>& probs, std::size_t target_bin);
/// Mean |w - w_init| over all M*2N parameters.
double smo_loss(const DeepCztModel& model);

struct LossBreakdown {
    double emd = 0.0;
    double smo = 0.0;
    double combined = 0.0;
};
LossBreakdown combined_loss(const DeepCztModel& model, const std::vector<double>& probs,
                            const std::vector<double>& target, double alpha = 100.0,
                            double beta = 0.01);

/// Adds scale * d(EMD)/d(w_tilde) for one window into grad (size param_count).
/// fwd must be the forward pass of the same window under the same weights.
void emd_backward_accumulate(const DeepCztModel& model, const SignalWindow& window,
                             const DeepForward& fwd, const std::vector<double>& target,
                             double scale, std::vector<double>& grad);
/// Adds scale * d(SMO)/d(w_tilde); subgradient sign(w - w_init), 0 at 0.
void smo_backward_accumulate(const DeepCztModel& model, double scale, std::vector<double>& grad);
/// alpha * d(EMD) + beta * d(SMO) for a single window.
std::vector<double> combined_backward(const DeepCztModel& model, const SignalWindow& window,
                                      const std::vector<double>& target, double alpha = 100.0,
                                      double beta = 0.01);

struct TrainConfig {
    double alpha = 100.0;
    double beta = 0.01;
    double learning_rate = 1e-4;
    std::size_t epochs = 50;
    std::size_t batch_size = 32;
    std::size_t patience = 5;        // plateau epochs tolerated before an LR cut
    double lr_factor = 0.9;
    double min_improvement = 1e-12;  // absolute val-loss improvement that resets the plateau
    double target_smoothing_bpm = 0.0;
    double weight_decay = 0.0;
    double val_fraction = 0.1;  // auto-split overload only
    std::uint64_t seed = 0;
    std::ostream* progress = nullptr;  // per-epoch line when set
};

struct EpochStats {
    std::size_t epoch = 0;
    double train_loss = 0.0;
    double val_loss = 0.0;
    double val_mae_bpm = 0.0;
    double learning_rate = 0.0;
};

struct TrainReport {
    std::vector<EpochStats> epochs;
    double baseline_val_mae_bpm = 0.0;  // before the first update
    double final_val_loss = 0.0;
    double final_val_mae_bpm = 0.0;
    std::size_t clamped_targets = 0;
};

/// AdamW over the combined loss with HardTanh clamping to [-1, 1] after every
/// step and ReduceLROnPlateau on the validation loss. Deterministic under
/// cfg.seed. Windows are mean-removed before entering the network.
TrainReport train(DeepCztModel& model, const std::vector<LabeledWindow>& train_set,
                  const std::vector<LabeledWindow>& val_set, const TrainConfig& cfg);
/// Shuffles data once with cfg.seed and holds out ceil(val_fraction * n).
TrainReport train(DeepCztModel& model, const std::vector<LabeledWindow>& data,
                  const TrainConfig& cfg);

std::vector<std::uint8_t> save_checkpoint(const DeepCztModel& model);
void save_checkpoint(const DeepCztModel& model, const std::string& path);
DeepCztModel load_checkpoint(const std::vector<std::uint8_t>& bytes);
DeepCztModel load_checkpoint_file(const std::string& path);

std::uint32_t crc32_ieee(const std::uint8_t* data, std::size_t len);

}  // namespace czthr
