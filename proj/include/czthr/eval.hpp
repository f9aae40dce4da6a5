#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "czthr/hr.hpp"
#include "czthr/signal.hpp"

namespace czthr {

struct DeepCztModel;

enum class GtKind { None, PerSample, PerWindow };

/// A full recording: signal plus optional ground-truth HR, either a
/// per-sample series (resampled onto the signal clock) or one label per
/// non-overlapping analysis window.
struct Trace {
    std::vector<double> samples;
    std::vector<double> times_s;  // original timestamps; empty for rate-only traces
    double sample_rate_hz = 0.0;
    std::string subject_id;
    GtKind gt_kind = GtKind::None;
    std::vector<double> gt_bpm;
};

enum class TraceFormat { Auto, TimePpg, PpgOnly };

/// Reads a `t,ppg` or `ppg` CSV (auto-detected from the header). Rate-only
/// files need sample_rate_hz > 0; timestamped files derive the rate from the
/// time span. Malformed rows are reported with their line number.
Trace load_trace(const std::string& path, double sample_rate_hz = 0.0,
                 TraceFormat format = TraceFormat::Auto);

/// Reads a `t,hr_bpm` (per-sample, linearly interpolated onto the trace) or
/// `window_index,hr_bpm` (per-window) CSV. A series that does not span the
/// whole signal raises "ground-truth coverage gap".
void attach_ground_truth(Trace& trace, const std::string& gt_path);

/// Contiguous windows with stride size - overlap; the tail remainder is
/// discarded. No ground truth needed.
std::vector<SignalWindow> window_signal(const Trace& trace, std::size_t size,
                                        std::size_t overlap = 0);

/// As window_signal, but each window carries its label: the mean of the
/// per-sample ground truth over the window span, or the per-window entry at
/// the window's ordinal.
std::vector<LabeledWindow> window_trace(const Trace& trace, std::size_t size,
                                        std::size_t overlap = 0);

struct Metrics {
    double mae = 0.0;
    double rmse = 0.0;
    double mape = 0.0;                  // percent
    std::optional<double> pearson_r;    // absent when either side has zero variance
};

Metrics metrics(const std::vector<double>& preds, const std::vector<double>& gts);

struct EvalRow {
    std::string subject;
    std::size_t window_index = 0;
    Method method = Method::CztArgmax;
    double pred_bpm = 0.0;
    double gt_bpm = 0.0;
    bool skipped = false;
    std::string skip_reason;
};

struct MethodSummary {
    Method method = Method::CztArgmax;
    std::size_t windows = 0;  // attempted
    std::size_t skipped = 0;
    Metrics metrics;  // over the surviving windows
};

struct EvalReport {
    std::size_t window_size = 0;
    std::vector<EvalRow> rows;
    std::vector<MethodSummary> aggregates;
};

struct EvalOptions {
    Band band{kDefaultBandLoHz, kDefaultBandHiHz};
    PeakOptions peaks{};
    std::size_t overlap = 0;
    const DeepCztModel* model = nullptr;  // required for Method::DeepCzt
    unsigned jobs = 1;
};

/// Runs every method on every window of every trace. Per-window estimator
/// failures become skipped rows, never aborts. Rows are ordered by
/// (subject, window_index, method position); jobs > 1 parallelizes across
/// traces without changing the output.
EvalReport evaluate(const std::vector<Trace>& traces, const std::vector<Method>& methods,
                    std::size_t window_size, const EvalOptions& opts = {});

std::string report_rows_csv(const EvalReport& report);
std::string report_aggregates_json(const EvalReport& report);

/// `t,ppg` CSV of a signal (the trace format load_trace reads back).
std::string trace_csv(const std::vector<double>& samples, double sample_rate_hz);
/// `t,hr_bpm` CSV of a per-sample ground-truth series.
std::string gt_csv_per_sample(const std::vector<double>& hr_bpm, double sample_rate_hz);
/// `window_index,hr_bpm` CSV of per-window labels.
std::string gt_csv_per_window(const std::vector<double>& hr_bpm);

/// Numeric formatting used in every emitted file: 6 significant digits.
std::string format_sig(double value);

}  // namespace czthr
