#include "czthr/eval.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <exception>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <thread>

#include <nlohmann/json.hpp>

#include "czthr/deep.hpp"

namespace czthr {
namespace {

std::string strip(std::string s) {
    while (!s.empty() && (s.back() == '\r' || s.back() == ' ' || s.back() == '\t')) s.pop_back();
    std::size_t i = 0;
    while (i < s.size() && (s[i] == ' ' || s[i] == '\t')) ++i;
    return s.substr(i);
}

std::vector<std::string> split_csv(const std::string& line) {
    std::vector<std::string> out;
    std::string cur;
    for (char c : line) {
        if (c == ',') {
            out.push_back(strip(cur));
            cur.clear();
        } else {
            cur += c;
        }
    }
    out.push_back(strip(cur));
    return out;
}

double parse_num(const std::string& tok, const std::string& path, std::size_t line_no,
                 const char* column) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(tok, &pos);
        if (pos != tok.size()) throw std::invalid_argument("trailing characters");
        if (!std::isfinite(v)) {
            std::ostringstream os;
            os << path << " line " << line_no << ": non-finite " << column << " value";
            throw std::runtime_error(os.str());
        }
        return v;
    } catch (const std::runtime_error&) {
        throw;
    } catch (const std::exception&) {
        std::ostringstream os;
        os << path << " line " << line_no << ": cannot parse " << column << " value '" << tok
           << "'";
        throw std::runtime_error(os.str());
    }
}

struct CsvTable {
    std::string header;
    std::vector<std::pair<std::size_t, std::vector<std::string>>> rows;  // (line_no, cells)
};

CsvTable read_csv(const std::string& path) {
    std::ifstream f(path);
    if (!f) throw std::runtime_error("cannot open file: " + path);
    CsvTable table;
    std::string line;
    std::size_t line_no = 0;
    while (std::getline(f, line)) {
        ++line_no;
        const std::string cleaned = strip(line);
        if (cleaned.empty()) continue;
        if (table.header.empty()) {
            table.header = cleaned;
        } else {
            table.rows.emplace_back(line_no, split_csv(cleaned));
        }
    }
    if (table.header.empty()) throw std::runtime_error("empty CSV file: " + path);
    return table;
}

void require_columns(const CsvTable& table, const std::string& path, std::size_t n) {
    for (const auto& [line_no, cells] : table.rows) {
        if (cells.size() != n) {
            std::ostringstream os;
            os << path << " line " << line_no << ": expected " << n << " columns, got "
               << cells.size();
            throw std::runtime_error(os.str());
        }
    }
}

std::string file_stem(const std::string& path) {
    const std::size_t slash = path.find_last_of("/\\");
    std::string name = slash == std::string::npos ? path : path.substr(slash + 1);
    const std::size_t dot = name.find_last_of('.');
    if (dot != std::string::npos && dot > 0) name = name.substr(0, dot);
    return name;
}

void check_gt_value(double bpm, const std::string& path, std::size_t line_no) {
    if (!(bpm > 0.0) || !(bpm < 300.0)) {
        std::ostringstream os;
        os << path << " line " << line_no << ": HR " << bpm << " BPM outside (0, 300)";
        throw std::runtime_error(os.str());
    }
}

double sample_time(const Trace& trace, std::size_t i) {
    if (!trace.times_s.empty()) return trace.times_s[i];
    return static_cast<double>(i) / trace.sample_rate_hz;
}

double interp_series(const std::vector<double>& ts, const std::vector<double>& vs, double t) {
    if (t <= ts.front()) return vs.front();
    if (t >= ts.back()) return vs.back();
    const auto it = std::upper_bound(ts.begin(), ts.end(), t);
    const std::size_t hi = static_cast<std::size_t>(it - ts.begin());
    const std::size_t lo = hi - 1;
    const double u = (t - ts[lo]) / (ts[hi] - ts[lo]);
    return vs[lo] + u * (vs[hi] - vs[lo]);
}

double round_sig(double v) { return std::stod(format_sig(v)); }

std::string csv_escape(const std::string& s) {
    if (s.find_first_of(",\"\n") == std::string::npos) return s;
    std::string out = "\"";
    for (char c : s) {
        if (c == '"') out += '"';
        out += c;
    }
    out += '"';
    return out;
}

}  // namespace

Trace load_trace(const std::string& path, double sample_rate_hz, TraceFormat format) {
    const CsvTable table = read_csv(path);
    TraceFormat detected;
    if (table.header == "t,ppg") {
        detected = TraceFormat::TimePpg;
    } else if (table.header == "ppg") {
        detected = TraceFormat::PpgOnly;
    } else {
        throw std::runtime_error(path + ": unrecognized trace header '" + table.header +
                                 "' (expected 't,ppg' or 'ppg')");
    }
    if (format != TraceFormat::Auto && format != detected)
        throw std::runtime_error(path + ": header '" + table.header +
                                 "' does not match the requested format");
    if (table.rows.size() < 2) throw std::runtime_error(path + ": need at least 2 samples");

    Trace trace;
    trace.subject_id = file_stem(path);
    trace.samples.reserve(table.rows.size());

    if (detected == TraceFormat::TimePpg) {
        require_columns(table, path, 2);
        trace.times_s.reserve(table.rows.size());
        for (const auto& [line_no, cells] : table.rows) {
            const double t = parse_num(cells[0], path, line_no, "t");
            if (!trace.times_s.empty() && t <= trace.times_s.back()) {
                std::ostringstream os;
                os << path << " line " << line_no << ": non-monotonic timestamp " << t;
                throw std::runtime_error(os.str());
            }
            trace.times_s.push_back(t);
            trace.samples.push_back(parse_num(cells[1], path, line_no, "ppg"));
        }
        const double span = trace.times_s.back() - trace.times_s.front();
        trace.sample_rate_hz = static_cast<double>(trace.samples.size() - 1) / span;
    } else {
        if (!(sample_rate_hz > 0.0))
            throw std::runtime_error(path +
                                     ": trace has no timestamps; a sample rate is required");
        require_columns(table, path, 1);
        for (const auto& [line_no, cells] : table.rows)
            trace.samples.push_back(parse_num(cells[0], path, line_no, "ppg"));
        trace.sample_rate_hz = sample_rate_hz;
    }
    return trace;
}

void attach_ground_truth(Trace& trace, const std::string& gt_path) {
    if (trace.samples.empty()) throw std::invalid_argument("trace has no samples");
    const CsvTable table = read_csv(gt_path);
    if (table.rows.empty()) throw std::runtime_error(gt_path + ": no ground-truth rows");
    require_columns(table, gt_path, 2);

    if (table.header == "t,hr_bpm") {
        std::vector<double> ts, vs;
        ts.reserve(table.rows.size());
        vs.reserve(table.rows.size());
        for (const auto& [line_no, cells] : table.rows) {
            const double t = parse_num(cells[0], gt_path, line_no, "t");
            const double bpm = parse_num(cells[1], gt_path, line_no, "hr_bpm");
            check_gt_value(bpm, gt_path, line_no);
            if (!ts.empty() && t <= ts.back()) {
                std::ostringstream os;
                os << gt_path << " line " << line_no << ": non-monotonic timestamp " << t;
                throw std::runtime_error(os.str());
            }
            ts.push_back(t);
            vs.push_back(bpm);
        }
        const double t0 = sample_time(trace, 0);
        const double t1 = sample_time(trace, trace.samples.size() - 1);
        const double tol = 1.0 / trace.sample_rate_hz;
        if (ts.front() > t0 + tol || ts.back() < t1 - tol) {
            std::ostringstream os;
            os << gt_path << ": ground-truth coverage gap (series spans [" << ts.front() << ", "
               << ts.back() << "] s, signal spans [" << t0 << ", " << t1 << "] s)";
            throw std::runtime_error(os.str());
        }
        trace.gt_kind = GtKind::PerSample;
        trace.gt_bpm.resize(trace.samples.size());
        for (std::size_t i = 0; i < trace.samples.size(); ++i)
            trace.gt_bpm[i] = interp_series(ts, vs, sample_time(trace, i));
    } else if (table.header == "window_index,hr_bpm") {
        std::vector<double> labels;
        labels.reserve(table.rows.size());
        for (const auto& [line_no, cells] : table.rows) {
            const double idx = parse_num(cells[0], gt_path, line_no, "window_index");
            if (idx != static_cast<double>(labels.size())) {
                std::ostringstream os;
                os << gt_path << " line " << line_no
                   << ": window_index rows must be consecutive from 0";
                throw std::runtime_error(os.str());
            }
            const double bpm = parse_num(cells[1], gt_path, line_no, "hr_bpm");
            check_gt_value(bpm, gt_path, line_no);
            labels.push_back(bpm);
        }
        trace.gt_kind = GtKind::PerWindow;
        trace.gt_bpm = std::move(labels);
    } else {
        throw std::runtime_error(gt_path + ": unrecognized ground-truth header '" + table.header +
                                 "' (expected 't,hr_bpm' or 'window_index,hr_bpm')");
    }
}

namespace {

std::size_t window_count(const Trace& trace, std::size_t size, std::size_t overlap) {
    if (size < 2) throw std::invalid_argument("window size must be >= 2");
    if (overlap >= size) throw std::invalid_argument("overlap must be smaller than the window");
    if (size > trace.samples.size()) {
        std::ostringstream os;
        os << "window size " << size << " exceeds trace length " << trace.samples.size();
        throw std::runtime_error(os.str());
    }
    return (trace.samples.size() - size) / (size - overlap) + 1;
}

}  // namespace

std::vector<SignalWindow> window_signal(const Trace& trace, std::size_t size,
                                        std::size_t overlap) {
    const std::size_t count = window_count(trace, size, overlap);
    const std::size_t stride = size - overlap;
    std::vector<SignalWindow> out;
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const auto begin = trace.samples.begin() + static_cast<std::ptrdiff_t>(w * stride);
        out.push_back({{begin, begin + static_cast<std::ptrdiff_t>(size)}, trace.sample_rate_hz});
    }
    return out;
}

std::vector<LabeledWindow> window_trace(const Trace& trace, std::size_t size,
                                        std::size_t overlap) {
    if (trace.gt_kind == GtKind::None)
        throw std::runtime_error("trace '" + trace.subject_id + "' has no ground truth");
    const std::size_t count = window_count(trace, size, overlap);
    const std::size_t stride = size - overlap;
    std::vector<LabeledWindow> out;
    out.reserve(count);
    for (std::size_t w = 0; w < count; ++w) {
        const std::size_t start = w * stride;
        LabeledWindow item;
        item.window.sample_rate_hz = trace.sample_rate_hz;
        item.window.samples.assign(trace.samples.begin() + static_cast<std::ptrdiff_t>(start),
                                   trace.samples.begin() +
                                       static_cast<std::ptrdiff_t>(start + size));
        if (trace.gt_kind == GtKind::PerSample) {
            double acc = 0.0;
            for (std::size_t i = start; i < start + size; ++i) acc += trace.gt_bpm[i];
            item.hr_gt_bpm = acc / static_cast<double>(size);
        } else {
            if (w >= trace.gt_bpm.size()) {
                std::ostringstream os;
                os << "ground-truth coverage gap: window " << w << " of '" << trace.subject_id
                   << "' has no per-window label";
                throw std::runtime_error(os.str());
            }
            item.hr_gt_bpm = trace.gt_bpm[w];
        }
        std::ostringstream tag;
        tag << trace.subject_id << "#" << w;
        item.source_tag = tag.str();
        out.push_back(std::move(item));
    }
    return out;
}

Metrics metrics(const std::vector<double>& preds, const std::vector<double>& gts) {
    if (preds.empty()) throw std::invalid_argument("metrics need at least one pair");
    if (preds.size() != gts.size())
        throw std::invalid_argument("prediction and ground-truth lengths differ");
    const auto n = static_cast<double>(preds.size());
    double abs_sum = 0.0, sq_sum = 0.0, pct_sum = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        if (!std::isfinite(preds[i]) || !std::isfinite(gts[i]))
            throw std::invalid_argument("metrics require finite inputs");
        if (!(gts[i] > 0.0)) throw std::invalid_argument("MAPE requires positive ground truth");
        const double d = preds[i] - gts[i];
        abs_sum += std::abs(d);
        sq_sum += d * d;
        pct_sum += std::abs(d) / gts[i];
    }
    Metrics m;
    m.mae = abs_sum / n;
    m.rmse = std::sqrt(sq_sum / n);
    m.mape = 100.0 * pct_sum / n;

    const double mean_p = mean(preds), mean_g = mean(gts);
    double cov = 0.0, var_p = 0.0, var_g = 0.0;
    for (std::size_t i = 0; i < preds.size(); ++i) {
        const double dp = preds[i] - mean_p, dg = gts[i] - mean_g;
        cov += dp * dg;
        var_p += dp * dp;
        var_g += dg * dg;
    }
    if (var_p > 0.0 && var_g > 0.0) m.pearson_r = cov / std::sqrt(var_p * var_g);
    return m;
}

EvalReport evaluate(const std::vector<Trace>& traces, const std::vector<Method>& methods,
                    std::size_t window_size, const EvalOptions& opts) {
    if (traces.empty()) throw std::invalid_argument("empty trace list");
    if (methods.empty()) throw std::invalid_argument("no methods requested");
    const bool wants_deep =
        std::find(methods.begin(), methods.end(), Method::DeepCzt) != methods.end();
    if (wants_deep && opts.model == nullptr)
        throw std::invalid_argument("the deep method requires a model");
    if (wants_deep && opts.model->n_input != window_size) {
        std::ostringstream os;
        os << "model expects " << opts.model->n_input << "-sample windows, requested "
           << window_size;
        throw std::invalid_argument(os.str());
    }

    std::vector<std::vector<EvalRow>> per_trace(traces.size());
    std::vector<std::exception_ptr> failures(traces.size());

    auto run_trace = [&](std::size_t t) {
        try {
            const auto windows = window_trace(traces[t], window_size, opts.overlap);
            auto& rows = per_trace[t];
            rows.reserve(windows.size() * methods.size());
            for (std::size_t w = 0; w < windows.size(); ++w) {
                for (const Method method : methods) {
                    EvalRow row;
                    row.subject = traces[t].subject_id;
                    row.window_index = w;
                    row.method = method;
                    row.gt_bpm = windows[w].hr_gt_bpm;
                    try {
                        row.pred_bpm =
                            method == Method::DeepCzt
                                ? deep_estimate_bpm(*opts.model, windows[w].window)
                                : estimate_window(windows[w].window, method, opts.band,
                                                  opts.peaks)
                                      .bpm;
                    } catch (const std::exception& e) {
                        row.skipped = true;
                        row.skip_reason = e.what();
                    }
                    rows.push_back(std::move(row));
                }
            }
        } catch (...) {
            failures[t] = std::current_exception();
        }
    };

    const unsigned jobs =
        std::max(1u, std::min<unsigned>(opts.jobs, static_cast<unsigned>(traces.size())));
    if (jobs <= 1) {
        for (std::size_t t = 0; t < traces.size(); ++t) run_trace(t);
    } else {
        std::atomic<std::size_t> next{0};
        std::vector<std::thread> pool;
        pool.reserve(jobs);
        for (unsigned j = 0; j < jobs; ++j) {
            pool.emplace_back([&] {
                for (std::size_t t = next.fetch_add(1); t < traces.size();
                     t = next.fetch_add(1))
                    run_trace(t);
            });
        }
        for (auto& th : pool) th.join();
    }
    for (const auto& failure : failures)
        if (failure) std::rethrow_exception(failure);

    EvalReport report;
    report.window_size = window_size;
    for (auto& rows : per_trace)
        report.rows.insert(report.rows.end(), std::make_move_iterator(rows.begin()),
                           std::make_move_iterator(rows.end()));

    std::map<Method, std::size_t> method_pos;
    for (std::size_t i = 0; i < methods.size(); ++i) method_pos.emplace(methods[i], i);
    std::stable_sort(report.rows.begin(), report.rows.end(),
                     [&](const EvalRow& a, const EvalRow& b) {
                         if (a.subject != b.subject) return a.subject < b.subject;
                         if (a.window_index != b.window_index)
                             return a.window_index < b.window_index;
                         return method_pos.at(a.method) < method_pos.at(b.method);
                     });

    for (const Method method : methods) {
        MethodSummary summary;
        summary.method = method;
        std::vector<double> preds, gts;
        for (const EvalRow& row : report.rows) {
            if (row.method != method) continue;
            ++summary.windows;
            if (row.skipped) {
                ++summary.skipped;
            } else {
                preds.push_back(row.pred_bpm);
                gts.push_back(row.gt_bpm);
            }
        }
        if (!preds.empty()) summary.metrics = metrics(preds, gts);
        report.aggregates.push_back(std::move(summary));
    }
    return report;
}

std::string format_sig(double value) {
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.6g", value);
    return buf;
}

std::string report_rows_csv(const EvalReport& report) {
    std::string out = "subject,window_index,method,pred_bpm,gt_bpm,status,reason\n";
    for (const EvalRow& row : report.rows) {
        out += csv_escape(row.subject);
        out += ',';
        out += std::to_string(row.window_index);
        out += ',';
        out += to_string(row.method);
        out += ',';
        if (!row.skipped) out += format_sig(row.pred_bpm);
        out += ',';
        out += format_sig(row.gt_bpm);
        out += row.skipped ? ",skipped," : ",ok,";
        out += csv_escape(row.skip_reason);
        out += '\n';
    }
    return out;
}

std::string report_aggregates_json(const EvalReport& report) {
    nlohmann::json j;
    j["window_size"] = report.window_size;
    auto arr = nlohmann::json::array();
    for (const MethodSummary& s : report.aggregates) {
        nlohmann::json m;
        m["method"] = to_string(s.method);
        m["windows"] = s.windows;
        m["skipped"] = s.skipped;
        const bool any = s.windows > s.skipped;
        m["mae"] = any ? nlohmann::json(round_sig(s.metrics.mae)) : nlohmann::json();
        m["rmse"] = any ? nlohmann::json(round_sig(s.metrics.rmse)) : nlohmann::json();
        m["mape"] = any ? nlohmann::json(round_sig(s.metrics.mape)) : nlohmann::json();
        m["pearson_r"] = s.metrics.pearson_r ? nlohmann::json(round_sig(*s.metrics.pearson_r))
                                             : nlohmann::json();
        arr.push_back(std::move(m));
    }
    j["methods"] = std::move(arr);
    return j.dump(2) + "\n";
}

std::string trace_csv(const std::vector<double>& samples, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("sample rate must be positive");
    std::string out = "t,ppg\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        out += format_sig(static_cast<double>(i) / sample_rate_hz);
        out += ',';
        out += format_sig(samples[i]);
        out += '\n';
    }
    return out;
}

std::string gt_csv_per_sample(const std::vector<double>& hr_bpm, double sample_rate_hz) {
    if (!(sample_rate_hz > 0.0)) throw std::invalid_argument("sample rate must be positive");
    std::string out = "t,hr_bpm\n";
    for (std::size_t i = 0; i < hr_bpm.size(); ++i) {
        out += format_sig(static_cast<double>(i) / sample_rate_hz);
        out += ',';
        out += format_sig(hr_bpm[i]);
        out += '\n';
    }
    return out;
}

std::string gt_csv_per_window(const std::vector<double>& hr_bpm) {
    std::string out = "window_index,hr_bpm\n";
    for (std::size_t i = 0; i < hr_bpm.size(); ++i) {
        out += std::to_string(i);
        out += ',';
        out += format_sig(hr_bpm[i]);
        out += '\n';
    }
    return out;
}

}  // namespace czthr
