#include "lmnet/pipeline.hpp"

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <fstream>
#include <istream>
#include <ostream>

#include "lmnet/mlp_provider.hpp"
#include "lmnet/textio.hpp"

namespace lmnet {

namespace fs = std::filesystem;

Schema default_schema() {
    Schema s;
    s.feature_columns = {"age",       "anaemia", "diabetes", "high_blood_pressure",
                         "platelets", "sex",     "smoking",  "time"};
    s.label_column = "DEATH_EVENT";
    return s;
}

namespace {

DenseMatrix column_matrix(const DenseVector& v) {
    DenseMatrix m(v.size(), 1);
    for (std::size_t i = 0; i < v.size(); ++i) m(i, 0) = v[i];
    return m;
}

std::optional<EvalReport> evaluate_part(const MlpModel& model, const Dataset& part,
                                        const NormStats& stats, double threshold) {
    if (part.size() == 0) return std::nullopt;
    const DenseMatrix xn = apply_normalization(part.x, stats);
    const DenseVector scores = score_rows(model, xn);
    return report(confusion(scores, part.y, threshold), threshold);
}

std::ofstream open_output(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw IoError("cannot open file for writing: " + path.string());
    return out;
}

void finish_output(std::ofstream& out, const fs::path& path) {
    out.flush();
    if (!out) throw IoError("write failed: " + path.string());
}

void write_eval_files(const EvalReport& rep, const fs::path& dir, const std::string& suffix) {
    const fs::path report_path = dir / ("eval" + suffix + ".txt");
    std::ofstream report_out = open_output(report_path);
    write_report(rep, report_out);
    finish_output(report_out, report_path);

    const fs::path cm_path = dir / ("confusion" + suffix + ".csv");
    std::ofstream cm_out = open_output(cm_path);
    write_confusion_csv(rep.counts, cm_out);
    finish_output(cm_out, cm_path);
}

void write_history_files(const TrainHistory& history, const fs::path& dir) {
    const fs::path history_path = dir / "history.csv";
    std::ofstream history_out = open_output(history_path);
    write_history_csv(history, history_out);
    finish_output(history_out, history_path);

    const fs::path curve_path = dir / "sse_curve.csv";
    std::ofstream curve_out = open_output(curve_path);
    curve_out << "iteration,sse\n";
    for (const auto& [iteration, s] : predict_sse_curve(history))
        curve_out << iteration << ',' << format_double(s) << '\n';
    finish_output(curve_out, curve_path);
}

void write_splits_csv(const SplitResult& splits, const fs::path& dir) {
    struct Entry {
        std::size_t row_id;
        const char* part;
    };
    std::vector<Entry> entries;
    for (std::size_t id : splits.train.row_ids) entries.push_back({id, "train"});
    for (std::size_t id : splits.val.row_ids) entries.push_back({id, "val"});
    for (std::size_t id : splits.test.row_ids) entries.push_back({id, "test"});
    std::sort(entries.begin(), entries.end(),
              [](const Entry& a, const Entry& b) { return a.row_id < b.row_id; });

    const fs::path path = dir / "splits.csv";
    std::ofstream out = open_output(path);
    out << "row_id,part\n";
    for (const Entry& e : entries) out << e.row_id << ',' << e.part << '\n';
    finish_output(out, path);
}

fs::path ensure_out_dir(const std::string& out_dir) {
    if (out_dir.empty()) throw ConfigError("output directory must not be empty");
    std::error_code ec;
    fs::create_directories(out_dir, ec);
    if (ec) throw IoError("cannot create output directory: " + out_dir);
    return fs::path(out_dir);
}

void log_report(std::ostream& log, const std::string& name,
                const std::optional<EvalReport>& rep) {
    if (rep)
        log << name << " accuracy: " << format_double(rep->accuracy) << " (" << rep->samples
            << " samples)\n";
    else
        log << name << ": empty split, no report\n";
}

}  // namespace

TrainArtifacts run_training_pipeline(const RunConfig& cfg) {
    cfg.schema.validate();
    cfg.lm.validate();
    SplitSpec split_spec = cfg.split;
    split_spec.seed = cfg.seed;
    split_spec.validate();
    if (cfg.data_path.empty()) throw ConfigError("no data file given");
    if (!(cfg.threshold >= 0.0 && cfg.threshold <= 1.0))
        throw ConfigError("threshold must lie in [0, 1]");
    for (std::size_t h : cfg.hidden)
        if (h == 0) throw ConfigError("hidden layer sizes must be >= 1");

    const Dataset full = load_csv(cfg.data_path, cfg.schema);
    SplitResult parts = split(full, split_spec);
    const NormStats stats = fit_normalization(parts.train);
    const Dataset train_n = apply_normalization(parts.train, stats);

    MlpShape shape;
    shape.layer_sizes.push_back(cfg.schema.feature_columns.size());
    shape.layer_sizes.insert(shape.layer_sizes.end(), cfg.hidden.begin(), cfg.hidden.end());
    shape.layer_sizes.push_back(1);

    const MlpModel initial = init_model(shape, InitSpec{cfg.seed});
    const MlpResidualProvider provider(shape, train_n.x, column_matrix(train_n.y));
    LmResult result = lm_train(provider, flatten(initial), cfg.lm);

    TrainArtifacts art;
    art.model.schema = cfg.schema;
    art.model.norm = stats;
    art.model.model = unflatten(shape, result.beta);
    art.history = std::move(result.history);
    art.train_report = evaluate_part(art.model.model, parts.train, stats, cfg.threshold);
    art.val_report = evaluate_part(art.model.model, parts.val, stats, cfg.threshold);
    art.test_report = evaluate_part(art.model.model, parts.test, stats, cfg.threshold);
    art.splits = std::move(parts);
    return art;
}

void cmd_train(const RunConfig& cfg, std::ostream& log) {
    const fs::path dir = ensure_out_dir(cfg.out_dir);

    TrainArtifacts art;
    try {
        art = run_training_pipeline(cfg);
    } catch (const NonFiniteObjectiveError& e) {
        write_history_files(e.history, dir);
        throw;
    }

    const fs::path model_path =
        cfg.model_path.empty() ? dir / "model.txt" : fs::path(cfg.model_path);
    save_model(art.model, model_path.string());
    write_history_files(art.history, dir);
    write_splits_csv(art.splits, dir);
    if (art.train_report) write_eval_files(*art.train_report, dir, "_train");
    if (art.val_report) write_eval_files(*art.val_report, dir, "_val");
    if (art.test_report) write_eval_files(*art.test_report, dir, "_test");

    log << "trained " << art.history.records.size() << " proposals, stopped: "
        << termination_reason_name(art.history.reason) << '\n';
    log_report(log, "train", art.train_report);
    log_report(log, "val", art.val_report);
    log_report(log, "test", art.test_report);
    log << "model written to " << model_path.string() << '\n';
}

void cmd_evaluate(const RunConfig& cfg, std::ostream& log) {
    if (cfg.model_path.empty()) throw ConfigError("no model file given");
    if (cfg.data_path.empty()) throw ConfigError("no data file given");
    const SavedModel saved = load_model(cfg.model_path);
    const Dataset ds = load_csv(cfg.data_path, saved.schema);
    const fs::path dir = ensure_out_dir(cfg.out_dir);

    const DenseMatrix xn = apply_normalization(ds.x, saved.norm);
    const DenseVector scores = score_rows(saved.model, xn);
    const EvalReport rep = report(confusion(scores, ds.y, cfg.threshold), cfg.threshold);
    write_eval_files(rep, dir, "");
    log << "accuracy: " << format_double(rep.accuracy) << " (" << rep.samples << " samples)\n";
}

void cmd_predict(const RunConfig& cfg, std::ostream& log) {
    if (cfg.model_path.empty()) throw ConfigError("no model file given");
    if (cfg.data_path.empty()) throw ConfigError("no data file given");
    const SavedModel saved = load_model(cfg.model_path);
    const auto [x, row_ids] = load_features_csv(cfg.data_path, saved.schema);
    const fs::path dir = ensure_out_dir(cfg.out_dir);

    const DenseMatrix xn = apply_normalization(x, saved.norm);
    const DenseVector scores = score_rows(saved.model, xn);

    const fs::path path = dir / "predictions.csv";
    std::ofstream out = open_output(path);
    out << "row_id,score,predicted\n";
    for (std::size_t i = 0; i < scores.size(); ++i)
        out << row_ids[i] << ',' << format_double(scores[i]) << ','
            << (scores[i] >= cfg.threshold ? 1 : 0) << '\n';
    finish_output(out, path);
    log << "wrote " << scores.size() << " predictions to " << path.string() << '\n';
}

int cmd_monitor(const std::string& model_path, double threshold, std::istream& in,
                std::ostream& out, std::ostream& err) {
    const SavedModel saved = load_model(model_path);
    const std::size_t n_features = saved.schema.feature_columns.size();

    std::string line;
    std::size_t line_no = 0;
    DenseVector row(n_features);
    while (std::getline(in, line)) {
        ++line_no;
        line = strip_cr(line);
        if (trim(line).empty()) continue;
        const std::vector<std::string> fields = split_csv_line(line);
        if (fields.size() != n_features) {
            err << "line " << line_no << ": expected " << n_features << " fields, got "
                << fields.size() << '\n';
            continue;
        }
        bool ok = true;
        for (std::size_t j = 0; j < n_features; ++j) {
            const auto v = parse_double(fields[j]);
            if (!v || !std::isfinite(*v)) {
                err << "line " << line_no << ": malformed number '" << fields[j] << "' in column "
                    << saved.schema.feature_columns[j] << '\n';
                ok = false;
                break;
            }
            row[j] = *v;
        }
        if (!ok) continue;
        const DenseVector y = forward(saved.model, normalize_row(row, saved.norm));
        const double score = y[0];
        const int predicted = score >= threshold ? 1 : 0;
        out << format_double(score) << ',' << predicted << ',' << predicted << '\n';
        out.flush();
    }
    return 0;
}

}  // namespace lmnet
