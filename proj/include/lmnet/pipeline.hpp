#pragma once

#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "lmnet/dataset.hpp"
#include "lmnet/lm.hpp"
#include "lmnet/metrics.hpp"
#include "lmnet/model_io.hpp"

namespace lmnet {

/// Default schema: the public heart-failure clinical-records CSV, restricted
/// to the eight tabulated clinical features plus the death-event label.
Schema default_schema();

struct RunConfig {
    Schema schema = default_schema();
    std::vector<std::size_t> hidden{6};
    LmConfig lm;
    SplitSpec split;
    double threshold = 0.5;
    std::uint64_t seed = 0;  // drives both the split and the weight init

    std::string data_path;
    std::string model_path;  // train: output override; evaluate/predict/monitor: input
    std::string out_dir = "out";
};

struct TrainArtifacts {
    SavedModel model;
    TrainHistory history;
    SplitResult splits;
    std::optional<EvalReport> train_report;
    std::optional<EvalReport> val_report;
    std::optional<EvalReport> test_report;
};

/// load -> split (seeded) -> fit normalization on train -> lm_train ->
/// evaluate all three parts with train-fitted statistics.
TrainArtifacts run_training_pipeline(const RunConfig& cfg);

/// Writes model/history/sse-curve/splits/eval artifacts under cfg.out_dir.
/// On NonFiniteObjectiveError the history collected so far is still written
/// before the error propagates.
void cmd_train(const RunConfig& cfg, std::ostream& log);

void cmd_evaluate(const RunConfig& cfg, std::ostream& log);

void cmd_predict(const RunConfig& cfg, std::ostream& log);

/// Reads headerless feature rows from `in`, one line per sample, in the
/// model's feature order; emits `score,predicted,alert` per row. Malformed
/// lines produce a diagnostic on `err` and the stream continues.
int cmd_monitor(const std::string& model_path, double threshold, std::istream& in,
                std::ostream& out, std::ostream& err);

}  // namespace lmnet
