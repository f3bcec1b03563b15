#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <utility>
#include <vector>

#include "lmnet/dataset.hpp"
#include "lmnet/linalg.hpp"
#include "lmnet/mlp.hpp"

namespace lmnet {

/// 2x2 counts at a decision threshold; rows = actual, columns = predicted,
/// positive class = label 1.
struct ConfusionMatrix {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const { return tp + fp + tn + fn; }
};

struct EvalReport {
    double accuracy = 0.0;
    std::optional<double> precision;
    std::optional<double> recall;
    std::optional<double> f1;
    double threshold = 0.5;
    std::size_t samples = 0;
    ConfusionMatrix counts;
};

/// Predicted positive iff score >= threshold (a tie counts as positive).
ConfusionMatrix confusion(const DenseVector& scores, const DenseVector& labels,
                          double threshold = 0.5);

EvalReport report(const ConfusionMatrix& cm, double threshold = 0.5);

/// Scores each row of x through a single-output model.
DenseVector score_rows(const MlpModel& model, const DenseMatrix& x);

/// Accuracy of each checkpoint on eval_set, in order.
std::vector<std::pair<std::size_t, double>> accuracy_curve(
    const std::vector<MlpModel>& checkpoints, const Dataset& eval_set, double threshold);

void write_report(const EvalReport& rep, std::ostream& out);

/// CSV with header `actual\predicted,0,1`.
void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& out);

/// CSV: iteration,accuracy
void write_accuracy_curve_csv(const std::vector<std::pair<std::size_t, double>>& curve,
                              std::ostream& out);

}  // namespace lmnet
