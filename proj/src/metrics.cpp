#include "lmnet/metrics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "lmnet/textio.hpp"

namespace lmnet {

ConfusionMatrix confusion(const DenseVector& scores, const DenseVector& labels,
                          double threshold) {
    if (scores.size() != labels.size())
        throw std::invalid_argument("confusion: scores and labels differ in length");
    ConfusionMatrix cm;
    for (std::size_t i = 0; i < scores.size(); ++i) {
        if (!std::isfinite(scores[i]))
            throw std::invalid_argument("confusion: non-finite score");
        if (labels[i] != 0.0 && labels[i] != 1.0)
            throw std::invalid_argument("confusion: label is not 0 or 1");
        const bool predicted = scores[i] >= threshold;
        const bool actual = labels[i] == 1.0;
        if (actual)
            predicted ? ++cm.tp : ++cm.fn;
        else
            predicted ? ++cm.fp : ++cm.tn;
    }
    return cm;
}

EvalReport report(const ConfusionMatrix& cm, double threshold) {
    const std::size_t total = cm.total();
    if (total == 0) throw std::invalid_argument("report: empty confusion matrix");
    EvalReport rep;
    rep.counts = cm;
    rep.samples = total;
    rep.threshold = threshold;
    rep.accuracy = static_cast<double>(cm.tp + cm.tn) / static_cast<double>(total);
    if (cm.tp + cm.fp > 0)
        rep.precision = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fp);
    if (cm.tp + cm.fn > 0)
        rep.recall = static_cast<double>(cm.tp) / static_cast<double>(cm.tp + cm.fn);
    if (rep.precision && rep.recall && (*rep.precision + *rep.recall > 0.0))
        rep.f1 = 2.0 * *rep.precision * *rep.recall / (*rep.precision + *rep.recall);
    return rep;
}

DenseVector score_rows(const MlpModel& model, const DenseMatrix& x) {
    if (model.shape.output_size() != 1)
        throw std::invalid_argument("score_rows: model must have a single output");
    const DenseMatrix f = forward_batch(model, x);
    DenseVector scores(f.rows());
    for (std::size_t i = 0; i < f.rows(); ++i) scores[i] = f(i, 0);
    return scores;
}

std::vector<std::pair<std::size_t, double>> accuracy_curve(
    const std::vector<MlpModel>& checkpoints, const Dataset& eval_set, double threshold) {
    if (checkpoints.empty())
        throw std::invalid_argument("accuracy_curve: no checkpoints");
    std::vector<std::pair<std::size_t, double>> curve;
    curve.reserve(checkpoints.size());
    for (std::size_t c = 0; c < checkpoints.size(); ++c) {
        const DenseVector scores = score_rows(checkpoints[c], eval_set.x);
        const EvalReport rep = report(confusion(scores, eval_set.y, threshold), threshold);
        curve.emplace_back(c, rep.accuracy);
    }
    return curve;
}

namespace {

void write_optional(std::ostream& out, const char* name, const std::optional<double>& v) {
    out << name << " = " << (v ? format_double(*v) : "undefined") << '\n';
}

}  // namespace

void write_report(const EvalReport& rep, std::ostream& out) {
    out << "accuracy = " << format_double(rep.accuracy) << '\n';
    write_optional(out, "precision", rep.precision);
    write_optional(out, "recall", rep.recall);
    write_optional(out, "f1", rep.f1);
    out << "threshold = " << format_double(rep.threshold) << '\n';
    out << "samples = " << rep.samples << '\n';
    out << "tp = " << rep.counts.tp << '\n';
    out << "fp = " << rep.counts.fp << '\n';
    out << "tn = " << rep.counts.tn << '\n';
    out << "fn = " << rep.counts.fn << '\n';
}

void write_confusion_csv(const ConfusionMatrix& cm, std::ostream& out) {
    out << "actual\\predicted,0,1\n";
    out << "0," << cm.tn << ',' << cm.fp << '\n';
    out << "1," << cm.fn << ',' << cm.tp << '\n';
}

void write_accuracy_curve_csv(const std::vector<std::pair<std::size_t, double>>& curve,
                              std::ostream& out) {
    out << "iteration,accuracy\n";
    for (const auto& [iteration, accuracy] : curve)
        out << iteration << ',' << format_double(accuracy) << '\n';
}

}  // namespace lmnet
