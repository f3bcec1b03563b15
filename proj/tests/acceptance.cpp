// Acceptance checks for the trainer, one printed verdict per criterion.
// Exit status is the number of failed criteria; a skipped criterion (missing
// optional dataset) does not fail the run.

#include <unistd.h>

#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <iterator>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "lmnet/lm.hpp"
#include "lmnet/mlp.hpp"
#include "lmnet/mlp_provider.hpp"
#include "lmnet/pipeline.hpp"
#include "lmnet/textio.hpp"
#include "oracles.hpp"
#include "providers.hpp"

using namespace lmnet;
namespace fs = std::filesystem;

namespace {

struct Verdict {
    bool skipped = false;
    bool passed = false;
    std::string detail;
};

// every history checked by the invariant criterion, with the bounds its run used
struct BoundedHistory {
    TrainHistory history;
    double lambda_min;
    double lambda_max;
};

std::vector<BoundedHistory> g_histories;

void keep(const TrainHistory& h, const LmConfig& cfg) {
    g_histories.push_back({h, cfg.lambda_min, cfg.lambda_max});
}

double seconds_since(std::chrono::steady_clock::time_point t0) {
    return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

std::string fmt(double v) {
    std::ostringstream out;
    out.precision(3);
    out << v;
    return out.str();
}

// ---- criterion 1: analytic Jacobian vs central differences --------------

Verdict check_jacobian() {
    const auto t0 = std::chrono::steady_clock::now();
    oracle::Rng rng(101);
    const std::vector<std::vector<std::size_t>> architectures = {
        {2, 2, 1}, {3, 4, 2}, {8, 6, 1}};
    const Activation hidden_choices[] = {Activation::sigmoid, Activation::tanh};
    const Activation output_choices[] = {Activation::sigmoid, Activation::linear};

    double worst = 0.0;
    int models = 0;
    for (int rep = 0; rep < 7; ++rep) {
        for (const auto& sizes : architectures) {
            MlpShape shape;
            shape.layer_sizes = sizes;
            shape.hidden_activation = hidden_choices[rng.raw() % 2];
            shape.output_activation = output_choices[rng.raw() % 2];
            const MlpModel model = init_model(shape, InitSpec{rng.raw()});
            ++models;

            const std::size_t samples = 3 + rng.raw() % 4;
            DenseMatrix x(samples, shape.input_size());
            DenseMatrix y(samples, shape.output_size());
            for (std::size_t i = 0; i < samples; ++i) {
                for (std::size_t f = 0; f < shape.input_size(); ++f)
                    x(i, f) = rng.uniform(-2.0, 2.0);
                for (std::size_t k = 0; k < shape.output_size(); ++k)
                    y(i, k) = rng.uniform(0.0, 1.0);
            }

            const auto [r, j] = residual_jacobian(model, x, y);
            if (r.size() != j.rows()) return Verdict{false, false, "dimension bug"};
            const auto f = [&](const DenseVector& beta) {
                const DenseMatrix out = forward_batch(unflatten(shape, beta), x);
                std::vector<double> stacked;
                for (std::size_t i = 0; i < out.rows(); ++i)
                    for (std::size_t k = 0; k < out.cols(); ++k) stacked.push_back(out(i, k));
                return DenseVector::unchecked(std::move(stacked));
            };
            const DenseMatrix fd = oracle::fd_jacobian(f, flatten(model), 1e-6);

            for (std::size_t row = 0; row < j.rows(); ++row)
                for (std::size_t p = 0; p < j.cols(); ++p) {
                    const double a = j(row, p);
                    const double b = fd(row, p);
                    const double err =
                        std::fabs(a - b) / std::max({1.0, std::fabs(a), std::fabs(b)});
                    worst = std::max(worst, err);
                }
        }
    }

    const double elapsed = seconds_since(t0);
    Verdict v;
    v.passed = worst <= 1e-6 && elapsed < 10.0;
    v.detail = std::to_string(models) + " models, max scaled error " + fmt(worst) + ", " +
               fmt(elapsed) + " s";
    return v;
}

// ---- criterion 2: step solver vs full-pivot elimination ------------------

Verdict check_step_oracle() {
    const auto t0 = std::chrono::steady_clock::now();
    oracle::Rng rng(202);
    double worst = 0.0;
    for (int rep = 0; rep < 100; ++rep) {
        const std::size_t n = 1 + rng.raw() % 6;
        const std::size_t m = n + rng.raw() % 5;
        DenseMatrix j(m, n);
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t p = 0; p < n; ++p) j(i, p) = rng.signed_magnitude(0.3, 1.5);
        DenseVector r(m);
        for (std::size_t i = 0; i < m; ++i) r[i] = rng.uniform(-2.0, 2.0);
        const double lambda = std::pow(10.0, rng.uniform(-0.3, 0.7));

        for (DampingMode mode : {DampingMode::identity, DampingMode::diagonal}) {
            const DenseVector d = solve_lm_step(j, r, lambda, mode);
            const std::vector<double> e =
                oracle::lm_step_reference(j, r, lambda, mode == DampingMode::diagonal);
            double scale = 1.0;
            for (double val : e) scale = std::max(scale, std::fabs(val));
            for (std::size_t p = 0; p < n; ++p)
                worst = std::max(worst, std::fabs(d[p] - e[p]) / scale);
        }
    }

    const double elapsed = seconds_since(t0);
    Verdict v;
    v.passed = worst <= 1e-10 && elapsed < 5.0;
    v.detail = "100 problems, both modes, max relative error " + fmt(worst) + ", " +
               fmt(elapsed) + " s";
    return v;
}

// ---- criterion 3: linear problems collapse in one accepted step ----------

Verdict check_linear_exactness() {
    oracle::Rng rng(303);
    bool ok = true;
    double worst_ratio = 0.0;
    for (int rep = 0; rep < 5; ++rep) {
        DenseMatrix a(5, 5);
        for (std::size_t i = 0; i < 5; ++i)
            for (std::size_t j = 0; j < 5; ++j)
                a(i, j) = rng.uniform(-1.0, 1.0) + (i == j ? 3.0 : 0.0);
        DenseVector b(5);
        for (std::size_t i = 0; i < 5; ++i) b[i] = rng.uniform(-2.0, 2.0);
        const testprov::LinearResidualProvider provider(std::move(a), std::move(b));

        LmConfig cfg;
        cfg.lambda0 = 1e-12;
        cfg.lambda_min = 1e-12;
        cfg.mode = DampingMode::identity;

        const DenseVector beta0(5);
        const double s0 = sse(provider.residual(beta0));
        const LmResult res = lm_train(provider, beta0, cfg);
        keep(res.history, cfg);

        if (res.history.records.empty() || !res.history.records[0].accepted) {
            ok = false;
            continue;
        }
        const double ratio = res.history.records[0].sse_after / s0;
        worst_ratio = std::max(worst_ratio, ratio);
        if (!(ratio <= 1e-12)) ok = false;
    }

    Verdict v;
    v.passed = ok;
    v.detail = "5 random 5x5 systems, worst one-step S ratio " + fmt(worst_ratio);
    return v;
}

// ---- criterion 4: exponential curve fit recovers its parameters ----------

Verdict check_exponential_fit() {
    const testprov::ExpResidualProvider provider(2.5, -1.3, 20);
    bool ok = true;
    std::string detail;
    for (DampingMode mode : {DampingMode::identity, DampingMode::diagonal}) {
        LmConfig cfg;
        cfg.mode = mode;
        cfg.max_iterations = 100;
        const LmResult res = lm_train(provider, DenseVector{1.0, -0.5}, cfg);
        keep(res.history, cfg);

        const double ea = std::fabs(res.beta[0] - 2.5);
        const double eb = std::fabs(res.beta[1] + 1.3);
        if (!(ea <= 1e-6 && eb <= 1e-6)) ok = false;
        if (!detail.empty()) detail += "; ";
        detail += damping_mode_name(mode) + ": |da|=" + fmt(ea) + ", |db|=" + fmt(eb) + " in " +
                  std::to_string(res.history.records.size()) + " proposals";
    }

    Verdict v;
    v.passed = ok;
    v.detail = detail;
    return v;
}

// ---- criterion 5: XOR trainability across seeds ---------------------------

Verdict check_xor() {
    const auto t0 = std::chrono::steady_clock::now();
    MlpShape shape;
    shape.layer_sizes = {2, 2, 1};

    const DenseMatrix x(4, 2, {0.0, 0.0, 0.0, 1.0, 1.0, 0.0, 1.0, 1.0});
    const DenseMatrix y(4, 1, {0.0, 1.0, 1.0, 0.0});
    const MlpResidualProvider provider(shape, x, y);

    // identity damping: Marquardt scaling under-damps the flat directions of
    // the XOR plateau, so diagonal mode stalls there by design
    int solved = 0;
    for (std::uint64_t seed = 1; seed <= 10; ++seed) {
        LmConfig cfg;
        cfg.max_iterations = 200;
        cfg.mode = DampingMode::identity;
        cfg.lambda0 = 0.01;
        const MlpModel m0 = init_model(shape, InitSpec{seed});
        const LmResult res = lm_train(provider, flatten(m0), cfg);
        keep(res.history, cfg);
        const double s_final = sse(provider.residual(res.beta));
        if (s_final < 0.01) ++solved;
    }

    const double elapsed = seconds_since(t0);
    Verdict v;
    v.passed = solved >= 8 && elapsed < 30.0;
    v.detail = std::to_string(solved) +
               "/10 seeds reached S < 0.01 (identity damping, lambda0 0.01), " + fmt(elapsed) +
               " s";
    return v;
}

// ---- criterion 6: invariants over every collected history ----------------

Verdict check_history_invariants() {
    std::size_t records = 0;
    bool ok = true;
    for (const BoundedHistory& bh : g_histories) {
        double last_accepted = std::numeric_limits<double>::infinity();
        for (const IterationRecord& rec : bh.history.records) {
            ++records;
            if (rec.lambda < bh.lambda_min || rec.lambda > bh.lambda_max) ok = false;
            if (rec.accepted) {
                if (!(rec.sse_after < rec.sse_before)) ok = false;
                if (!(rec.sse_after < last_accepted)) ok = false;
                last_accepted = rec.sse_after;
            }
        }
    }

    Verdict v;
    v.passed = ok && !g_histories.empty();
    v.detail = std::to_string(g_histories.size()) + " histories, " + std::to_string(records) +
               " records checked";
    return v;
}

// ---- criterion 7: clinical-records pipeline accuracy ----------------------

std::string heart_csv_path() {
    if (const char* env = std::getenv("LMNET_HEART_CSV"); env && *env) return env;
    const fs::path bundled =
        fs::path(LMNET_REPO_DIR) / "data" / "heart_failure_clinical_records_dataset.csv";
    if (fs::exists(bundled)) return bundled.string();
    return {};
}

Verdict check_heart_pipeline() {
    const std::string csv = heart_csv_path();
    Verdict v;
    if (csv.empty()) {
        v.skipped = true;
        v.detail =
            "dataset not present; place the public heart-failure clinical-records CSV at "
            "data/heart_failure_clinical_records_dataset.csv or set LMNET_HEART_CSV";
        return v;
    }

    double sum = 0.0, best = 0.0, worst_time = 0.0;
    bool ok = true;
    int seeds = 0;
    for (std::uint64_t seed = 1; seed <= 5; ++seed) {
        RunConfig cfg;
        cfg.data_path = csv;
        cfg.seed = seed;
        const auto t0 = std::chrono::steady_clock::now();
        const TrainArtifacts art = run_training_pipeline(cfg);
        const double elapsed = seconds_since(t0);
        keep(art.history, cfg.lm);
        worst_time = std::max(worst_time, elapsed);
        if (elapsed >= 60.0) ok = false;
        if (!art.test_report) {
            ok = false;
            continue;
        }
        ++seeds;
        sum += art.test_report->accuracy;
        best = std::max(best, art.test_report->accuracy);
    }
    const double mean = seeds > 0 ? sum / seeds : 0.0;
    if (!(mean >= 0.78 && best >= 0.85)) ok = false;

    v.passed = ok;
    v.detail = "mean test accuracy " + fmt(mean) + ", best " + fmt(best) + ", slowest seed " +
               fmt(worst_time) + " s";
    return v;
}

// ---- criterion 8: byte-identical training reruns --------------------------

std::string write_synthetic_csv(const fs::path& dir) {
    const fs::path path = dir / "synthetic.csv";
    std::ofstream out(path);
    out << "x1,x2,x3,y\n";
    std::mt19937_64 gen(4096);
    auto u = [&] { return static_cast<double>(gen() >> 11) * 0x1.0p-53 - 0.5; };
    for (int i = 0; i < 30; ++i)
        out << format_double(-1.0 + u()) << ',' << format_double(-1.0 + u()) << ','
            << format_double(u()) << ",0\n";
    for (int i = 0; i < 30; ++i)
        out << format_double(1.0 + u()) << ',' << format_double(1.0 + u()) << ','
            << format_double(u()) << ",1\n";
    return path.string();
}

Verdict check_determinism(const fs::path& scratch) {
    const std::string data = write_synthetic_csv(scratch);

    RunConfig cfg;
    cfg.schema.feature_columns = {"x1", "x2", "x3"};
    cfg.schema.label_column = "y";
    cfg.hidden = {4};
    cfg.seed = 11;
    cfg.data_path = data;

    std::ostringstream sink_a, sink_b;
    cfg.out_dir = (scratch / "run_a").string();
    cmd_train(cfg, sink_a);
    cfg.out_dir = (scratch / "run_b").string();
    cmd_train(cfg, sink_b);

    // the training logs match except for the line naming the output directory
    const auto scrub = [](const std::string& log) {
        std::istringstream in(log);
        std::ostringstream kept;
        std::string line;
        while (std::getline(in, line))
            if (line.rfind("model written to ", 0) != 0) kept << line << '\n';
        return kept.str();
    };

    const char* names[] = {"model.txt",       "history.csv",       "sse_curve.csv",
                           "splits.csv",      "eval_train.txt",    "eval_val.txt",
                           "eval_test.txt",   "confusion_train.csv", "confusion_val.csv",
                           "confusion_test.csv"};
    bool ok = scrub(sink_a.str()) == scrub(sink_b.str());
    std::size_t files = 0;
    for (const char* name : names) {
        std::ifstream a(scratch / "run_a" / name, std::ios::binary);
        std::ifstream b(scratch / "run_b" / name, std::ios::binary);
        if (!a || !b) {
            ok = false;
            continue;
        }
        std::ostringstream abuf, bbuf;
        abuf << a.rdbuf();
        bbuf << b.rdbuf();
        if (abuf.str() != bbuf.str()) ok = false;
        ++files;
    }

    Verdict v;
    v.passed = ok && files == std::size(names);
    v.detail = std::to_string(files) + " artifacts compared byte-for-byte";
    return v;
}

void report_line(int index, const std::string& title, const Verdict& v) {
    const char* tag = v.skipped ? "SKIP" : (v.passed ? "PASS" : "FAIL");
    std::cout << "[" << tag << "] " << index << ". " << title;
    if (!v.detail.empty()) std::cout << " (" << v.detail << ")";
    std::cout << "\n";
}

}  // namespace

int main() {
    const fs::path scratch =
        fs::temp_directory_path() / ("lmnet_acceptance_" + std::to_string(::getpid()));
    fs::remove_all(scratch);
    fs::create_directories(scratch);

    struct Entry {
        std::string title;
        Verdict verdict;
    };
    std::vector<Entry> entries;
    entries.push_back({"residual Jacobian matches central finite differences", check_jacobian()});
    entries.push_back({"step solver agrees with full-pivot elimination", check_step_oracle()});
    entries.push_back({"linear problems collapse in one accepted step", check_linear_exactness()});
    entries.push_back({"exponential fit recovers (2.5, -1.3) in both modes",
                       check_exponential_fit()});
    entries.push_back({"XOR network trains across seeds", check_xor()});
    // criterion 7 runs before 6 so its histories join the invariant sweep
    const Verdict heart = check_heart_pipeline();
    entries.push_back({"accepted steps decrease S and lambda stays bounded",
                       check_history_invariants()});
    entries.push_back({"clinical-records pipeline reaches the accuracy floor", heart});
    entries.push_back({"training reruns are byte-identical", check_determinism(scratch)});

    // print in criterion order (6 and 7 were computed out of order above)
    report_line(1, entries[0].title, entries[0].verdict);
    report_line(2, entries[1].title, entries[1].verdict);
    report_line(3, entries[2].title, entries[2].verdict);
    report_line(4, entries[3].title, entries[3].verdict);
    report_line(5, entries[4].title, entries[4].verdict);
    report_line(6, entries[5].title, entries[5].verdict);
    report_line(7, entries[6].title, entries[6].verdict);
    report_line(8, entries[7].title, entries[7].verdict);

    int failures = 0;
    for (const Entry& e : entries)
        if (!e.verdict.skipped && !e.verdict.passed) ++failures;

    fs::remove_all(scratch);
    return failures;
}
