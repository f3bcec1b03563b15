#include "lmnet/lm.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <ostream>
#include <stdexcept>

#include "lmnet/textio.hpp"

namespace lmnet {

std::string damping_mode_name(DampingMode mode) {
    return mode == DampingMode::identity ? "identity" : "diagonal";
}

DampingMode damping_mode_from_name(const std::string& name) {
    if (name == "identity") return DampingMode::identity;
    if (name == "diagonal") return DampingMode::diagonal;
    throw ConfigError("unknown damping mode: " + name + " (expected identity or diagonal)");
}

void LmConfig::validate() const {
    if (!(lambda0 > 0.0)) throw ConfigError("lambda0 must be positive");
    if (!(lambda_min >= 0.0)) throw ConfigError("lambda_min must be non-negative");
    if (!(lambda_max > 0.0)) throw ConfigError("lambda_max must be positive");
    if (!(lambda_min <= lambda0 && lambda0 <= lambda_max))
        throw ConfigError("lambda0 must lie in [lambda_min, lambda_max]");
    if (!(lambda_increase > 1.0)) throw ConfigError("lambda_increase must be > 1");
    if (!(lambda_decrease > 1.0)) throw ConfigError("lambda_decrease must be > 1");
    if (!(gradient_tol >= 0.0)) throw ConfigError("gradient_tol must be >= 0");
    if (!(step_tol >= 0.0)) throw ConfigError("step_tol must be >= 0");
    if (!(sse_tol >= 0.0)) throw ConfigError("sse_tol must be >= 0");
}

std::string termination_reason_name(TerminationReason reason) {
    switch (reason) {
        case TerminationReason::max_iterations: return "max_iterations";
        case TerminationReason::gradient_converged: return "gradient_converged";
        case TerminationReason::step_converged: return "step_converged";
        case TerminationReason::sse_reached: return "sse_reached";
        case TerminationReason::lambda_overflow: return "lambda_overflow";
    }
    return "unknown";
}

double sse(const DenseVector& r) {
    double s = 0.0;
    for (std::size_t i = 0; i < r.size(); ++i) s += r[i] * r[i];
    return s;
}

DenseVector solve_lm_step(const DenseMatrix& j, const DenseVector& r, double lambda,
                          DampingMode mode) {
    if (lambda < 0.0) throw std::invalid_argument("solve_lm_step: lambda must be >= 0");
    DenseMatrix a = gram(j);
    const DenseVector rhs = mul_transpose_vec(j, r);
    for (std::size_t i = 0; i < a.rows(); ++i) {
        if (mode == DampingMode::identity) {
            a(i, i) += lambda;
        } else {
            const double d = a(i, i) == 0.0 ? 1.0 : a(i, i);
            a(i, i) += lambda * d;
        }
    }
    return solve_spd(a, rhs);
}

double damping_update(bool accepted, double lambda, const LmConfig& cfg) {
    const double next = accepted ? lambda / cfg.lambda_decrease : lambda * cfg.lambda_increase;
    return std::clamp(next, cfg.lambda_min, cfg.lambda_max);
}

LmResult lm_train(const ResidualProvider& provider, const DenseVector& beta0, const LmConfig& cfg,
                  const AcceptObserver& on_accept) {
    cfg.validate();
    if (beta0.size() != provider.parameter_count())
        throw std::invalid_argument("lm_train: beta0 length does not match provider");

    TrainHistory history;
    DenseVector beta = beta0;
    double lambda = cfg.lambda0;

    DenseVector r;
    DenseMatrix jac;
    double s = 0.0;
    double grad_norm = 0.0;

    auto evaluate_at = [&](const DenseVector& point) {
        auto rj = provider.residual_jacobian(point);
        r = std::move(rj.first);
        jac = std::move(rj.second);
        if (r.size() != provider.residual_size() || jac.rows() != r.size() ||
            jac.cols() != point.size())
            throw std::invalid_argument("lm_train: provider returned inconsistent dimensions");
        s = sse(r);
        if (!std::isfinite(s)) throw NonFiniteObjectiveError(history);
        grad_norm = mul_transpose_vec(jac, r).norm_inf();
    };

    auto finish = [&](TerminationReason reason) {
        history.reason = reason;
        return LmResult{std::move(beta), std::move(history)};
    };

    evaluate_at(beta);
    if (grad_norm <= cfg.gradient_tol) return finish(TerminationReason::gradient_converged);
    if (s <= cfg.sse_tol) return finish(TerminationReason::sse_reached);

    std::size_t iter = 0;
    while (true) {
        if (iter >= cfg.max_iterations) return finish(TerminationReason::max_iterations);

        bool solved = false;
        DenseVector delta;
        if (jac.all_finite()) {
            try {
                delta = solve_lm_step(jac, r, lambda, cfg.mode);
                solved = true;
            } catch (const IndefiniteSystemError&) {
            }
        }

        if (!solved) {
            history.records.push_back(
                {iter, s, std::numeric_limits<double>::infinity(), lambda, false, grad_norm});
            ++iter;
            const double lambda_used = lambda;
            lambda = damping_update(false, lambda, cfg);
            if (lambda_used >= cfg.lambda_max) return finish(TerminationReason::lambda_overflow);
            continue;
        }

        DenseVector trial(beta.size());
        for (std::size_t i = 0; i < beta.size(); ++i) trial[i] = beta[i] + delta[i];
        const double s_trial = sse(provider.residual(trial));
        const bool accepted = s_trial < s;  // NaN/Inf trials fail this and get rejected
        history.records.push_back({iter, s, s_trial, lambda, accepted, grad_norm});
        ++iter;

        if (accepted) {
            const double step_ratio = delta.norm2() / (1.0 + beta.norm2());
            beta = std::move(trial);
            lambda = damping_update(true, lambda, cfg);
            if (on_accept) on_accept(iter - 1, beta);
            if (s_trial <= cfg.sse_tol) return finish(TerminationReason::sse_reached);
            if (step_ratio <= cfg.step_tol) return finish(TerminationReason::step_converged);
            evaluate_at(beta);
            if (grad_norm <= cfg.gradient_tol)
                return finish(TerminationReason::gradient_converged);
        } else {
            const double lambda_used = lambda;
            lambda = damping_update(false, lambda, cfg);
            if (lambda_used >= cfg.lambda_max) return finish(TerminationReason::lambda_overflow);
        }
    }
}

std::vector<std::pair<std::size_t, double>> predict_sse_curve(const TrainHistory& history) {
    std::vector<std::pair<std::size_t, double>> curve;
    for (const IterationRecord& rec : history.records)
        if (rec.accepted) curve.emplace_back(curve.size(), rec.sse_after);
    return curve;
}

void write_history_csv(const TrainHistory& history, std::ostream& out) {
    out << "iteration,sse_before,sse_after,lambda,accepted,grad_inf_norm\n";
    for (const IterationRecord& rec : history.records) {
        out << rec.iteration << ',' << format_double(rec.sse_before) << ','
            << format_double(rec.sse_after) << ',' << format_double(rec.lambda) << ','
            << (rec.accepted ? 1 : 0) << ',' << format_double(rec.grad_inf_norm) << '\n';
    }
}

}  // namespace lmnet
