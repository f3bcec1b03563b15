#pragma once

#include <cstddef>
#include <functional>
#include <iosfwd>
#include <utility>
#include <vector>

#include "lmnet/linalg.hpp"

namespace lmnet {

/// Damping matrix D in (lambda D + J^T J) delta = J^T r: the identity, or
/// diag(J^T J) so damping scales per parameter with curvature.
enum class DampingMode { identity, diagonal };

std::string damping_mode_name(DampingMode mode);
DampingMode damping_mode_from_name(const std::string& name);

struct LmConfig {
    double lambda0 = 1e-3;
    double lambda_increase = 10.0;  // applied on rejection
    double lambda_decrease = 10.0;  // applied as division on acceptance
    double lambda_max = 1e10;
    double lambda_min = 1e-12;
    DampingMode mode = DampingMode::diagonal;
    std::size_t max_iterations = 200;
    double gradient_tol = 1e-8;  // on ||J^T r||_inf
    double step_tol = 1e-10;     // on ||delta||_2 / (1 + ||beta||_2)
    double sse_tol = 0.0;        // absolute S target

    /// Throws ConfigError when bounds/factors/tolerances are inconsistent.
    void validate() const;
};

enum class TerminationReason {
    max_iterations,
    gradient_converged,
    step_converged,
    sse_reached,
    lambda_overflow,
};

std::string termination_reason_name(TerminationReason reason);

/// One row per proposal, accepted or not. sse_after is +inf when the damped
/// system could not be factorized (the proposal never produced a trial point).
struct IterationRecord {
    std::size_t iteration = 0;
    double sse_before = 0.0;
    double sse_after = 0.0;
    double lambda = 0.0;
    bool accepted = false;
    double grad_inf_norm = 0.0;
};

struct TrainHistory {
    std::vector<IterationRecord> records;
    TerminationReason reason = TerminationReason::max_iterations;
};

/// Supplies r(beta) = y - f(beta) and J(beta) = df/dbeta with fixed
/// dimensions across calls.
class ResidualProvider {
  public:
    virtual ~ResidualProvider() = default;
    virtual std::size_t residual_size() const = 0;
    virtual std::size_t parameter_count() const = 0;
    virtual DenseVector residual(const DenseVector& beta) const = 0;
    virtual std::pair<DenseVector, DenseMatrix> residual_jacobian(const DenseVector& beta) const = 0;
};

/// The objective S(beta) became NaN/Inf at the current point. Everything
/// recorded up to that moment rides along.
struct NonFiniteObjectiveError : Error {
    explicit NonFiniteObjectiveError(TrainHistory h)
        : Error("objective is not finite"), history(std::move(h)) {}
    TrainHistory history;
};

/// S(beta) = sum of squared residuals.
double sse(const DenseVector& r);

/// Solves (lambda D + J^T J) delta = J^T r. In diagonal mode a zero diagonal
/// element of J^T J contributes lambda * 1 instead, keeping dead parameters
/// solvable. Propagates IndefiniteSystemError from the factorization.
DenseVector solve_lm_step(const DenseMatrix& j, const DenseVector& r, double lambda,
                          DampingMode mode);

/// Accepted: max(lambda / lambda_decrease, lambda_min).
/// Rejected: min(lambda * lambda_increase, lambda_max).
double damping_update(bool accepted, double lambda, const LmConfig& cfg);

struct LmResult {
    DenseVector beta;
    TrainHistory history;
};

/// Invoked after every accepted step with the proposal index and new beta.
using AcceptObserver = std::function<void(std::size_t iteration, const DenseVector& beta)>;

LmResult lm_train(const ResidualProvider& provider, const DenseVector& beta0, const LmConfig& cfg,
                  const AcceptObserver& on_accept = {});

/// Accepted proposals only, re-indexed 0..n-1; S values are non-increasing.
std::vector<std::pair<std::size_t, double>> predict_sse_curve(const TrainHistory& history);

/// CSV: iteration,sse_before,sse_after,lambda,accepted,grad_inf_norm
void write_history_csv(const TrainHistory& history, std::ostream& out);

}  // namespace lmnet
