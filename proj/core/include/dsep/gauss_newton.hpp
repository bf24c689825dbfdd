#pragma once

#include <Eigen/Core>
#include <Eigen/SparseCore>
#include <functional>
#include <string_view>
#include <vector>

namespace dsep {

using SparseMatrix = Eigen::SparseMatrix<double>;

/// Weighted nonlinear least squares: minimise || w .* (y - h(x)) ||^2.
///
/// `residual` returns the unweighted y - h(x); `jacobian` returns dh/dx
/// (dim_y x dim_x). Weights are per-row scale factors applied by the solver.
struct LeastSquaresProblem {
    Eigen::Index dim_x = 0;
    Eigen::Index dim_y = 0;
    std::function<Eigen::VectorXd(const Eigen::VectorXd&)> residual;
    std::function<SparseMatrix(const Eigen::VectorXd&)> jacobian;
    Eigen::VectorXd weights;
};

struct SolveOptions {
    /// Stop when ||D dx|| <= tol_step * ||D x||, D = column norms of the
    /// weighted Jacobian.
    double tol_step = 1e-10;
    /// Stop when the largest cosine between the weighted residual and a
    /// Jacobian column drops below tol_grad.
    double tol_grad = 1e-10;
    /// Stop when both the actual and the predicted relative reduction of the
    /// cost over an accepted step are at most tol_fun.
    double tol_fun = 1e-4;
    int max_iter = 50;
    /// Step halving, used only when a full step would increase the cost.
    bool line_search = true;
};

enum class StopReason { StepTolerance, GradientTolerance, FunctionTolerance, MaxIterations, LineSearchFailed };

std::string_view to_string(StopReason r) noexcept;

struct FitResult {
    Eigen::VectorXd x_hat;
    double j = 0.0;             ///< weighted residual sum of squares
    double j_normalized = 0.0;  ///< j / dim_y
    int iters = 0;
    bool converged = false;
    StopReason reason = StopReason::MaxIterations;
    /// Estimate of cond(H'H) for the column-scaled weighted Jacobian at x_hat.
    double condition_estimate = 0.0;
    /// j at the start point and after every accepted step.
    std::vector<double> j_history;
};

/// Gauss-Newton iteration x <- x + dx, where dx solves the weighted linear
/// least-squares problem H dx ~ y - h(x) through a sparse QR factorisation of
/// the column-scaled Jacobian (no normal equations).
///
/// Errors: InvalidArgument (x0 size / problem shape), RankDeficient (numerical
/// rank of H below dim_x at some iterate), NonFinite (h or H not finite at an
/// accepted point).
FitResult solve(const LeastSquaresProblem& problem, const Eigen::VectorXd& x0, const SolveOptions& opts = {});

/// Measurements per free parameter. Models below kRedundancyTarget carry a
/// warning in the catalog.
double check_redundancy(Eigen::Index dim_y, Eigen::Index dim_x);

inline constexpr double kRedundancyTarget = 1.6;

}  // namespace dsep
