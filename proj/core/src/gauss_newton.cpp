#include "dsep/gauss_newton.hpp"

#include <cmath>
#include <limits>

#include "dsep/error.hpp"
#include "sparse_qr.hpp"

namespace dsep {

namespace {

using SparseQR = detail::SparseLeastSquares;

bool all_finite(const Eigen::VectorXd& v) { return v.allFinite(); }

bool all_finite(const SparseMatrix& m) {
    for (Eigen::Index k = 0; k < m.outerSize(); ++k)
        for (SparseMatrix::InnerIterator it(m, k); it; ++it)
            if (!std::isfinite(it.value())) return false;
    return true;
}

struct ScaledJacobian {
    SparseMatrix a;          // diag(w) H diag(1/d)
    Eigen::VectorXd d;       // column norms of diag(w) H
};

ScaledJacobian scale_jacobian(const SparseMatrix& h, const Eigen::VectorXd& w) {
    ScaledJacobian out;
    out.a = w.asDiagonal() * h;
    out.d.resize(out.a.cols());
    for (Eigen::Index k = 0; k < out.a.cols(); ++k) {
        const double n = out.a.col(k).norm();
        if (n == 0.0)
            throw Error(ErrorCode::RankDeficient, "Jacobian column " + std::to_string(k) + " is identically zero");
        out.d(k) = n;
    }
    out.a = out.a * out.d.cwiseInverse().asDiagonal();
    out.a.makeCompressed();
    return out;
}


}  // namespace

std::string_view to_string(StopReason r) noexcept {
    switch (r) {
        case StopReason::StepTolerance: return "step-tolerance";
        case StopReason::GradientTolerance: return "gradient-tolerance";
        case StopReason::FunctionTolerance: return "function-tolerance";
        case StopReason::MaxIterations: return "max-iterations";
        case StopReason::LineSearchFailed: return "line-search-failed";
    }
    return "?";
}

FitResult solve(const LeastSquaresProblem& problem, const Eigen::VectorXd& x0, const SolveOptions& opts) {
    if (x0.size() != problem.dim_x)
        throw Error(ErrorCode::InvalidArgument, "x0 has " + std::to_string(x0.size()) + " entries, expected " +
                                                    std::to_string(problem.dim_x));
    if (problem.dim_y < problem.dim_x) throw Error(ErrorCode::InvalidArgument, "dim_y must be >= dim_x");
    if (problem.weights.size() != problem.dim_y) throw Error(ErrorCode::InvalidArgument, "weights must have dim_y entries");
    if (!all_finite(x0)) throw Error(ErrorCode::NonFinite, "start point is not finite");

    const Eigen::VectorXd& w = problem.weights;
    const auto weighted_residual = [&](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return w.cwiseProduct(problem.residual(x));
    };

    constexpr double kExactFit = 1e-24;

    FitResult out;
    Eigen::VectorXd x = x0;
    Eigen::VectorXd r = weighted_residual(x);
    if (!all_finite(r)) throw Error(ErrorCode::NonFinite, "h(x0) is not finite");
    double j = r.squaredNorm();
    out.j_history.push_back(j);

    SparseQR qr;
    bool factored_at_x = false;

    for (int iter = 0; iter < opts.max_iter; ++iter) {
        const SparseMatrix h = problem.jacobian(x);
        if (!all_finite(h)) throw Error(ErrorCode::NonFinite, "Jacobian is not finite");
        const ScaledJacobian sj = scale_jacobian(h, w);

        const double rnorm = std::sqrt(j);
        if (rnorm == 0.0) {
            out.converged = true;
            out.reason = StopReason::GradientTolerance;
            qr.factorize(sj.a);
            factored_at_x = true;
            break;
        }
        const Eigen::VectorXd g = sj.a.transpose() * r;
        if (g.cwiseAbs().maxCoeff() / rnorm < opts.tol_grad) {
            out.converged = true;
            out.reason = StopReason::GradientTolerance;
            qr.factorize(sj.a);
            factored_at_x = true;
            break;
        }

        qr.factorize(sj.a);
        const Eigen::VectorXd u = qr.solve(r);
        const Eigen::VectorXd dx = u.cwiseQuotient(sj.d);
        const double rel_step = u.norm() / std::max(sj.d.cwiseProduct(x).norm(), std::numeric_limits<double>::min());

        double t = 1.0;
        Eigen::VectorXd x_try = x + dx;
        Eigen::VectorXd r_try = weighted_residual(x_try);
        double j_try = all_finite(r_try) ? r_try.squaredNorm() : std::numeric_limits<double>::infinity();
        if (opts.line_search && rel_step >= opts.tol_step) {
            for (int halving = 0; halving < 40 && !(j_try <= j); ++halving) {
                t *= 0.5;
                x_try = x + t * dx;
                r_try = weighted_residual(x_try);
                j_try = all_finite(r_try) ? r_try.squaredNorm() : std::numeric_limits<double>::infinity();
            }
        }
        if (!std::isfinite(j_try)) {
            out.reason = StopReason::LineSearchFailed;
            factored_at_x = true;
            break;
        }
        if (j_try > j && rel_step >= opts.tol_step) {
            out.reason = StopReason::LineSearchFailed;
            factored_at_x = true;
            break;
        }

        // reduction promised by the linear model for the step actually taken
        const double predicted = (2.0 * t - t * t) * (sj.a * u).squaredNorm() / j;
        const double actual = (j - j_try) / j;

        x = std::move(x_try);
        r = std::move(r_try);
        j = j_try;
        out.iters = iter + 1;
        out.j_history.push_back(j);
        factored_at_x = false;

        if (t * rel_step < opts.tol_step) {
            out.converged = true;
            out.reason = StopReason::StepTolerance;
            break;
        }
        // residual gone to round-off: the model reproduces the data exactly
        if (j <= kExactFit * out.j_history.front()) {
            out.converged = true;
            out.reason = StopReason::FunctionTolerance;
            break;
        }
        if (actual <= opts.tol_fun && predicted <= opts.tol_fun) {
            out.converged = true;
            out.reason = StopReason::FunctionTolerance;
            break;
        }
    }

    if (!factored_at_x) {
        const SparseMatrix h = problem.jacobian(x);
        if (!all_finite(h)) throw Error(ErrorCode::NonFinite, "Jacobian is not finite");
        qr.factorize(scale_jacobian(h, w).a);
    }
    out.condition_estimate = qr.condition();
    out.x_hat = std::move(x);
    out.j = j;
    out.j_normalized = j / static_cast<double>(problem.dim_y);
    return out;
}

double check_redundancy(Eigen::Index dim_y, Eigen::Index dim_x) {
    if (dim_x <= 0) throw Error(ErrorCode::InvalidArgument, "dim_x must be > 0");
    return static_cast<double>(dim_y) / static_cast<double>(dim_x);
}

}  // namespace dsep
