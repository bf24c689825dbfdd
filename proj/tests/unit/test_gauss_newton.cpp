#include <doctest.h>

#include <Eigen/QR>
#include <cmath>
#include <random>

#include "dsep/error.hpp"
#include "dsep/gauss_newton.hpp"

using namespace dsep;

namespace {

LeastSquaresProblem linear_problem(const Eigen::MatrixXd& a, const Eigen::VectorXd& y) {
    LeastSquaresProblem p;
    p.dim_x = a.cols();
    p.dim_y = a.rows();
    p.residual = [a, y](const Eigen::VectorXd& x) -> Eigen::VectorXd { return y - a * x; };
    p.jacobian = [a](const Eigen::VectorXd&) -> SparseMatrix { return a.sparseView(); };
    p.weights = Eigen::VectorXd::Ones(a.rows());
    return p;
}

// y_k = a exp(-b t_k)
LeastSquaresProblem decay_problem(const Eigen::VectorXd& t, const Eigen::VectorXd& y) {
    LeastSquaresProblem p;
    p.dim_x = 2;
    p.dim_y = t.size();
    p.residual = [t, y](const Eigen::VectorXd& x) -> Eigen::VectorXd {
        return y - (x(0) * (-x(1) * t.array()).exp()).matrix();
    };
    p.jacobian = [t](const Eigen::VectorXd& x) -> SparseMatrix {
        Eigen::MatrixXd j(t.size(), 2);
        j.col(0) = (-x(1) * t.array()).exp().matrix();
        j.col(1) = (-x(0) * t.array() * (-x(1) * t.array()).exp()).matrix();
        return j.sparseView();
    };
    p.weights = Eigen::VectorXd::Ones(t.size());
    return p;
}

}  // namespace

TEST_SUITE("gn-solver") {
    TEST_CASE("square linear problem solves in one iteration") {
        Eigen::MatrixXd a(3, 3);
        a << 4, 1, 0, 1, 3, 1, 0, 1, 2;
        const Eigen::VectorXd truth = Eigen::Vector3d(1.0, -2.0, 0.5);
        const FitResult r = solve(linear_problem(a, a * truth), Eigen::VectorXd::Zero(3));
        CHECK(r.converged);
        CHECK(r.iters == 1);
        CHECK(r.j <= 1e-20);
        CHECK((r.x_hat - truth).norm() < 1e-12);
    }

    TEST_CASE("overdetermined linear problem reaches the least-squares solution") {
        std::mt19937_64 rng(3);
        std::normal_distribution<double> n(0.0, 1.0);
        Eigen::MatrixXd a(30, 4);
        Eigen::VectorXd y(30);
        for (Eigen::Index i = 0; i < a.size(); ++i) a.data()[i] = n(rng);
        for (Eigen::Index i = 0; i < y.size(); ++i) y(i) = n(rng);
        const FitResult r = solve(linear_problem(a, y), Eigen::VectorXd::Zero(4));
        const Eigen::VectorXd oracle = a.colPivHouseholderQr().solve(y);
        CHECK((r.x_hat - oracle).norm() < 1e-10);
        CHECK(r.j == doctest::Approx((y - a * oracle).squaredNorm()).epsilon(1e-10));
        CHECK(r.j_normalized == doctest::Approx(r.j / 30.0));
        CHECK(r.j >= 0.0);
    }

    TEST_CASE("scalar square root y - x^2") {
        LeastSquaresProblem p;
        p.dim_x = 1;
        p.dim_y = 1;
        p.residual = [](const Eigen::VectorXd& x) { return Eigen::VectorXd::Constant(1, 4.0 - x(0) * x(0)); };
        p.jacobian = [](const Eigen::VectorXd& x) -> SparseMatrix {
            return Eigen::MatrixXd::Constant(1, 1, 2.0 * x(0)).sparseView();
        };
        p.weights = Eigen::VectorXd::Ones(1);
        const FitResult r = solve(p, Eigen::VectorXd::Constant(1, 1.0));
        CHECK(r.converged);
        CHECK(std::abs(r.x_hat(0) - 2.0) < 1e-10);
        CHECK(r.iters <= 8);
        CHECK(r.j_history.size() == static_cast<std::size_t>(r.iters) + 1);
    }

    TEST_CASE("exponential decay fit from a rough start") {
        Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(40, 0.0, 4.0);
        const Eigen::VectorXd y = (3.0 * (-1.3 * t.array()).exp()).matrix();
        const FitResult r = solve(decay_problem(t, y), Eigen::Vector2d(1.0, 0.5));
        CHECK(r.converged);
        CHECK(r.x_hat(0) == doctest::Approx(3.0).epsilon(1e-8));
        CHECK(r.x_hat(1) == doctest::Approx(1.3).epsilon(1e-8));
        for (std::size_t k = 1; k < r.j_history.size(); ++k) CHECK(r.j_history[k] <= r.j_history[k - 1]);
    }

    TEST_CASE("uniform weight scaling leaves the iterates unchanged") {
        Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(25, 0.0, 3.0);
        Eigen::VectorXd y = (2.0 * (-0.7 * t.array()).exp()).matrix();
        for (Eigen::Index k = 0; k < y.size(); ++k) y(k) += 0.01 * std::sin(7.0 * static_cast<double>(k));
        LeastSquaresProblem p = decay_problem(t, y);
        SolveOptions opts;
        opts.max_iter = 4;
        opts.tol_step = 0.0;
        opts.tol_grad = 0.0;
        opts.tol_fun = 0.0;
        const FitResult a = solve(p, Eigen::Vector2d(1.0, 0.3), opts);
        p.weights *= 7.5;
        const FitResult b = solve(p, Eigen::Vector2d(1.0, 0.3), opts);
        CHECK((a.x_hat - b.x_hat).norm() <= 1e-12 * a.x_hat.norm());
        CHECK(b.j == doctest::Approx(7.5 * 7.5 * a.j).epsilon(1e-10));
        CHECK(a.iters == b.iters);
    }

    TEST_CASE("rank-deficient Jacobian is reported") {
        Eigen::MatrixXd a(4, 2);
        a << 1, 2, 2, 4, 3, 6, 4, 8;
        try {
            solve(linear_problem(a, Eigen::VectorXd::Ones(4)), Eigen::VectorXd::Zero(2));
            FAIL("expected RankDeficient");
        } catch (const Error& e) {
            CHECK(e.code() == ErrorCode::RankDeficient);
        }
    }

    TEST_CASE("non-finite model output is reported") {
        LeastSquaresProblem p;
        p.dim_x = 1;
        p.dim_y = 2;
        p.residual = [](const Eigen::VectorXd& x) { return Eigen::Vector2d(std::log(x(0)), 1.0 - x(0)); };
        p.jacobian = [](const Eigen::VectorXd& x) -> SparseMatrix {
            return Eigen::MatrixXd(Eigen::Vector2d(-1.0 / x(0), -1.0)).sparseView();
        };
        p.weights = Eigen::VectorXd::Ones(2);
        CHECK_THROWS_AS(solve(p, Eigen::VectorXd::Constant(1, -1.0)), Error);
    }

    TEST_CASE("bad start size") {
        Eigen::MatrixXd a = Eigen::MatrixXd::Identity(2, 2);
        CHECK_THROWS_AS(solve(linear_problem(a, Eigen::VectorXd::Ones(2)), Eigen::VectorXd::Zero(3)), Error);
    }

    TEST_CASE("max iterations returns the best point unconverged") {
        Eigen::VectorXd t = Eigen::VectorXd::LinSpaced(40, 0.0, 4.0);
        const Eigen::VectorXd y = (3.0 * (-1.3 * t.array()).exp()).matrix();
        SolveOptions opts;
        opts.max_iter = 1;
        const FitResult r = solve(decay_problem(t, y), Eigen::Vector2d(1.0, 0.5), opts);
        CHECK_FALSE(r.converged);
        CHECK(r.reason == StopReason::MaxIterations);
        CHECK(r.j <= r.j_history.front());
    }

    TEST_CASE("redundancy ratio") {
        CHECK(check_redundancy(4, 4) == 1.0);
        CHECK(check_redundancy(4, 4) < kRedundancyTarget);
        CHECK(check_redundancy(298, 202) == doctest::Approx(1.475).epsilon(1e-3));
        CHECK(check_redundancy(16, 10) == doctest::Approx(1.6));
        CHECK_FALSE(check_redundancy(16, 10) < kRedundancyTarget);
        CHECK_THROWS_AS(check_redundancy(4, 0), Error);
    }
}
