#pragma once

#include <Eigen/OrderingMethods>
#include <Eigen/SparseQR>
#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#ifdef DSEP_HAVE_SPQR
#include <Eigen/SPQRSupport>
#endif

#include "dsep/error.hpp"
#include "dsep/gauss_newton.hpp"

namespace dsep::detail {

/// Sparse QR of a tall matrix for least-squares solves. Backed by
/// SuiteSparseQR when available, Eigen's SparseQR otherwise.
class SparseLeastSquares {
public:
    /// Errors: RankDeficient when the factorisation fails or the numerical rank
    /// is below the column count.
    void factorize(const SparseMatrix& a) {
        qr_.compute(a);
        if (qr_.info() != Eigen::Success) throw Error(ErrorCode::RankDeficient, "sparse QR factorisation failed");
        if (static_cast<Eigen::Index>(qr_.rank()) < a.cols())
            throw Error(ErrorCode::RankDeficient, "numerical rank " + std::to_string(qr_.rank()) + " < " +
                                                      std::to_string(a.cols()) + " states");
    }

    Eigen::VectorXd solve(const Eigen::VectorXd& b) const {
        return const_cast<Backend&>(qr_).solve(b);
    }

    /// (max |R_ii| / min |R_ii|)^2, an estimate of cond(A'A).
    double condition() const {
        const auto r = qr_.matrixR();
        double lo = std::numeric_limits<double>::infinity();
        double hi = 0.0;
        for (Eigen::Index k = 0; k < std::min<Eigen::Index>(r.rows(), r.cols()); ++k) {
            const double v = std::abs(r.coeff(k, k));
            lo = std::min(lo, v);
            hi = std::max(hi, v);
        }
        if (lo == 0.0) return std::numeric_limits<double>::infinity();
        return (hi / lo) * (hi / lo);
    }

private:
#ifdef DSEP_HAVE_SPQR
    using Backend = Eigen::SPQR<SparseMatrix>;
#else
    using Backend = Eigen::SparseQR<SparseMatrix, Eigen::COLAMDOrdering<int>>;
#endif
    Backend qr_;
};

}  // namespace dsep::detail
