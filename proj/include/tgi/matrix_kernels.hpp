#pragma once

// Matrix-level decompositions and generalized inverses backing the tensor layer.
//
// Rank decisions use one policy everywhere: singular values above
// max(m, n) * eps * sigma_max count, unless the caller passes an explicit
// relative threshold (then sigma_i > rel * sigma_max counts).

#include <Eigen/Core>
#include <Eigen/SVD>

#include <algorithm>
#include <limits>
#include <optional>
#include <string>

#include "tgi/errors.hpp"
#include "tgi/tensor.hpp"

namespace tgi {

template <typename Scalar>
using RealVector = Eigen::Matrix<RealOf<Scalar>, Eigen::Dynamic, 1>;

/// Thin SVD: m = u * diag(singular_values) * v^*.
template <typename Scalar>
struct SvdFactors {
    Matrix<Scalar> u;
    RealVector<Scalar> singular_values;
    Matrix<Scalar> v;

    Matrix<Scalar> reconstruct() const { return u * singular_values.asDiagonal() * v.adjoint(); }
};

template <typename Real>
struct RankInfo {
    Index rank = 0;
    Real tolerance_used = 0;
    Real sigma_max = 0;
};

/// Matrices up to this dimension use one-sided Jacobi; larger ones divide and conquer.
inline constexpr Index kJacobiSvdCutoff = 96;

template <typename Derived>
SvdFactors<typename Derived::Scalar> svd(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    using Mat = Matrix<Scalar>;
    if (!m.allFinite()) throw ConvergenceFailure("SVD input contains non-finite entries");
    SvdFactors<Scalar> f;
    if (std::max(m.rows(), m.cols()) <= kJacobiSvdCutoff) {
        Eigen::JacobiSVD<Mat> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (solver.info() != Eigen::Success) throw ConvergenceFailure("Jacobi SVD did not converge");
        f.u = solver.matrixU();
        f.singular_values = solver.singularValues();
        f.v = solver.matrixV();
    } else {
        Eigen::BDCSVD<Mat> solver(m, Eigen::ComputeThinU | Eigen::ComputeThinV);
        if (solver.info() != Eigen::Success) throw ConvergenceFailure("divide-and-conquer SVD did not converge");
        f.u = solver.matrixU();
        f.singular_values = solver.singularValues();
        f.v = solver.matrixV();
    }
    if (!f.singular_values.allFinite()) throw ConvergenceFailure("SVD produced non-finite singular values");
    return f;
}

namespace detail {

template <typename Real>
Real rank_threshold(Index rows, Index cols, Real sigma_max, std::optional<Real> relative) {
    if (relative) return *relative * sigma_max;
    return static_cast<Real>(std::max(rows, cols)) * std::numeric_limits<Real>::epsilon() * sigma_max;
}

template <typename Scalar>
RankInfo<RealOf<Scalar>> rank_from_singular_values(const RealVector<Scalar>& s, Index rows, Index cols,
                                                   std::optional<RealOf<Scalar>> relative) {
    RankInfo<RealOf<Scalar>> info;
    info.sigma_max = s.size() > 0 ? s(0) : 0;
    info.tolerance_used = rank_threshold(rows, cols, info.sigma_max, relative);
    if (info.sigma_max == 0) return info;
    info.rank = (s.array() > info.tolerance_used).count();
    return info;
}

}  // namespace detail

template <typename Derived>
RankInfo<typename Derived::RealScalar> numerical_rank(const Eigen::MatrixBase<Derived>& m,
                                                      std::optional<typename Derived::RealScalar> relative = {}) {
    using Scalar = typename Derived::Scalar;
    if (m.size() == 0) return {};
    if (!m.allFinite()) throw ConvergenceFailure("rank input contains non-finite entries");
    RealVector<Scalar> s;
    if (std::max(m.rows(), m.cols()) <= kJacobiSvdCutoff) {
        s = Eigen::JacobiSVD<Matrix<Scalar>>(m).singularValues();
    } else {
        s = Eigen::BDCSVD<Matrix<Scalar>>(m).singularValues();
    }
    return detail::rank_from_singular_values<Scalar>(s, m.rows(), m.cols(), relative);
}

/// Moore-Penrose inverse from the truncated SVD.
template <typename Derived>
Matrix<typename Derived::Scalar> pinv(const Eigen::MatrixBase<Derived>& m,
                                      std::optional<typename Derived::RealScalar> relative = {}) {
    using Scalar = typename Derived::Scalar;
    if (m.size() == 0 || m.isZero(0)) return Matrix<Scalar>::Zero(m.cols(), m.rows());
    const auto f = svd(m);
    const auto r = detail::rank_from_singular_values<Scalar>(f.singular_values, m.rows(), m.cols(), relative).rank;
    RealVector<Scalar> inv = f.singular_values.head(r).cwiseInverse();
    return f.v.leftCols(r) * inv.asDiagonal() * f.u.leftCols(r).adjoint();
}

template <typename Derived>
Matrix<typename Derived::Scalar> matrix_power(const Eigen::MatrixBase<Derived>& m, int k) {
    using Scalar = typename Derived::Scalar;
    if (m.rows() != m.cols()) throw NotSquare("matrix power needs a square matrix");
    if (k < 0) throw PreconditionViolated("matrix power exponent must be nonnegative");
    Matrix<Scalar> out = Matrix<Scalar>::Identity(m.rows(), m.cols());
    for (int i = 0; i < k; ++i) out = (m * out).eval();
    return out;
}

/// Smallest k >= 0 with rank(M^k) == rank(M^{k+1}); capped at the dimension n.
template <typename Derived>
int index_of(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    if (m.rows() != m.cols()) {
        throw NotSquare("index needs a square matrix, got " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()));
    }
    const Index n = m.rows();
    Matrix<Scalar> power = m;
    Index prev_rank = n;
    for (Index k = 0; k < n; ++k) {
        const Index r = numerical_rank(power).rank;
        if (r == prev_rank) return static_cast<int>(k);
        prev_rank = r;
        power = (m * power).eval();
    }
    return static_cast<int>(n);
}

/// Drazin inverse M^k (M^{2k+1})^+ M^k with k = ind(M).
template <typename Derived>
Matrix<typename Derived::Scalar> drazin(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    const int k = index_of(m);
    const Matrix<Scalar> mk = matrix_power(m, k);
    const Matrix<Scalar> high = matrix_power(m, 2 * k + 1);
    return mk * pinv(high) * mk;
}

/// Core-EP inverse M^D M^k (M^k)^+ with k = ind(M).
template <typename Derived>
Matrix<typename Derived::Scalar> core_ep(const Eigen::MatrixBase<Derived>& m) {
    using Scalar = typename Derived::Scalar;
    const int k = index_of(m);
    const Matrix<Scalar> mk = matrix_power(m, k);
    return drazin(m) * mk * pinv(mk);
}

}  // namespace tgi
