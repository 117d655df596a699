#pragma once

// Executable characterizations: subspace inclusion predicates, the unique
// three-equation systems of the composite inverses, equality conditions
// between composites and outer inverses with prescribed range and null space.

#include <Eigen/QR>

#include <array>
#include <optional>
#include <string>
#include <string_view>

#include "tgi/errors.hpp"
#include "tgi/ginv.hpp"
#include "tgi/tensor.hpp"

namespace tgi {

/// Thresholds shared by every subspace predicate.
struct SubspaceTolerance {
    /// Singular values of the unit-normalized operands below rank * sigma_max are treated as zero.
    double rank = 1e-9;
    /// Relative residual accepted by the projector test of null_contains.
    double residual = 1e-8;
};

inline constexpr double kDefaultEqualityTol = 1e-8;

/// R(Q) subset of R(P), decided by rank([P | Q]) == rank(P) on unit-normalized operands.
template <typename Scalar>
bool range_contains(const Tensor<Scalar>& p, const Tensor<Scalar>& q, SubspaceTolerance tol = {}) {
    using Real = RealOf<Scalar>;
    if (p.shape().row_modes() != q.shape().row_modes()) {
        throw ShapeMismatch("range inclusion needs shared row modes: " + p.shape().to_string() + " vs " +
                            q.shape().to_string());
    }
    const Real np = frobenius_norm(p);
    const Real nq = frobenius_norm(q);
    if (nq == 0) return true;
    if (np == 0) return false;
    const Matrix<Scalar> ph = p.storage() / np;
    Matrix<Scalar> stacked(ph.rows(), ph.cols() + q.storage().cols());
    stacked << ph, q.storage() / nq;
    return numerical_rank(stacked, Real(tol.rank)).rank == numerical_rank(ph, Real(tol.rank)).rank;
}

/// N(A) subset of N(B), tested by ||B (I - A^+ A)||_F <= residual * ||B||_F.
template <typename Scalar>
bool null_contains(const Tensor<Scalar>& a, const Tensor<Scalar>& b, SubspaceTolerance tol = {}) {
    using Real = RealOf<Scalar>;
    if (a.shape().col_modes() != b.shape().col_modes()) {
        throw ShapeMismatch("null-space inclusion needs shared column modes: " + a.shape().to_string() + " vs " +
                            b.shape().to_string());
    }
    const Real nb = frobenius_norm(b);
    if (nb == 0) return true;
    const Real na = frobenius_norm(a);
    if (na == 0) return false;
    const Matrix<Scalar> am = a.storage() / na;
    const Matrix<Scalar> proj = pinv(am, std::optional<Real>(tol.rank)) * am;
    const Matrix<Scalar> bm = b.storage() / nb;
    const Matrix<Scalar> leak = bm - bm * proj;
    return leak.norm() <= tol.residual;
}

template <typename Scalar>
bool same_range(const Tensor<Scalar>& a, const Tensor<Scalar>& b, SubspaceTolerance tol = {}) {
    return range_contains(a, b, tol) && range_contains(b, a, tol);
}

template <typename Scalar>
bool same_null_space(const Tensor<Scalar>& a, const Tensor<Scalar>& b, SubspaceTolerance tol = {}) {
    return null_contains(a, b, tol) && null_contains(b, a, tol);
}

// ---------------------------------------------------------------------------
// Three-equation systems  Z*D*Z = Z,  D*Z = left,  Z*D = right.

enum class SystemKind { YDX, XDY, CMP, DMP, MPD, MPCEP, CEPMP };

inline std::string_view to_string(SystemKind s) {
    switch (s) {
        case SystemKind::YDX: return "ydx";
        case SystemKind::XDY: return "xdy";
        case SystemKind::CMP: return "cmp";
        case SystemKind::DMP: return "dmp";
        case SystemKind::MPD: return "mpd";
        case SystemKind::MPCEP: return "mpcep";
        case SystemKind::CEPMP: return "cepmp";
    }
    return "?";
}

inline SystemKind parse_system_kind(std::string_view s) {
    for (auto k : {SystemKind::YDX, SystemKind::XDY, SystemKind::CMP, SystemKind::DMP, SystemKind::MPD,
                   SystemKind::MPCEP, SystemKind::CEPMP}) {
        if (s == to_string(k)) return k;
    }
    throw ParseError("unknown system '" + std::string(s) + "'");
}

inline constexpr std::array<SystemKind, 5> kCompositeSystems = {SystemKind::CMP, SystemKind::DMP, SystemKind::MPD,
                                                               SystemKind::MPCEP, SystemKind::CEPMP};

inline InverseKind composite_of(SystemKind s) {
    switch (s) {
        case SystemKind::CMP: return InverseKind::CMP;
        case SystemKind::DMP: return InverseKind::DMP;
        case SystemKind::MPD: return InverseKind::MPD;
        case SystemKind::MPCEP: return InverseKind::MPCEP;
        case SystemKind::CEPMP: return InverseKind::CEPMP;
        default: throw ModeMismatch("system '" + std::string(to_string(s)) + "' has no composite inverse");
    }
}

/// Right-hand sides of a characterizing system together with its closed-form solution.
template <typename Scalar>
struct CharacterizingSystem {
    SystemKind kind;
    Tensor<Scalar> left;    // target of D * Z
    Tensor<Scalar> right;   // target of Z * D
    Tensor<Scalar> closed_form;
};

/// System whose unique solution is Y*D*X (YDX) or X*D*Y (XDY), X in D{2}, Y in D{1}.
template <typename Scalar>
CharacterizingSystem<Scalar> bilateral_system(const Tensor<Scalar>& d, const Tensor<Scalar>& x,
                                              const Tensor<Scalar>& y, SystemKind kind) {
    switch (kind) {
        case SystemKind::YDX: return {kind, d * x, y * d * x * d, y * d * x};
        case SystemKind::XDY: return {kind, d * x * d * y, x * d, x * d * y};
        default: throw ModeMismatch("bilateral_system only builds the YDX and XDY systems");
    }
}

/// System characterizing one of the composite inverses of a square D.
template <typename Scalar>
CharacterizingSystem<Scalar> composite_system(const Tensor<Scalar>& d, SystemKind kind) {
    require_square(d, "composite system");
    const auto mp = moore_penrose(d);
    switch (kind) {
        case SystemKind::CMP: {
            const auto dd = drazin_inverse(d);
            return {kind, d * dd * d * mp, mp * d * dd * d, mp * d * dd * d * mp};
        }
        case SystemKind::DMP: {
            const auto dd = drazin_inverse(d);
            return {kind, d * dd * d * mp, dd * d, dd * d * mp};
        }
        case SystemKind::MPD: {
            const auto dd = drazin_inverse(d);
            return {kind, d * dd, mp * d * dd * d, mp * d * dd};
        }
        case SystemKind::MPCEP: {
            const auto ce = core_ep_inverse(d);
            return {kind, d * ce, mp * d * ce * d, mp * d * ce};
        }
        case SystemKind::CEPMP: {
            const auto ce = core_ep_inverse(d);
            return {kind, d * ce * d * mp, ce * d, ce * d * mp};
        }
        default: throw ModeMismatch("YDX/XDY systems need explicit X and Y; use bilateral_system");
    }
}

template <typename Real>
struct SystemResidual {
    std::array<Real, 3> eq_residuals{};  // Z*D*Z = Z, D*Z = left, Z*D = right
    bool satisfied = false;
};

template <typename Scalar>
SystemResidual<RealOf<Scalar>> verify_system(const Tensor<Scalar>& d, const Tensor<Scalar>& z,
                                             const CharacterizingSystem<Scalar>& sys,
                                             RealOf<Scalar> tol = kDefaultVerifyTol) {
    if (!(z.shape() == d.shape().transposed())) {
        throw ShapeMismatch("system unknown has shape " + z.shape().to_string() + ", expected " +
                            d.shape().transposed().to_string());
    }
    SystemResidual<RealOf<Scalar>> r;
    r.eq_residuals[0] = relative_difference(z * d * z, z);
    r.eq_residuals[1] = relative_difference(d * z, sys.left);
    r.eq_residuals[2] = relative_difference(z * d, sys.right);
    r.satisfied = r.eq_residuals[0] <= tol && r.eq_residuals[1] <= tol && r.eq_residuals[2] <= tol;
    return r;
}

template <typename Scalar>
SystemResidual<RealOf<Scalar>> verify_system(const Tensor<Scalar>& d, const Tensor<Scalar>& z, SystemKind kind,
                                             RealOf<Scalar> tol = kDefaultVerifyTol) {
    return verify_system(d, z, composite_system(d, kind), tol);
}

template <typename Scalar>
struct ProbeResult {
    Tensor<Scalar> solution;
    SystemResidual<RealOf<Scalar>> residual;
    RealOf<Scalar> difference = 0;  // relative to the closed form
    bool agrees = false;
};

/// Unknown count above which the stacked Kronecker system is refused.
inline constexpr Index kProbeMaxUnknowns = 4096;

/// Solves the system independently of its closed form.
///
/// The two linear equations are stacked as (I (x) D) vec Z = vec(left) and
/// (D^T (x) I) vec Z = vec(right) and solved in the minimum-norm least-squares
/// sense. Their homogeneous solutions H satisfy D*H = 0 and H*D = 0, so for the
/// min-norm point Z0 the product equation pins the unique solution to
/// Z0 * D * Z0, which is then checked against all three equations.
template <typename Scalar>
ProbeResult<Scalar> uniqueness_probe(const Tensor<Scalar>& d, const CharacterizingSystem<Scalar>& sys,
                                     RealOf<Scalar> tol = 1e-8) {
    using Mat = Matrix<Scalar>;
    const Mat dm = d.storage();
    const Index r = dm.rows();
    const Index c = dm.cols();
    const Index unknowns = c * r;
    if (unknowns > kProbeMaxUnknowns) {
        throw PreconditionViolated("uniqueness probe limited to " + std::to_string(kProbeMaxUnknowns) + " unknowns");
    }
    // Z is c x r in matricized form; vec is column-major.
    Mat a = Mat::Zero(r * r + c * c, unknowns);
    Eigen::Matrix<Scalar, Eigen::Dynamic, 1> rhs(r * r + c * c);
    for (Index j = 0; j < r; ++j) {  // (I_r (x) D): block (j, j) = D
        a.block(j * r, j * c, r, c) = dm;
    }
    for (Index i = 0; i < c; ++i) {  // (D^T (x) I_c): block (i, j) = D(j, i) * I_c
        for (Index j = 0; j < r; ++j) {
            a.block(r * r + i * c, j * c, c, c).diagonal().setConstant(dm(j, i));
        }
    }
    const Mat left = sys.left.storage();
    const Mat right = sys.right.storage();
    rhs.head(r * r) = Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(left.data(), r * r);
    rhs.tail(c * c) = Eigen::Map<const Eigen::Matrix<Scalar, Eigen::Dynamic, 1>>(right.data(), c * c);

    Eigen::CompleteOrthogonalDecomposition<Mat> cod;
    cod.setThreshold(1e-10);
    cod.compute(a);
    const Eigen::Matrix<Scalar, Eigen::Dynamic, 1> z = cod.solve(rhs);
    const Mat z0 = Eigen::Map<const Mat>(z.data(), c, r);
    const auto zt = dematricize<Scalar>(z0, d.shape().transposed());

    ProbeResult<Scalar> out;
    out.solution = zt * d * zt;
    out.residual = verify_system(d, out.solution, sys, tol);
    out.difference = relative_difference(out.solution, sys.closed_form);
    out.agrees = out.residual.satisfied && approx_equal(out.solution, sys.closed_form, tol);
    return out;
}

template <typename Scalar>
ProbeResult<Scalar> uniqueness_probe(const Tensor<Scalar>& d, SystemKind kind, RealOf<Scalar> tol = 1e-8) {
    return uniqueness_probe(d, composite_system(d, kind), tol);
}

// ---------------------------------------------------------------------------
// Equality conditions.

struct EqualityFlags {
    bool lhs_equal = false;
    bool condition_holds = false;
    bool consistent() const { return lhs_equal == condition_holds; }
};

enum class EqualityPair {
    CMPeqMPD,      // D^{c,+} = D^{+,D}  <=>  N(D^+) in N(D^k)
    CMPeqDMP,      // D^{c,+} = D^{D,+}  <=>  R(D^k) in R(D^+)
    MPCEPeqCEPMP,  // D^{+,o} = D^{o,+}  <=>  N(D^+) in N(D^o) and R(D^o) in R(D^+ D^k)
    Thm25,         // X = D^o, Y = D^+:  XDY = YDX  <=>  N(DY) in N(X) and R(X) in R(YD)
    DMPDeqCMPD,    // D^{D,+} D = D^{c,+} D  <=>  R(D^k) in R(D^+)
    DMPDeqDCMP,    // D D^{+,D} = D D^{c,+}  <=>  D^k = D^{k+1} D^+
};

inline constexpr std::array<EqualityPair, 6> kAllEqualityPairs = {
    EqualityPair::CMPeqMPD, EqualityPair::CMPeqDMP,   EqualityPair::MPCEPeqCEPMP,
    EqualityPair::Thm25,    EqualityPair::DMPDeqCMPD, EqualityPair::DMPDeqDCMP};

inline std::string_view to_string(EqualityPair p) {
    switch (p) {
        case EqualityPair::CMPeqMPD: return "cmp=mpd";
        case EqualityPair::CMPeqDMP: return "cmp=dmp";
        case EqualityPair::MPCEPeqCEPMP: return "mpcep=cepmp";
        case EqualityPair::Thm25: return "bilateral-commute";
        case EqualityPair::DMPDeqCMPD: return "dmp*d=cmp*d";
        case EqualityPair::DMPDeqDCMP: return "d*mpd=d*cmp";
    }
    return "?";
}

/// Truth values of the three equivalent statements for X in D{2}, Y in D{1}:
/// (i) XDY = YDX; (ii) X = XDY = YDX; (iii) N(DY) in N(X) and R(X) in R(YD).
template <typename Scalar>
std::array<bool, 3> bilateral_commutation_statements(const Tensor<Scalar>& d, const Tensor<Scalar>& x,
                                                     const Tensor<Scalar>& y, RealOf<Scalar> eq_tol = kDefaultEqualityTol,
                                                     SubspaceTolerance sub = {}) {
    require_square(d, "bilateral commutation");
    const auto xdy = x * d * y;
    const auto ydx = y * d * x;
    const bool s1 = approx_equal(xdy, ydx, eq_tol);
    const bool s2 = approx_equal(x, xdy, eq_tol) && approx_equal(x, ydx, eq_tol);
    const bool s3 = null_contains(d * y, x, sub) && range_contains(y * d, x, sub);
    return {s1, s2, s3};
}

template <typename Scalar>
EqualityFlags equality_condition(const Tensor<Scalar>& d, EqualityPair pair,
                                 RealOf<Scalar> eq_tol = kDefaultEqualityTol, SubspaceTolerance sub = {}) {
    require_square(d, "equality condition");
    const int k = tensor_index(d);
    const auto dk = tensor_power(d, k);
    const auto mp = moore_penrose(d);
    EqualityFlags f;
    switch (pair) {
        case EqualityPair::CMPeqMPD:
            f.lhs_equal = approx_equal(compute_inverse(d, InverseKind::CMP), compute_inverse(d, InverseKind::MPD), eq_tol);
            f.condition_holds = null_contains(mp, dk, sub);
            break;
        case EqualityPair::CMPeqDMP:
            f.lhs_equal = approx_equal(compute_inverse(d, InverseKind::CMP), compute_inverse(d, InverseKind::DMP), eq_tol);
            f.condition_holds = range_contains(mp, dk, sub);
            break;
        case EqualityPair::MPCEPeqCEPMP: {
            const auto ce = core_ep_inverse(d);
            f.lhs_equal =
                approx_equal(compute_inverse(d, InverseKind::MPCEP), compute_inverse(d, InverseKind::CEPMP), eq_tol);
            f.condition_holds = null_contains(mp, ce, sub) && range_contains(mp * dk, ce, sub);
            break;
        }
        case EqualityPair::Thm25: {
            const auto s = bilateral_commutation_statements(d, core_ep_inverse(d), mp, eq_tol, sub);
            f.lhs_equal = s[0];
            f.condition_holds = s[2];
            break;
        }
        case EqualityPair::DMPDeqCMPD:
            f.lhs_equal = approx_equal(compute_inverse(d, InverseKind::DMP) * d, compute_inverse(d, InverseKind::CMP) * d,
                                       eq_tol);
            f.condition_holds = range_contains(mp, dk, sub);
            break;
        case EqualityPair::DMPDeqDCMP:
            f.lhs_equal = approx_equal(d * compute_inverse(d, InverseKind::MPD), d * compute_inverse(d, InverseKind::CMP),
                                       eq_tol);
            f.condition_holds = approx_equal(dk, dk * d * mp, eq_tol);
            break;
    }
    return f;
}

/// D^+ D^l (D^l)^+, equal to the MPCEP inverse for every l >= ind(D).
template <typename Scalar>
Tensor<Scalar> mpcep_power_representation(const Tensor<Scalar>& d, int l) {
    const auto dl = tensor_power(d, l);
    return moore_penrose(d) * dl * moore_penrose(dl);
}

/// D^D D^l (D^l)^+, equal to the CEPMP inverse for every l >= ind(D).
template <typename Scalar>
Tensor<Scalar> cepmp_power_representation(const Tensor<Scalar>& d, int l) {
    const auto dl = tensor_power(d, l);
    return drazin_inverse(d) * dl * moore_penrose(dl);
}

/// Y*D*Y = Y, R(Y) = R(B) and N(Y) = N(C).
template <typename Scalar>
bool prescribed_outer_check(const Tensor<Scalar>& d, const Tensor<Scalar>& y, const Tensor<Scalar>& b,
                            const Tensor<Scalar>& c, RealOf<Scalar> tol = kDefaultVerifyTol,
                            SubspaceTolerance sub = {}) {
    if (b.shape().row_modes() != y.shape().row_modes() || c.shape().col_modes() != y.shape().col_modes()) {
        throw ShapeMismatch("range/null generators are not conformable with Y");
    }
    if (!is_outer(d, y).satisfied(tol)) return false;
    if (frobenius_norm(y) == 0) return frobenius_norm(b) == 0 && same_null_space(y, c, sub);
    return same_range(y, b, sub) && same_null_space(y, c, sub);
}

template <typename Scalar>
struct CommutingInnerFlags {
    bool products_equal = false;
    bool sides_equal = false;
};

/// For X, Z in D{1}: X*D*Z = Z*D*X  <=>  X*D = Z*D and D*Z = D*X.
template <typename Scalar>
CommutingInnerFlags<Scalar> commuting_inner_condition(const Tensor<Scalar>& d, const Tensor<Scalar>& x,
                                                      const Tensor<Scalar>& z,
                                                      RealOf<Scalar> tol = kDefaultEqualityTol) {
    if (!is_inner(d, x).satisfied(tol) || !is_inner(d, z).satisfied(tol)) {
        throw NotGeneralizedInverse("commuting_inner_condition needs X and Z in D{1}");
    }
    CommutingInnerFlags<Scalar> f;
    f.products_equal = approx_equal(x * d * z, z * d * x, tol);
    f.sides_equal = approx_equal(x * d, z * d, tol) && approx_equal(d * z, d * x, tol);
    return f;
}

}  // namespace tgi
