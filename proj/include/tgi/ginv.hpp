#pragma once

// Tensor generalized inverses under the Einstein product.
//
// Every inverse is computed on the matricization and mapped back; the product
// homomorphism makes that exact up to rounding.

#include <algorithm>
#include <array>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "tgi/errors.hpp"
#include "tgi/matrix_kernels.hpp"
#include "tgi/tensor.hpp"

namespace tgi {

inline constexpr double kDefaultVerifyTol = 1e-10;

/// Listed in residual-report order.
enum class InverseKind { MP, Drazin, CoreEP, CMP, MPD, DMP, MPCEP, CEPMP };

inline constexpr std::array<InverseKind, 8> kAllInverseKinds = {
    InverseKind::MP,  InverseKind::Drazin, InverseKind::CoreEP, InverseKind::CMP,
    InverseKind::MPD, InverseKind::DMP,    InverseKind::MPCEP,  InverseKind::CEPMP};

inline std::string_view to_string(InverseKind k) {
    switch (k) {
        case InverseKind::MP: return "mp";
        case InverseKind::Drazin: return "drazin";
        case InverseKind::CoreEP: return "core-ep";
        case InverseKind::CMP: return "cmp";
        case InverseKind::MPD: return "mpd";
        case InverseKind::DMP: return "dmp";
        case InverseKind::MPCEP: return "mpcep";
        case InverseKind::CEPMP: return "cepmp";
    }
    return "?";
}

inline InverseKind parse_inverse_kind(std::string_view s) {
    for (auto k : kAllInverseKinds) {
        if (s == to_string(k)) return k;
    }
    if (s == "coreep" || s == "core_ep") return InverseKind::CoreEP;
    if (s == "group") return InverseKind::Drazin;
    throw ParseError("unknown inverse kind '" + std::string(s) + "'");
}

inline bool requires_square(InverseKind k) { return k != InverseKind::MP; }

/// Defining-equation labels: (1)-(6) plus (1^k).
enum class Equation { E1, E2, E3, E4, E1k, E5, E6 };

inline constexpr std::array<Equation, 7> kAllEquations = {Equation::E1,  Equation::E2, Equation::E3, Equation::E4,
                                                          Equation::E1k, Equation::E5, Equation::E6};

inline std::string_view to_string(Equation e) {
    switch (e) {
        case Equation::E1: return "1";
        case Equation::E2: return "2";
        case Equation::E3: return "3";
        case Equation::E4: return "4";
        case Equation::E1k: return "1^k";
        case Equation::E5: return "5";
        case Equation::E6: return "6";
    }
    return "?";
}

inline Equation parse_equation(std::string_view s) {
    for (auto e : kAllEquations) {
        if (s == to_string(e)) return e;
    }
    if (s == "1k") return Equation::E1k;
    throw ParseError("unknown equation label '" + std::string(s) + "'");
}

inline bool is_square_only(Equation e) { return e == Equation::E1k || e == Equation::E5 || e == Equation::E6; }

/// Equation sets characterizing the three base inverses.
inline std::vector<Equation> defining_equations(InverseKind k) {
    switch (k) {
        case InverseKind::MP: return {Equation::E1, Equation::E2, Equation::E3, Equation::E4};
        case InverseKind::Drazin: return {Equation::E1k, Equation::E2, Equation::E5};
        case InverseKind::CoreEP: return {Equation::E1k, Equation::E6, Equation::E3};
        default: return {Equation::E2};  // composites: full systems live in characterizations
    }
}

/// Relative Frobenius residual per equation label.
template <typename Real>
class EquationResiduals {
public:
    void set(Equation e, Real r) { values_[e] = r; }
    Real at(Equation e) const { return values_.at(e); }
    bool contains(Equation e) const { return values_.count(e) > 0; }
    const std::map<Equation, Real>& values() const noexcept { return values_; }

    Real max() const {
        Real m = 0;
        for (const auto& [_, r] : values_) m = std::max(m, r);
        return m;
    }
    bool satisfied(Real tol = kDefaultVerifyTol) const { return max() <= tol; }

private:
    std::map<Equation, Real> values_;
};

template <typename Scalar>
void require_square(const Tensor<Scalar>& d, std::string_view what) {
    if (!d.is_square()) throw NotSquare(std::string(what) + " needs a square tensor, got " + d.shape().to_string());
}

template <typename Scalar>
int tensor_index(const Tensor<Scalar>& d) {
    require_square(d, "index");
    return index_of(d.storage());
}

template <typename Scalar>
Tensor<Scalar> moore_penrose(const Tensor<Scalar>& d) {
    return dematricize<Scalar>(pinv(d.storage()), d.shape().transposed());
}

template <typename Scalar>
Tensor<Scalar> drazin_inverse(const Tensor<Scalar>& d) {
    require_square(d, "Drazin inverse");
    return dematricize<Scalar>(drazin(d.storage()), d.shape());
}

template <typename Scalar>
Tensor<Scalar> core_ep_inverse(const Tensor<Scalar>& d) {
    require_square(d, "core-EP inverse");
    return dematricize<Scalar>(core_ep(d.storage()), d.shape());
}

template <typename Scalar>
Tensor<Scalar> compute_inverse(const Tensor<Scalar>& d, InverseKind kind) {
    if (requires_square(kind)) require_square(d, to_string(kind));
    switch (kind) {
        case InverseKind::MP: return moore_penrose(d);
        case InverseKind::Drazin: return drazin_inverse(d);
        case InverseKind::CoreEP: return core_ep_inverse(d);
        case InverseKind::DMP: return drazin_inverse(d) * d * moore_penrose(d);
        case InverseKind::MPD: return moore_penrose(d) * d * drazin_inverse(d);
        case InverseKind::CMP: {
            const auto mp = moore_penrose(d);
            return mp * d * drazin_inverse(d) * d * mp;
        }
        case InverseKind::MPCEP: return moore_penrose(d) * d * core_ep_inverse(d);
        case InverseKind::CEPMP: return core_ep_inverse(d) * d * moore_penrose(d);
    }
    throw ModeMismatch("unhandled inverse kind");
}

namespace detail {

template <typename Scalar>
RealOf<Scalar> rel_residual(const Tensor<Scalar>& lhs, const Tensor<Scalar>& rhs) {
    return relative_difference(lhs, rhs);
}

}  // namespace detail

/// Residuals of the requested defining equations for candidate Y.
/// `index` overrides k in (1^k); by default the tensor index of D is used.
template <typename Scalar>
EquationResiduals<RealOf<Scalar>> verify_equations(const Tensor<Scalar>& d, const Tensor<Scalar>& y,
                                                   const std::vector<Equation>& labels,
                                                   std::optional<int> index = {}) {
    using Real = RealOf<Scalar>;
    if (!(y.shape() == d.shape().transposed())) {
        throw ShapeMismatch("candidate inverse has shape " + y.shape().to_string() + ", expected " +
                            d.shape().transposed().to_string());
    }
    EquationResiduals<Real> out;
    std::optional<Tensor<Scalar>> dy, yd;
    auto get_dy = [&]() -> const Tensor<Scalar>& {
        if (!dy) dy = d * y;
        return *dy;
    };
    auto get_yd = [&]() -> const Tensor<Scalar>& {
        if (!yd) yd = y * d;
        return *yd;
    };
    for (Equation e : labels) {
        if (is_square_only(e)) require_square(d, "equation (" + std::string(to_string(e)) + ")");
        switch (e) {
            case Equation::E1: out.set(e, detail::rel_residual(get_dy() * d, d)); break;
            case Equation::E2: out.set(e, detail::rel_residual(get_yd() * y, y)); break;
            case Equation::E3: out.set(e, detail::rel_residual(conj_transpose(get_dy()), get_dy())); break;
            case Equation::E4: out.set(e, detail::rel_residual(conj_transpose(get_yd()), get_yd())); break;
            case Equation::E1k: {
                const int k = index ? *index : tensor_index(d);
                const auto dk = tensor_power(d, k);
                out.set(e, detail::rel_residual(y * (dk * d), dk));
                break;
            }
            case Equation::E5: {
                const Real den = std::max(frobenius_norm(get_dy()), frobenius_norm(get_yd()));
                const Real num = frobenius_norm(get_dy() - get_yd());
                out.set(e, den > 0 ? num / den : num);
                break;
            }
            case Equation::E6: out.set(e, detail::rel_residual(get_dy() * y, y)); break;
        }
    }
    return out;
}

template <typename Scalar>
EquationResiduals<RealOf<Scalar>> is_inner(const Tensor<Scalar>& d, const Tensor<Scalar>& y) {
    return verify_equations(d, y, {Equation::E1});
}

template <typename Scalar>
EquationResiduals<RealOf<Scalar>> is_outer(const Tensor<Scalar>& d, const Tensor<Scalar>& y) {
    return verify_equations(d, y, {Equation::E2});
}

template <typename Scalar>
bool in_inner_or_outer(const Tensor<Scalar>& d, const Tensor<Scalar>& y, RealOf<Scalar> tol) {
    return is_inner(d, y).satisfied(tol) || is_outer(d, y).satisfied(tol);
}

/// X * D * Y with no membership validation.
template <typename Scalar>
Tensor<Scalar> bilateral_inverse_unchecked(const Tensor<Scalar>& d, const Tensor<Scalar>& x, const Tensor<Scalar>& y) {
    return x * d * y;
}

/// X * D * Y for X, Y in D{1} or D{2}.
template <typename Scalar>
Tensor<Scalar> bilateral_inverse(const Tensor<Scalar>& d, const Tensor<Scalar>& x, const Tensor<Scalar>& y,
                                 RealOf<Scalar> tol = kDefaultVerifyTol) {
    if (!in_inner_or_outer(d, x, tol)) throw NotGeneralizedInverse("X is neither an inner nor an outer inverse of D");
    if (!in_inner_or_outer(d, y, tol)) throw NotGeneralizedInverse("Y is neither an inner nor an outer inverse of D");
    return bilateral_inverse_unchecked(d, x, y);
}

/// Y * D * X, the dual of X * D * Y.
template <typename Scalar>
Tensor<Scalar> dual_bilateral(const Tensor<Scalar>& d, const Tensor<Scalar>& x, const Tensor<Scalar>& y,
                              RealOf<Scalar> tol = kDefaultVerifyTol) {
    return bilateral_inverse(d, y, x, tol);
}

enum class ClosureCase {
    Both12,      // X, Y in D{1,2}
    OuterInner,  // X in D{2}, Y in D{1}
    Both1,       // X, Y in D{1}
};

/// Checks that X*D*Y and Y*D*X land in the class the closure rule promises.
template <typename Scalar>
bool closure_check(const Tensor<Scalar>& d, const Tensor<Scalar>& x, const Tensor<Scalar>& y, ClosureCase which,
                   RealOf<Scalar> tol = kDefaultVerifyTol) {
    auto inner = [&](const Tensor<Scalar>& t) { return is_inner(d, t).satisfied(tol); };
    auto outer = [&](const Tensor<Scalar>& t) { return is_outer(d, t).satisfied(tol); };
    bool pre = false;
    switch (which) {
        case ClosureCase::Both12: pre = inner(x) && outer(x) && inner(y) && outer(y); break;
        case ClosureCase::OuterInner: pre = outer(x) && inner(y); break;
        case ClosureCase::Both1: pre = inner(x) && inner(y); break;
    }
    if (!pre) throw PreconditionViolated("X or Y is not in the class the closure case requires");
    const auto xdy = x * d * y;
    const auto ydx = y * d * x;
    switch (which) {
        case ClosureCase::Both12: return inner(xdy) && outer(xdy) && inner(ydx) && outer(ydx);
        case ClosureCase::OuterInner: return outer(xdy) && outer(ydx);
        case ClosureCase::Both1: return inner(xdy) && inner(ydx);
    }
    return false;
}

}  // namespace tgi
