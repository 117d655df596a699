#pragma once

// Multilinear systems D * Z = B solved through composite inverses.

#include <algorithm>
#include <array>
#include <chrono>
#include <cstdint>
#include <string>
#include <string_view>
#include <vector>

#include "tgi/characterizations.hpp"
#include "tgi/errors.hpp"
#include "tgi/ginv.hpp"
#include "tgi/tensor.hpp"

namespace tgi {

enum class SolveMode {
    CMP_power,          // D^k Z = D^k D^+ B,       Z = D^{c,+} B + (I - D^{c,+} D) Q
    CMP_constrained,    // D Z = B, B in R(D^k),    Z = D^{c,+} B in R(D^+ D^k)
    CMP_projected,      // D Z = D D^{c,+} B,       Z = D^{c,+} B + (I - D^+ D) Q
    DMP_constrained,    // D Z = B, B in R(D^k),    Z = D^{D,+} B in R(D^D D^k)
    MPD_constrained,    // D Z = B, B in R(D^k),    Z = D^{+,D} B in R(D^+ D^k)
    MPCEP_general,      // D Z = D^k (D^k)^+ B,     Z = D^{+,o} B + (I - D^+ D) Q
    MPCEP_constrained,  // D Z = B, B in R(D^k),    Z = D^{+,o} B in R(D^+ D^k)
    CEPMP_constrained,  // D Z = B, B in R(D^k),    Z = D^{o,+} B in R(D^o D^k)
};

inline constexpr std::array<SolveMode, 8> kAllSolveModes = {
    SolveMode::CMP_power,       SolveMode::CMP_constrained, SolveMode::CMP_projected,     SolveMode::DMP_constrained,
    SolveMode::MPD_constrained, SolveMode::MPCEP_general,   SolveMode::MPCEP_constrained, SolveMode::CEPMP_constrained};

inline std::string_view to_string(SolveMode m) {
    switch (m) {
        case SolveMode::CMP_power: return "cmp-power";
        case SolveMode::CMP_constrained: return "cmp-constrained";
        case SolveMode::CMP_projected: return "cmp-projected";
        case SolveMode::DMP_constrained: return "dmp-constrained";
        case SolveMode::MPD_constrained: return "mpd-constrained";
        case SolveMode::MPCEP_general: return "mpcep-general";
        case SolveMode::MPCEP_constrained: return "mpcep-constrained";
        case SolveMode::CEPMP_constrained: return "cepmp-constrained";
    }
    return "?";
}

inline SolveMode parse_solve_mode(std::string_view s) {
    for (auto m : kAllSolveModes) {
        if (s == to_string(m)) return m;
    }
    throw ParseError("unknown solve mode '" + std::string(s) + "'");
}

inline bool is_general_mode(SolveMode m) {
    return m == SolveMode::CMP_power || m == SolveMode::CMP_projected || m == SolveMode::MPCEP_general;
}

/// Composite inverse K whose product K * B gives the particular solution.
inline InverseKind mode_inverse(SolveMode m) {
    switch (m) {
        case SolveMode::CMP_power:
        case SolveMode::CMP_constrained:
        case SolveMode::CMP_projected: return InverseKind::CMP;
        case SolveMode::DMP_constrained: return InverseKind::DMP;
        case SolveMode::MPD_constrained: return InverseKind::MPD;
        case SolveMode::MPCEP_general:
        case SolveMode::MPCEP_constrained: return InverseKind::MPCEP;
        case SolveMode::CEPMP_constrained: return InverseKind::CEPMP;
    }
    throw ModeMismatch("unhandled solve mode");
}

enum class RangeCheck { Strict, Warn, Skip };

template <typename Scalar>
struct SolveRequest {
    Tensor<Scalar> d;
    Tensor<Scalar> b;
    SolveMode mode = SolveMode::CMP_constrained;
    RangeCheck range_check = RangeCheck::Strict;
    SubspaceTolerance subspace{};
};

/// Z = particular + projector * Q for arbitrary Q; every member solves op * Z = rhs.
template <typename Scalar>
struct SolutionFamily {
    Tensor<Scalar> particular;
    Tensor<Scalar> projector;
    std::string constraint_desc;
    Tensor<Scalar> op;
    Tensor<Scalar> rhs;

    Tensor<Scalar> member(const Tensor<Scalar>& q) const { return particular + projector * q; }
    RealOf<Scalar> residual(const Tensor<Scalar>& z) const { return relative_difference(op * z, rhs); }
};

inline constexpr double kProjectorTol = 1e-10;

template <typename Scalar>
void check_rhs(const Tensor<Scalar>& d, const Tensor<Scalar>& b) {
    require_square(d, "multilinear solve");
    if (b.shape().row_modes() != d.shape().col_modes()) {
        throw ShapeMismatch("right-hand side " + b.shape().to_string() + " is not conformable with " +
                            d.shape().to_string());
    }
}

template <typename Scalar>
SolutionFamily<Scalar> solve_general(const SolveRequest<Scalar>& req) {
    check_rhs(req.d, req.b);
    if (!is_general_mode(req.mode)) {
        throw ModeMismatch("'" + std::string(to_string(req.mode)) + "' is not a general-solution mode");
    }
    const auto& d = req.d;
    const auto& b = req.b;
    const auto id = identity_like(d);
    const auto mp = moore_penrose(d);
    SolutionFamily<Scalar> fam;
    switch (req.mode) {
        case SolveMode::CMP_power: {
            const auto cmp = compute_inverse(d, InverseKind::CMP);
            const auto dk = tensor_power(d, tensor_index(d));
            fam.particular = cmp * b;
            fam.projector = id - cmp * d;
            fam.op = dk;
            fam.rhs = dk * mp * b;
            fam.constraint_desc = "D^k*Z = D^k*D^+*B";
            break;
        }
        case SolveMode::CMP_projected: {
            const auto cmp = compute_inverse(d, InverseKind::CMP);
            fam.particular = cmp * b;
            fam.projector = id - mp * d;
            fam.op = d;
            fam.rhs = d * fam.particular;
            fam.constraint_desc = "D*Z = D*D^{c,+}*B";
            break;
        }
        case SolveMode::MPCEP_general: {
            const auto dk = tensor_power(d, tensor_index(d));
            fam.particular = compute_inverse(d, InverseKind::MPCEP) * b;
            fam.projector = id - mp * d;
            fam.op = d;
            fam.rhs = dk * moore_penrose(dk) * b;
            fam.constraint_desc = "D*Z = D^k*(D^k)^+*B";
            break;
        }
        default: break;
    }
    if (relative_difference(fam.projector * fam.projector, fam.projector) > kProjectorTol) {
        throw NotGeneralizedInverse("family projector is not idempotent; upstream inverse is inaccurate");
    }
    return fam;
}

/// Generator G of the range in which the constrained solution is unique.
template <typename Scalar>
Tensor<Scalar> advertised_range(const Tensor<Scalar>& d, SolveMode mode) {
    const auto dk = tensor_power(d, tensor_index(d));
    switch (mode) {
        case SolveMode::DMP_constrained: return drazin_inverse(d) * dk;
        case SolveMode::CEPMP_constrained: return core_ep_inverse(d) * dk;
        default: return moore_penrose(d) * dk;
    }
}

template <typename Scalar>
bool rhs_in_power_range(const Tensor<Scalar>& d, const Tensor<Scalar>& b, SubspaceTolerance sub = {}) {
    return range_contains(tensor_power(d, tensor_index(d)), b, sub);
}

/// Optional sink for the demoted range-check warning.
using WarningSink = void (*)(const std::string&);

template <typename Scalar>
Tensor<Scalar> solve_constrained(const SolveRequest<Scalar>& req, WarningSink warn = nullptr) {
    check_rhs(req.d, req.b);
    if (req.mode == SolveMode::CMP_power || req.mode == SolveMode::CMP_projected) {
        throw ModeMismatch("'" + std::string(to_string(req.mode)) + "' is a general-solution mode");
    }
    if (req.range_check != RangeCheck::Skip && !rhs_in_power_range(req.d, req.b, req.subspace)) {
        const std::string msg = "right-hand side is not in R(D^k)";
        if (req.range_check == RangeCheck::Strict) throw RhsNotInRange(msg);
        if (warn) warn(msg);
    }
    return compute_inverse(req.d, mode_inverse(req.mode)) * req.b;
}

template <typename Real>
struct ConstrainedDiagnostics {
    Real residual = 0;          // ||D*Z - B||_F / ||B||_F
    bool in_advertised_range = false;
    bool unique_in_range = false;  // N(D) and the advertised range meet only in {0}
};

template <typename Scalar>
ConstrainedDiagnostics<RealOf<Scalar>> diagnose_constrained(const SolveRequest<Scalar>& req, const Tensor<Scalar>& z,
                                                            SubspaceTolerance sub = {}) {
    ConstrainedDiagnostics<RealOf<Scalar>> out;
    out.residual = relative_difference(req.d * z, req.b);
    const auto g = advertised_range(req.d, req.mode);
    out.in_advertised_range = range_contains(g, z, sub);
    const auto dg = req.d * g;
    out.unique_in_range = numerical_rank(dg.storage(), std::optional<RealOf<Scalar>>(sub.rank)).rank ==
                          numerical_rank(g.storage(), std::optional<RealOf<Scalar>>(sub.rank)).rank;
    return out;
}

/// Constrained mode for the inverse when B is in R(D^k), otherwise the matching general mode.
template <typename Scalar>
SolveMode select_mode(const Tensor<Scalar>& d, const Tensor<Scalar>& b, InverseKind preferred = InverseKind::CMP) {
    const bool in_range = rhs_in_power_range(d, b);
    switch (preferred) {
        case InverseKind::DMP: if (in_range) return SolveMode::DMP_constrained; break;
        case InverseKind::MPD: if (in_range) return SolveMode::MPD_constrained; break;
        case InverseKind::CEPMP: if (in_range) return SolveMode::CEPMP_constrained; break;
        case InverseKind::MPCEP: return in_range ? SolveMode::MPCEP_constrained : SolveMode::MPCEP_general;
        default: break;
    }
    return in_range ? SolveMode::CMP_constrained : SolveMode::CMP_projected;
}

// ---------------------------------------------------------------------------
// Residual report: E_K = ||D * K * B - B||_F per inverse kind.

struct ResidualRow {
    InverseKind kind;
    double residual = 0;
    double inverse_time_s = 0;   // mean over repeats
    double residual_time_s = 0;  // mean over repeats
    double mean_time_s() const { return inverse_time_s + residual_time_s; }
};

struct ResidualReport {
    std::string problem;
    std::string order;
    int index = 0;
    Index nnz = 0;
    int repeats = 1;
    std::uint64_t seed = 0;
    std::vector<ResidualRow> rows;  // report order of InverseKind
};

template <typename Scalar>
ResidualReport residual_report(const Tensor<Scalar>& d, const Tensor<Scalar>& b,
                               const std::vector<InverseKind>& kinds, int repeats = 1) {
    check_rhs(d, b);
    if (repeats < 1) throw PreconditionViolated("repeat count must be at least 1");
    using Clock = std::chrono::steady_clock;
    ResidualReport rep;
    rep.order = d.shape().to_string();
    rep.index = tensor_index(d);
    rep.nnz = nnz(d);
    rep.repeats = repeats;
    std::vector<InverseKind> sorted = kinds;
    std::sort(sorted.begin(), sorted.end());
    sorted.erase(std::unique(sorted.begin(), sorted.end()), sorted.end());
    for (InverseKind kind : sorted) {
        ResidualRow row{kind};
        double t_inv = 0, t_res = 0;
        for (int r = 0; r < repeats; ++r) {
            const auto t0 = Clock::now();
            const auto k = compute_inverse(d, kind);
            const auto t1 = Clock::now();
            const double res = static_cast<double>(frobenius_norm(d * (k * b) - b));
            const auto t2 = Clock::now();
            t_inv += std::chrono::duration<double>(t1 - t0).count();
            t_res += std::chrono::duration<double>(t2 - t1).count();
            row.residual = res;
        }
        row.inverse_time_s = t_inv / repeats;
        row.residual_time_s = t_res / repeats;
        rep.rows.push_back(row);
    }
    return rep;
}

}  // namespace tgi
