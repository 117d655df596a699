#include <doctest.h>

#include "tgi/problems.hpp"
#include "tgi/solvers.hpp"

using namespace tgi;

namespace {

const DenseTensor& poisson_d1() {
    static const DenseTensor d = augment_nilpotent(dirichlet_poisson(4), NilpotentBlock::N1);
    return d;
}

}  // namespace

TEST_CASE("identity tensor: the family collapses to B") {
    const auto id = identity_tensor<Complex>({2, 2});
    const auto b = random_tensor(TensorShape({2, 2}, {}), 3);
    for (auto mode : kAllSolveModes) {
        SolveRequest<Complex> req{id, b, mode};
        if (is_general_mode(mode)) {
            const auto fam = solve_general(req);
            CHECK(approx_equal(fam.particular, b, 1e-14));
            CHECK(frobenius_norm(fam.projector) <= 1e-14);
        } else {
            CHECK(approx_equal(solve_constrained(req), b, 1e-14));
        }
    }
}

TEST_CASE("general families: every sampled member solves the target system") {
    const auto& d = poisson_d1();
    REQUIRE(tensor_index(d) == 3);
    const auto b0 = random_tensor(TensorShape(d.shape().col_modes(), {}), 17);
    for (auto mode : {SolveMode::CMP_power, SolveMode::CMP_projected, SolveMode::MPCEP_general}) {
        const auto fam = solve_general(SolveRequest<Complex>{d, b0, mode});
        CHECK(fam.residual(fam.particular) <= 1e-8);
        const auto z1 = fam.member(random_tensor(b0.shape(), 1));
        const auto z2 = fam.member(random_tensor(b0.shape(), 2));
        CHECK(fam.residual(z1) <= 1e-8);
        CHECK(fam.residual(z2) <= 1e-8);
        CHECK(relative_difference(z1, z2) > 1e-3);
    }
    const auto b = tensor_power(d, 3) * moore_penrose(d) * b0;
    const auto fam = solve_general(SolveRequest<Complex>{d, b, SolveMode::CMP_power});
    CHECK(relative_difference(tensor_power(d, 3) * fam.particular, tensor_power(d, 3) * moore_penrose(d) * b) <= 1e-8);
    CHECK_THROWS_AS(solve_general(SolveRequest<Complex>{d, b, SolveMode::DMP_constrained}), ModeMismatch);
}

TEST_CASE("constrained modes on a Poisson tensor of index three") {
    const auto& d = poisson_d1();
    const auto b = range_rhs(d, 3, 99);
    for (auto mode : kAllSolveModes) {
        if (is_general_mode(mode)) continue;
        const SolveRequest<Complex> req{d, b, mode};
        const auto z = solve_constrained(req);
        const auto diag = diagnose_constrained(req, z);
        CHECK_MESSAGE(diag.residual <= 1e-6, to_string(mode));
        CHECK(diag.in_advertised_range);
        CHECK(diag.unique_in_range);
        CHECK(solve_constrained(req) == z);
    }
    const DenseTensor zero(b.shape());
    CHECK(frobenius_norm(solve_constrained(SolveRequest<Complex>{d, zero, SolveMode::DMP_constrained})) == 0.0);
}

TEST_CASE("range pre-check is strict by default and can be demoted") {
    const auto& d = poisson_d1();
    const auto b = random_tensor(TensorShape(d.shape().col_modes(), {}), 5);
    SolveRequest<Complex> req{d, b, SolveMode::CMP_constrained};
    CHECK_THROWS_AS(solve_constrained(req), RhsNotInRange);
    static int warnings = 0;
    req.range_check = RangeCheck::Warn;
    solve_constrained(req, [](const std::string&) { ++warnings; });
    CHECK(warnings == 1);
    CHECK_THROWS_AS(solve_constrained(SolveRequest<Complex>{d, b, SolveMode::CMP_power}), ModeMismatch);
    CHECK_THROWS_AS(solve_constrained(SolveRequest<Complex>{d, DenseTensor(TensorShape({3}, {})), SolveMode::CMP_constrained}),
                    ShapeMismatch);
}

TEST_CASE("solver selection follows range membership") {
    const auto& d = poisson_d1();
    CHECK(select_mode(d, range_rhs(d, 3, 1)) == SolveMode::CMP_constrained);
    CHECK(select_mode(d, random_tensor(TensorShape(d.shape().col_modes(), {}), 2)) == SolveMode::CMP_projected);
    CHECK(select_mode(d, range_rhs(d, 3, 1), InverseKind::MPCEP) == SolveMode::MPCEP_constrained);
}

TEST_CASE("residual report") {
    const auto d = dirichlet_poisson(3);
    const auto b = range_rhs(d, 1, 4);
    const auto rep = residual_report(d, b, {kAllInverseKinds.begin(), kAllInverseKinds.end()}, 2);
    REQUIRE(rep.rows.size() == 8);
    CHECK(rep.index == 0);
    CHECK(rep.nnz == 49);
    for (std::size_t i = 0; i < rep.rows.size(); ++i) {
        CHECK(rep.rows[i].kind == kAllInverseKinds[i]);
        CHECK(rep.rows[i].residual <= 1e-12);
        CHECK(rep.rows[i].mean_time_s() >= 0);
    }

    // A component of B outside R(D) shows up as E_+ exactly.
    const auto n = neumann_poisson(4);
    const auto inside = range_rhs(n, 1, 8);
    DenseTensor ones(inside.shape());
    for (auto& e : ones.entries()) e = 0.25;
    const auto mixed = inside + Complex(0.3) * ones;
    const auto r2 = residual_report(n, mixed, {InverseKind::MP});
    CHECK(r2.rows[0].residual == doctest::Approx(0.3 * frobenius_norm(ones)).epsilon(1e-10));
}
