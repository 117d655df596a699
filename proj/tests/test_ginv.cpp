#include <doctest.h>

#include "tgi/ginv.hpp"
#include "tgi/problems.hpp"

using namespace tgi;

TEST_CASE("fixture Moore-Penrose inverse matches the published entries") {
    const auto f = paper_fixture();
    CHECK(f.d.at({0, 0, 0, 0}) == Complex(1));
    CHECK(f.d.at({1, 2, 0, 0}) == Complex(-1));
    const auto mp = moore_penrose(f.d);
    CHECK(mp.at({0, 0, 0, 0}).real() == doctest::Approx(0.125).epsilon(1e-14));
    for (std::size_t i = 0; i < mp.entries().size(); ++i) {
        CHECK(std::abs(mp.entries()[i] - f.expected.at(InverseKind::MP).entries()[i]) <= 1e-12);
    }
    CHECK(verify_equations(f.d, mp, defining_equations(InverseKind::MP)).satisfied(1e-12));
}

TEST_CASE("fixture index is three") { CHECK(tensor_index(paper_fixture().d) == 3); }

TEST_CASE("fixture Drazin inverse satisfies its equations") {
    const auto f = paper_fixture();
    const auto dd = drazin_inverse(f.d);
    CHECK(dd.at({0, 0, 0, 0}).real() == doctest::Approx(1.0 / 16).epsilon(1e-13));
    CHECK(dd.at({1, 2, 1, 2}).real() == doctest::Approx(39.0 / 256).epsilon(1e-13));
    CHECK(verify_equations(f.d, dd, defining_equations(InverseKind::Drazin)).satisfied(1e-10));
    // The printed second row of block (2,2) carries -1/64 where the equations force +1/64.
    CHECK(dd.at({1, 1, 1, 1}).real() == doctest::Approx(1.0 / 64).epsilon(1e-12));
    CHECK(dd.at({1, 2, 1, 1}).real() == doctest::Approx(1.0 / 64).epsilon(1e-12));
}

TEST_CASE("core-EP inverse satisfies (1^k), (6), (3)") {
    const auto f = paper_fixture();
    const auto ce = core_ep_inverse(f.d);
    CHECK(verify_equations(f.d, ce, defining_equations(InverseKind::CoreEP)).satisfied(1e-10));
    REQUIRE_THROWS_AS(core_ep_inverse(DenseTensor(TensorShape({2}, {3}))), NotSquare);
}

TEST_CASE("composite inverses are outer inverses") {
    const auto d = random_tensor(TensorShape::square({2, 3}), 4, RandomKind::CoreNilpotent, 2);
    for (auto kind : kAllInverseKinds) {
        const auto y = compute_inverse(d, kind);
        CHECK(is_outer(d, y).satisfied(1e-10));
    }
}

TEST_CASE("identity tensor: every inverse is the identity") {
    const auto id = identity_tensor<Complex>({2, 2});
    for (auto kind : kAllInverseKinds) CHECK(approx_equal(compute_inverse(id, kind), id, 1e-14));
    CHECK(tensor_index(id) == 0);
}

TEST_CASE("equation verification") {
    const auto f = paper_fixture();
    const DenseTensor zero(f.d.shape());
    const auto r = verify_equations(f.d, zero, {Equation::E1, Equation::E2});
    CHECK(r.at(Equation::E1) == doctest::Approx(1.0));
    CHECK(r.at(Equation::E2) == 0.0);
    CHECK_FALSE(r.satisfied());
    CHECK(parse_equation("1k") == Equation::E1k);
    CHECK_THROWS_AS(parse_equation("7"), ParseError);
    CHECK_THROWS_AS(verify_equations(f.d, DenseTensor(TensorShape({6}, {6})), {Equation::E1}), ShapeMismatch);
    const DenseTensor rect(TensorShape({2}, {3}));
    CHECK_THROWS_AS(verify_equations(rect, DenseTensor(TensorShape({3}, {2})), {Equation::E5}), NotSquare);
    CHECK(verify_equations(rect, DenseTensor(TensorShape({3}, {2})), {Equation::E2}).satisfied());
}

TEST_CASE("Moore-Penrose inverse of a rectangular tensor") {
    const auto a = random_tensor(TensorShape({2, 3}, {4}), 9);
    const auto p = moore_penrose(a);
    CHECK(p.shape() == TensorShape({4}, {2, 3}));
    CHECK(verify_equations(a, p, defining_equations(InverseKind::MP)).satisfied(1e-12));
}

TEST_CASE("bilateral inverses and closure") {
    const auto d = random_tensor(TensorShape::square({2, 2}), 21, RandomKind::CoreNilpotent, 2);
    const auto mp = moore_penrose(d);
    const auto dd = drazin_inverse(d);
    const auto inner = random_inner_inverse(d, 5);
    const auto inner2 = random_inner_inverse(d, 6);
    const auto outer = random_outer_inverse(d, 7);

    CHECK(approx_equal(bilateral_inverse(d, dd, mp), compute_inverse(d, InverseKind::DMP), 1e-12));
    CHECK(approx_equal(dual_bilateral(d, dd, mp), compute_inverse(d, InverseKind::MPD), 1e-12));
    CHECK_THROWS_AS(bilateral_inverse(d, identity_like(d) + identity_like(d), mp), NotGeneralizedInverse);

    CHECK(closure_check(d, mp, mp, ClosureCase::Both12));
    CHECK(closure_check(d, outer, inner, ClosureCase::OuterInner));
    CHECK(closure_check(d, inner, inner2, ClosureCase::Both1));
    CHECK_THROWS_AS(closure_check(d, outer, inner, ClosureCase::Both1), PreconditionViolated);
}

TEST_CASE("kind names round-trip") {
    for (auto k : kAllInverseKinds) CHECK(parse_inverse_kind(to_string(k)) == k);
    CHECK(parse_inverse_kind("group") == InverseKind::Drazin);
    CHECK_THROWS_AS(parse_inverse_kind("nope"), ParseError);
}
