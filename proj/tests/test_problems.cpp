#include <doctest.h>

#include "tgi/problems.hpp"

using namespace tgi;

TEST_CASE("Dirichlet tensor structure") {
    const auto d = dirichlet_poisson(3);
    CHECK(d.shape() == TensorShape::square({3, 3}));
    CHECK(d.at({1, 1, 1, 1}) == Complex(24));
    CHECK(d.at({1, 1, 1, 0}) == Complex(-4));
    CHECK(d.at({1, 1, 0, 1}) == Complex(-2));
    CHECK(d.at({1, 1, 0, 0}) == Complex(-1));
    CHECK(d.at({0, 0, 2, 2}) == Complex(0));
    CHECK(tensor_index(d) == 0);
    for (Index n = 3; n <= 6; ++n) CHECK(nnz(dirichlet_poisson(n)) == (3 * n - 2) * (3 * n - 2));
    CHECK_THROWS_AS(dirichlet_poisson(2), InvalidSize);
}

TEST_CASE("nilpotent augmentation sets the index") {
    for (Index n = 3; n <= 5; ++n) {
        const auto base = dirichlet_poisson(n);
        for (auto b : {NilpotentBlock::N1, NilpotentBlock::N2, NilpotentBlock::N3}) {
            const auto d = augment_nilpotent(base, b);
            CHECK(d.shape().row_count() == n * n + static_cast<Index>(b));
            CHECK(tensor_index(d) == static_cast<int>(b));
            CHECK(nnz(d) == nnz(base) + static_cast<Index>(b) - 1);
        }
    }
}

TEST_CASE("augmented shapes use the most balanced factorization") {
    CHECK(balanced_factorization(6403, 2) == std::vector<Index>{19, 337});
    CHECK(balanced_factorization(7400, 2) == std::vector<Index>{74, 100});
    CHECK(balanced_factorization(10005, 2) == std::vector<Index>{87, 115});
    CHECK(balanced_factorization(67, 2).empty());
    CHECK(balanced_factorization(24, 3) == std::vector<Index>{2, 3, 4});
    const auto d = augment_nilpotent(dirichlet_poisson(8), NilpotentBlock::N1);
    CHECK(d.shape() == TensorShape::square({67}));
    CHECK_THROWS_AS(augment_nilpotent(dirichlet_poisson(8), NilpotentBlock::N1, ShapePolicy::Strict),
                    FactorizationImpossible);
    CHECK(augment_nilpotent(dirichlet_poisson(8), NilpotentBlock::N2).shape() == TensorShape::square({4, 17}));
}

TEST_CASE("Drazin inverse vanishes on the nilpotent block") {
    const auto d = augment_nilpotent(dirichlet_poisson(3), NilpotentBlock::N2);
    const auto dd = drazin_inverse(d).storage();
    CHECK(dd.bottomRightCorner(4, 4).norm() <= 1e-12);
    CHECK(dd.topRightCorner(9, 4).norm() <= 1e-12);
}

TEST_CASE("Neumann tensor is a singular graph Laplacian of index one") {
    const auto d = neumann_poisson(8);
    CHECK(tensor_index(d) == 1);
    CHECK(d.storage().rowwise().sum().norm() == 0.0);
    CHECK(d.at({0, 0, 0, 0}) == Complex(2));
    CHECK(d.at({0, 3, 0, 3}) == Complex(3));
    CHECK(d.at({3, 3, 3, 3}) == Complex(4));
    const auto x = drazin_inverse(d);
    CHECK(approx_equal(d * x, x * d, 1e-10));
    CHECK(approx_equal(x * d * x, x, 1e-10));
    CHECK(approx_equal(d * x * d, d, 1e-10));
    CHECK_THROWS_AS(neumann_poisson(2), InvalidSize);
}

TEST_CASE("seeded random tensors") {
    const TensorShape s = TensorShape::square({2, 3});
    CHECK(random_tensor(s, 5) == random_tensor(s, 5));
    CHECK_FALSE(random_tensor(s, 5) == random_tensor(s, 6));
    const auto h = random_tensor(s, 5, RandomKind::Hermitian);
    CHECK(frobenius_norm(h - conj_transpose(h)) == 0.0);
    for (std::uint64_t seed = 0; seed < 50; ++seed) CHECK(tensor_index(random_tensor(s, seed, RandomKind::IndexOne)) == 1);
    for (int nil = 1; nil <= 3; ++nil) CHECK(tensor_index(random_tensor(s, 9, RandomKind::CoreNilpotent, nil)) == nil);
    CHECK_THROWS_AS(random_tensor(TensorShape({2}, {3}), 1, RandomKind::Hermitian), NotSquare);
}

TEST_CASE("random inner and outer inverses") {
    const auto d = random_tensor(TensorShape::square({2, 2}), 8, RandomKind::CoreNilpotent, 2);
    CHECK(is_inner(d, random_inner_inverse(d, 1)).satisfied(1e-10));
    CHECK(is_outer(d, random_outer_inverse(d, 1)).satisfied(1e-10));
    CHECK(is_outer(d, random_outer_inverse(d, 2, 4)).satisfied(1e-10));
}

TEST_CASE("range right-hand sides") {
    const auto d = augment_nilpotent(dirichlet_poisson(3), NilpotentBlock::N1);
    const auto b = range_rhs(d, 3, 4);
    CHECK(b.shape() == TensorShape(d.shape().col_modes(), {}));
    CHECK(frobenius_norm(b) == doctest::Approx(1.0));
    CHECK(range_rhs(d, 3, 4) == b);
    CHECK(range_rhs(d, 1, 4, {2}).shape() == TensorShape(d.shape().col_modes(), {2}));
}

TEST_CASE("problem specs") {
    CHECK(make_problem("fixture").d.shape() == TensorShape::square({2, 3}));
    const auto p = make_problem("dirichlet:n=4:block=N2");
    CHECK(p.label == "dirichlet:n=4:block=N2");
    CHECK(tensor_index(p.d) == 4);
    CHECK(make_problem("neumann:n=5").d.shape() == TensorShape::square({5, 5}));
    CHECK(make_problem("random:modes=2,2:seed=3:kind=hermitian").d == random_tensor(TensorShape::square({2, 2}), 3, RandomKind::Hermitian));
    CHECK_THROWS_AS(make_problem("poisson"), ParseError);
    CHECK_THROWS_AS(make_problem("dirichlet:n=x"), ParseError);
    CHECK_THROWS_AS(make_problem("dirichlet:n=4:colour=red"), ParseError);
    CHECK_THROWS_AS(make_problem("dirichlet:n=4:block=N7"), ParseError);
    CHECK_THROWS_AS(make_problem("dirichlet:n=8:block=N1:policy=strict"), FactorizationImpossible);
}
