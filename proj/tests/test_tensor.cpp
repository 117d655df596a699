#include <doctest.h>

#include <random>

#include "support.hpp"
#include "tgi/problems.hpp"
#include "tgi/tensor.hpp"

using namespace tgi;

TEST_CASE("shape bookkeeping") {
    const TensorShape s({2, 3}, {4});
    CHECK(s.row_count() == 6);
    CHECK(s.col_count() == 4);
    CHECK(s.size() == 24);
    CHECK_FALSE(s.is_square());
    CHECK(s.transposed() == TensorShape({4}, {2, 3}));
    CHECK(s.to_string() == "2x3x4");
    CHECK_THROWS_AS(TensorShape({2, 0}, {1}), ShapeMismatch);
    CHECK_THROWS_AS(TensorShape({}, {}), ShapeMismatch);
}

TEST_CASE("entries are row-major with the first mode slowest") {
    std::vector<Complex> e(12);
    for (int i = 0; i < 12; ++i) e[i] = double(i);
    const DenseTensor t(TensorShape({2, 3}, {2}), e);
    CHECK(t.at({0, 0, 1}) == Complex(1));
    CHECK(t.at({0, 1, 0}) == Complex(2));
    CHECK(t.at({1, 0, 0}) == Complex(6));
    CHECK(t.at({1, 2, 1}) == Complex(11));
    CHECK_THROWS_AS(t.at({2, 0, 0}), ShapeMismatch);
    CHECK_THROWS_AS(DenseTensor(TensorShape({2}, {2}), {1.0, 2.0, 3.0}), ShapeMismatch);
}

TEST_CASE("Einstein product matches the loop contraction") {
    std::mt19937_64 gen(11);
    for (int trial = 0; trial < 20; ++trial) {
        const auto m = test::random_modes(gen, 1 + trial % 3, 3);
        const auto n = test::random_modes(gen, 1 + (trial / 3) % 2, 3);
        const auto l = test::random_modes(gen, trial % 3, 3);
        const auto a = random_tensor(TensorShape(m, n), 100 + trial);
        const auto b = random_tensor(TensorShape(n, l), 200 + trial);
        const auto fast = a * b;
        const auto slow = test::loop_contraction(a, b);
        CHECK(fast.shape() == slow.shape());
        CHECK(relative_difference(fast, slow) <= 1e-13);
    }
}

TEST_CASE("product rejects mismatched contraction modes") {
    const DenseTensor a(TensorShape({2}, {3}));
    const DenseTensor b(TensorShape({2}, {3}));
    CHECK_THROWS_AS(a * b, ShapeMismatch);
    CHECK_THROWS_AS(a + DenseTensor(TensorShape({3}, {2})), ShapeMismatch);
}

TEST_CASE("conjugate transpose swaps modes and conjugates") {
    const auto a = random_tensor(TensorShape({2, 2}, {3}), 5);
    const auto h = conj_transpose(a);
    CHECK(h.shape() == TensorShape({3}, {2, 2}));
    CHECK(h.at({2, 1, 0}) == std::conj(a.at({1, 0, 2})));
    CHECK(conj_transpose(h) == a);
}

TEST_CASE("powers, identity and norms") {
    const auto d = random_tensor(TensorShape::square({2, 2}), 3);
    const auto id = identity_like(d);
    CHECK(tensor_power(d, 0) == id);
    CHECK(approx_equal(tensor_power(d, 3), d * d * d, 1e-13));
    CHECK(approx_equal(id * d, d, 0.0));
    CHECK_THROWS_AS(tensor_power(DenseTensor(TensorShape({2}, {3})), 2), NotSquare);
    CHECK_THROWS_AS(tensor_power(d, -1), PreconditionViolated);

    const DenseTensor v(TensorShape({2}, {}), {Complex(3, 0), Complex(0, 4)});
    CHECK(frobenius_norm(v) == doctest::Approx(5.0));
    CHECK(nnz(v) == 2);
    CHECK(nnz(DenseTensor(TensorShape({3}, {3}))) == 0);
}

TEST_CASE("matricization is a bijection and an algebra homomorphism") {
    const auto a = random_tensor(TensorShape({2, 3}, {3, 2}), 7);
    const auto b = random_tensor(TensorShape({3, 2}, {4}), 8);
    CHECK(dematricize<Complex>(matricize(a), a.shape()) == a);
    const Matrix<Complex> lhs = matricize(a * b);
    const Matrix<Complex> rhs = matricize(a) * matricize(b);
    CHECK((lhs - rhs).norm() <= 1e-13 * rhs.norm());
    CHECK_THROWS_AS(dematricize<Complex>(matricize(a), TensorShape({6}, {5})), ShapeMismatch);
}
