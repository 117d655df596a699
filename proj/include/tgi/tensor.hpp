#pragma once

// Dense tensors with a row-mode / column-mode split and the Einstein product.
//
// A tensor over M(p) x N(s) is stored as its (prod M) x (prod N) matricization
// in row-major order, so the flat entry array is the row-major lexicographic
// enumeration over (i_1..i_p, j_1..j_s) with the first mode varying slowest.

#include <Eigen/Core>

#include <algorithm>
#include <complex>
#include <cstddef>
#include <functional>
#include <initializer_list>
#include <numeric>
#include <span>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "tgi/errors.hpp"

namespace tgi {

using Index = Eigen::Index;
using Complex = std::complex<double>;

template <typename Scalar>
using Matrix = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic>;

template <typename Scalar>
using RealOf = typename Eigen::NumTraits<Scalar>::Real;

/// Ordered row-mode and column-mode extents.
class TensorShape {
public:
    TensorShape() = default;

    TensorShape(std::vector<Index> row_modes, std::vector<Index> col_modes)
        : row_modes_(std::move(row_modes)), col_modes_(std::move(col_modes)) {
        if (row_modes_.empty() && col_modes_.empty()) {
            throw ShapeMismatch("tensor shape needs at least one mode");
        }
        for (Index e : row_modes_) check_extent(e);
        for (Index e : col_modes_) check_extent(e);
    }

    /// Square shape N(s) x N(s).
    static TensorShape square(std::vector<Index> modes) {
        auto copy = modes;
        return TensorShape(std::move(modes), std::move(copy));
    }

    const std::vector<Index>& row_modes() const noexcept { return row_modes_; }
    const std::vector<Index>& col_modes() const noexcept { return col_modes_; }

    Index row_count() const noexcept { return product(row_modes_); }
    Index col_count() const noexcept { return product(col_modes_); }
    Index size() const noexcept { return row_count() * col_count(); }

    bool is_square() const noexcept { return row_modes_ == col_modes_; }

    TensorShape transposed() const { return TensorShape(col_modes_, row_modes_); }

    /// All extents joined with 'x', e.g. "2x3x2x3".
    std::string to_string() const {
        std::ostringstream os;
        bool first = true;
        for (const auto* modes : {&row_modes_, &col_modes_}) {
            for (Index e : *modes) {
                if (!first) os << 'x';
                os << e;
                first = false;
            }
        }
        return os.str();
    }

    friend bool operator==(const TensorShape&, const TensorShape&) = default;

private:
    static void check_extent(Index e) {
        if (e < 1) throw ShapeMismatch("tensor extents must be >= 1");
    }
    static Index product(const std::vector<Index>& modes) noexcept {
        return std::accumulate(modes.begin(), modes.end(), Index{1}, std::multiplies<>());
    }

    std::vector<Index> row_modes_;
    std::vector<Index> col_modes_;
};

/// Row-major mixed-radix encoding of a multi-index.
inline Index linear_index(std::span<const Index> extents, std::span<const Index> idx) {
    if (extents.size() != idx.size()) throw ShapeMismatch("multi-index has wrong arity");
    Index lin = 0;
    for (std::size_t m = 0; m < extents.size(); ++m) {
        if (idx[m] < 0 || idx[m] >= extents[m]) throw ShapeMismatch("multi-index out of range");
        lin = lin * extents[m] + idx[m];
    }
    return lin;
}

/// Dense tensor over row modes M(p) and column modes N(s).
template <typename Scalar_>
class Tensor {
public:
    using Scalar = Scalar_;
    using Real = RealOf<Scalar>;
    using Storage = Eigen::Matrix<Scalar, Eigen::Dynamic, Eigen::Dynamic, Eigen::RowMajor>;

    Tensor() = default;

    /// Zero tensor of the given shape.
    explicit Tensor(TensorShape shape)
        : shape_(std::move(shape)), data_(Storage::Zero(shape_.row_count(), shape_.col_count())) {}

    /// Entries in row-major lexicographic order.
    Tensor(TensorShape shape, std::span<const Scalar> entries) : Tensor(std::move(shape)) {
        if (static_cast<Index>(entries.size()) != shape_.size()) {
            throw ShapeMismatch("entry count does not match tensor shape");
        }
        std::copy(entries.begin(), entries.end(), data_.data());
    }

    Tensor(TensorShape shape, std::initializer_list<Scalar> entries)
        : Tensor(std::move(shape), std::span<const Scalar>(entries.begin(), entries.size())) {}

    static Tensor zeros(TensorShape shape) { return Tensor(std::move(shape)); }

    const TensorShape& shape() const noexcept { return shape_; }
    Index size() const noexcept { return data_.size(); }
    bool is_square() const noexcept { return shape_.is_square(); }

    std::span<const Scalar> entries() const noexcept {
        return {data_.data(), static_cast<std::size_t>(data_.size())};
    }
    std::span<Scalar> entries() noexcept {
        return {data_.data(), static_cast<std::size_t>(data_.size())};
    }

    /// Row-major (matricized) view of the storage.
    const Storage& storage() const noexcept { return data_; }

    Scalar& operator()(std::span<const Index> row_idx, std::span<const Index> col_idx) {
        return data_(linear_index(shape_.row_modes(), row_idx), linear_index(shape_.col_modes(), col_idx));
    }
    const Scalar& operator()(std::span<const Index> row_idx, std::span<const Index> col_idx) const {
        return data_(linear_index(shape_.row_modes(), row_idx), linear_index(shape_.col_modes(), col_idx));
    }

    /// Full multi-index (i_1..i_p, j_1..j_s), zero based.
    const Scalar& at(std::initializer_list<Index> idx) const {
        auto [r, c] = split(idx);
        return data_(r, c);
    }
    Scalar& at(std::initializer_list<Index> idx) {
        auto [r, c] = split(idx);
        return data_(r, c);
    }

    template <typename Other>
    Tensor<Other> cast() const {
        Tensor<Other> out(shape_);
        for (Index i = 0; i < size(); ++i) out.entries()[i] = static_cast<Other>(data_.data()[i]);
        return out;
    }

    Tensor& operator+=(const Tensor& other) {
        require_same_shape(other);
        data_ += other.data_;
        return *this;
    }
    Tensor& operator-=(const Tensor& other) {
        require_same_shape(other);
        data_ -= other.data_;
        return *this;
    }
    Tensor& operator*=(const Scalar& s) {
        data_ *= s;
        return *this;
    }

    friend bool operator==(const Tensor& a, const Tensor& b) { return a.shape_ == b.shape_ && a.data_ == b.data_; }

private:
    template <typename S>
    friend Tensor<S> dematricize(const Matrix<S>& m, const TensorShape& shape);
    template <typename S>
    friend Tensor<S> einstein_product(const Tensor<S>& a, const Tensor<S>& b);
    template <typename S>
    friend Tensor<S> conj_transpose(const Tensor<S>& d);

    std::pair<Index, Index> split(std::initializer_list<Index> idx) const {
        const std::size_t p = shape_.row_modes().size();
        if (idx.size() != p + shape_.col_modes().size()) throw ShapeMismatch("multi-index has wrong arity");
        std::span<const Index> all(idx.begin(), idx.size());
        return {linear_index(shape_.row_modes(), all.first(p)), linear_index(shape_.col_modes(), all.subspan(p))};
    }

    void require_same_shape(const Tensor& other) const {
        if (!(shape_ == other.shape_)) {
            throw ShapeMismatch("shapes differ: " + shape_.to_string() + " vs " + other.shape_.to_string());
        }
    }

    TensorShape shape_;
    Storage data_;
};

using DenseTensor = Tensor<Complex>;
using RealTensor = Tensor<double>;

template <typename Scalar>
Matrix<Scalar> matricize(const Tensor<Scalar>& d) {
    return d.storage();
}

template <typename Scalar>
Tensor<Scalar> dematricize(const Matrix<Scalar>& m, const TensorShape& shape) {
    if (m.rows() != shape.row_count() || m.cols() != shape.col_count()) {
        throw ShapeMismatch("matrix is " + std::to_string(m.rows()) + "x" + std::to_string(m.cols()) +
                            " but shape " + shape.to_string() + " needs " + std::to_string(shape.row_count()) + "x" +
                            std::to_string(shape.col_count()));
    }
    Tensor<Scalar> out;
    out.shape_ = shape;
    out.data_ = m;
    return out;
}

template <typename Scalar>
Tensor<Scalar> operator+(Tensor<Scalar> a, const Tensor<Scalar>& b) {
    a += b;
    return a;
}

template <typename Scalar>
Tensor<Scalar> operator-(Tensor<Scalar> a, const Tensor<Scalar>& b) {
    a -= b;
    return a;
}

template <typename Scalar>
Tensor<Scalar> operator-(Tensor<Scalar> a) {
    a *= Scalar(-1);
    return a;
}

template <typename Scalar>
Tensor<Scalar> operator*(const Scalar& s, Tensor<Scalar> a) {
    a *= s;
    return a;
}

template <typename Scalar>
Tensor<Scalar> add(const Tensor<Scalar>& s, const Tensor<Scalar>& d) {
    return s + d;
}

/// Contracts the column modes of `a` with the row modes of `b`.
template <typename Scalar>
Tensor<Scalar> einstein_product(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
    if (a.shape().col_modes() != b.shape().row_modes()) {
        throw ShapeMismatch("Einstein product contracts mismatched modes: " + a.shape().to_string() + " * " +
                            b.shape().to_string());
    }
    std::vector<Index> rows = a.shape().row_modes();
    std::vector<Index> cols = b.shape().col_modes();
    if (rows.empty() && cols.empty()) rows.push_back(1);
    Tensor<Scalar> out;
    out.shape_ = TensorShape(std::move(rows), std::move(cols));
    out.data_.noalias() = a.data_ * b.data_;
    return out;
}

template <typename Scalar>
Tensor<Scalar> operator*(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
    return einstein_product(a, b);
}

template <typename Scalar>
Tensor<Scalar> conj_transpose(const Tensor<Scalar>& d) {
    Tensor<Scalar> out;
    out.shape_ = d.shape().transposed();
    out.data_ = d.data_.adjoint();
    return out;
}

template <typename Scalar>
Tensor<Scalar> identity_tensor(const std::vector<Index>& modes) {
    if (modes.empty()) throw ShapeMismatch("identity tensor needs at least one mode");
    auto shape = TensorShape::square(modes);
    return dematricize<Scalar>(Matrix<Scalar>::Identity(shape.row_count(), shape.col_count()), shape);
}

/// Identity over the column modes of `d`, i.e. the I that right-multiplies it.
template <typename Scalar>
Tensor<Scalar> identity_like(const Tensor<Scalar>& d) {
    return identity_tensor<Scalar>(d.shape().col_modes());
}

template <typename Scalar>
Tensor<Scalar> tensor_power(const Tensor<Scalar>& d, int k) {
    if (!d.is_square()) throw NotSquare("tensor power needs a square tensor, got " + d.shape().to_string());
    if (k < 0) throw PreconditionViolated("tensor power exponent must be nonnegative");
    Tensor<Scalar> out = identity_like(d);
    for (int i = 0; i < k; ++i) out = einstein_product(d, out);
    return out;
}

template <typename Scalar>
RealOf<Scalar> frobenius_norm(const Tensor<Scalar>& d) {
    return d.storage().norm();
}

/// Number of entries with magnitude strictly above `tol`.
template <typename Scalar>
Index nnz(const Tensor<Scalar>& d, RealOf<Scalar> tol = 0) {
    if (tol < 0) throw PreconditionViolated("nnz tolerance must be nonnegative");
    return std::count_if(d.entries().begin(), d.entries().end(), [tol](const Scalar& x) { return std::abs(x) > tol; });
}

template <typename Scalar>
bool all_finite(const Tensor<Scalar>& d) {
    return d.storage().allFinite();
}

/// ||a - b||_F <= tol * max(1, ||a||_F).
template <typename Scalar>
bool approx_equal(const Tensor<Scalar>& a, const Tensor<Scalar>& b, RealOf<Scalar> tol) {
    if (!(a.shape() == b.shape())) return false;
    return (a.storage() - b.storage()).norm() <= tol * std::max<RealOf<Scalar>>(1, frobenius_norm(a));
}

/// ||a - b||_F / ||b||_F, or the absolute difference when b is zero.
template <typename Scalar>
RealOf<Scalar> relative_difference(const Tensor<Scalar>& a, const Tensor<Scalar>& b) {
    if (!(a.shape() == b.shape())) throw ShapeMismatch("cannot compare tensors of different shapes");
    const auto num = (a.storage() - b.storage()).norm();
    const auto den = b.storage().norm();
    return den > 0 ? num / den : num;
}

}  // namespace tgi
