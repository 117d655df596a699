#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "tgi/tensor.hpp"

namespace tgi::test {

/// Odometer over a list of extents, first mode slowest.
class MultiIndex {
public:
    explicit MultiIndex(std::vector<Index> extents) : extents_(std::move(extents)), idx_(extents_.size(), 0) {}

    const std::vector<Index>& operator*() const { return idx_; }

    bool next() {
        for (std::size_t m = idx_.size(); m-- > 0;) {
            if (++idx_[m] < extents_[m]) return true;
            idx_[m] = 0;
        }
        return false;
    }

private:
    std::vector<Index> extents_;
    std::vector<Index> idx_;
};

/// Flat row-major offset of (row multi-index, column multi-index), written out directly.
inline Index flat_offset(const TensorShape& s, const std::vector<Index>& r, const std::vector<Index>& c) {
    Index off = 0;
    for (std::size_t m = 0; m < r.size(); ++m) off = off * s.row_modes()[m] + r[m];
    for (std::size_t m = 0; m < c.size(); ++m) off = off * s.col_modes()[m] + c[m];
    return off;
}

/// Einstein product by explicit summation over every multi-index.
inline DenseTensor loop_contraction(const DenseTensor& a, const DenseTensor& b) {
    std::vector<Index> rows = a.shape().row_modes();
    std::vector<Index> cols = b.shape().col_modes();
    if (rows.empty() && cols.empty()) rows.push_back(1);
    DenseTensor out(TensorShape(rows, cols));
    MultiIndex i(a.shape().row_modes());
    do {
        MultiIndex l(b.shape().col_modes());
        do {
            Complex acc = 0;
            MultiIndex n(a.shape().col_modes());
            do {
                acc += a.entries()[flat_offset(a.shape(), *i, *n)] * b.entries()[flat_offset(b.shape(), *n, *l)];
            } while (n.next());
            out.entries()[flat_offset(out.shape(), a.shape().row_modes().empty() && cols.empty() ? std::vector<Index>{0} : *i, *l)] = acc;
        } while (l.next());
    } while (i.next());
    return out;
}

inline std::vector<Index> random_modes(std::mt19937_64& gen, int count, Index max_extent) {
    std::uniform_int_distribution<Index> ext(1, max_extent);
    std::vector<Index> m(static_cast<std::size_t>(count));
    for (auto& e : m) e = ext(gen);
    return m;
}

}  // namespace tgi::test
