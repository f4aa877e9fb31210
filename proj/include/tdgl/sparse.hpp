#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace tdgl {

/// Square or rectangular matrix in compressed-row layout. Column indices
/// are sorted and unique within each row.
class CsrMatrix {
public:
    CsrMatrix() = default;

    /// Takes ownership of a prebuilt pattern; values start at zero.
    CsrMatrix(std::size_t rows, std::size_t cols, std::vector<int> row_ptr, std::vector<int> col_idx);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    std::size_t nnz() const { return col_idx_.size(); }

    std::span<const int> row_ptr() const { return row_ptr_; }
    std::span<const int> col_idx() const { return col_idx_; }
    std::span<const double> values() const { return values_; }
    std::span<double> values() { return values_; }

    /// Position of (i, j) in the value array, or -1 when outside the pattern.
    long find(int i, int j) const;
    /// Adds v at (i, j); throws std::out_of_range when outside the pattern.
    void add(int i, int j, double v);
    double at(int i, int j) const;

    void set_zero();
    void multiply(std::span<const double> x, std::span<double> y) const;
    std::vector<double> multiply(std::span<const double> x) const;

    /// Leading square sub-block [r0, r0+n) × [c0, c0+m).
    CsrMatrix block(std::size_t r0, std::size_t n, std::size_t c0, std::size_t m) const;

    bool pattern_symmetric() const;
    /// max |a_ij - a_ji| over the pattern.
    double asymmetry() const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<int> row_ptr_{0};
    std::vector<int> col_idx_;
    std::vector<double> values_;
};

/// Collects (row, col) pairs and freezes them into a CsrMatrix pattern.
class SparsityBuilder {
public:
    SparsityBuilder(std::size_t rows, std::size_t cols) : rows_(rows), cols_(cols), entries_(rows) {}

    void insert(int i, int j) { entries_[i].push_back(j); }
    /// Inserts the full block rows × cols.
    void insert_block(std::span<const int> rows, std::span<const int> cols);

    CsrMatrix build() const;

private:
    std::size_t rows_;
    std::size_t cols_;
    std::vector<std::vector<int>> entries_;
};

double dot(std::span<const double> a, std::span<const double> b);
double norm2(std::span<const double> a);

}  // namespace tdgl
