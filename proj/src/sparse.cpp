#include "tdgl/sparse.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>
#include <string>

namespace tdgl {

CsrMatrix::CsrMatrix(std::size_t rows, std::size_t cols, std::vector<int> row_ptr,
                     std::vector<int> col_idx)
    : rows_(rows), cols_(cols), row_ptr_(std::move(row_ptr)), col_idx_(std::move(col_idx)),
      values_(col_idx_.size(), 0.0)
{
    if (row_ptr_.size() != rows_ + 1 || static_cast<std::size_t>(row_ptr_.back()) != col_idx_.size()) {
        throw std::invalid_argument("inconsistent CSR row offsets");
    }
}

long CsrMatrix::find(int i, int j) const
{
    const auto first = col_idx_.begin() + row_ptr_[i];
    const auto last = col_idx_.begin() + row_ptr_[i + 1];
    const auto it = std::lower_bound(first, last, j);
    if (it == last || *it != j) return -1;
    return it - col_idx_.begin();
}

void CsrMatrix::add(int i, int j, double v)
{
    const long p = find(i, j);
    if (p < 0) {
        throw std::out_of_range("entry (" + std::to_string(i) + ", " + std::to_string(j) +
                                ") outside sparsity pattern");
    }
    values_[p] += v;
}

double CsrMatrix::at(int i, int j) const
{
    const long p = find(i, j);
    return p < 0 ? 0.0 : values_[p];
}

void CsrMatrix::set_zero()
{
    std::fill(values_.begin(), values_.end(), 0.0);
}

void CsrMatrix::multiply(std::span<const double> x, std::span<double> y) const
{
    for (std::size_t i = 0; i < rows_; ++i) {
        double s = 0.0;
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) s += values_[p] * x[col_idx_[p]];
        y[i] = s;
    }
}

std::vector<double> CsrMatrix::multiply(std::span<const double> x) const
{
    std::vector<double> y(rows_);
    multiply(x, y);
    return y;
}

CsrMatrix CsrMatrix::block(std::size_t r0, std::size_t n, std::size_t c0, std::size_t m) const
{
    std::vector<int> ptr{0};
    std::vector<int> cols;
    std::vector<double> vals;
    for (std::size_t i = r0; i < r0 + n; ++i) {
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            const auto j = static_cast<std::size_t>(col_idx_[p]);
            if (j >= c0 && j < c0 + m) {
                cols.push_back(static_cast<int>(j - c0));
                vals.push_back(values_[p]);
            }
        }
        ptr.push_back(static_cast<int>(cols.size()));
    }
    CsrMatrix out(n, m, std::move(ptr), std::move(cols));
    std::copy(vals.begin(), vals.end(), out.values_.begin());
    return out;
}

bool CsrMatrix::pattern_symmetric() const
{
    if (rows_ != cols_) return false;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            if (find(col_idx_[p], static_cast<int>(i)) < 0) return false;
        }
    }
    return true;
}

double CsrMatrix::asymmetry() const
{
    double worst = 0.0;
    for (std::size_t i = 0; i < rows_; ++i) {
        for (int p = row_ptr_[i]; p < row_ptr_[i + 1]; ++p) {
            worst = std::max(worst, std::abs(values_[p] - at(col_idx_[p], static_cast<int>(i))));
        }
    }
    return worst;
}

void SparsityBuilder::insert_block(std::span<const int> rows, std::span<const int> cols)
{
    for (int i : rows) {
        for (int j : cols) entries_[i].push_back(j);
    }
}

CsrMatrix SparsityBuilder::build() const
{
    std::vector<int> ptr{0};
    std::vector<int> cols;
    for (const auto& row : entries_) {
        std::vector<int> r = row;
        std::sort(r.begin(), r.end());
        r.erase(std::unique(r.begin(), r.end()), r.end());
        cols.insert(cols.end(), r.begin(), r.end());
        ptr.push_back(static_cast<int>(cols.size()));
    }
    return CsrMatrix(rows_, cols_, std::move(ptr), std::move(cols));
}

double dot(std::span<const double> a, std::span<const double> b)
{
    double s = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
    return s;
}

double norm2(std::span<const double> a)
{
    return std::sqrt(dot(a, a));
}

}  // namespace tdgl
