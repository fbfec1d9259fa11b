#pragma once

#include <cstddef>
#include <functional>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace qmlx {

/// Dense row-major matrix of doubles. Storage only; no linear algebra.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return data_.empty(); }

    double at(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }
    double& at(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }

    std::span<const double> row(std::size_t r) const {
        return {data_.data() + r * cols_, cols_};
    }
    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    /// Copy with one column removed.
    Matrix drop_column(std::size_t col) const;
    /// Copy containing the given rows, in order.
    Matrix select_rows(std::span<const int> indices) const;
    std::vector<double> column(std::size_t col) const;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

inline Matrix Matrix::from_rows(const std::vector<std::vector<double>>& rows) {
    if (rows.empty()) return {};
    Matrix m(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != m.cols())
            throw std::invalid_argument("Matrix::from_rows: ragged input");
        for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = rows[r][c];
    }
    return m;
}

inline Matrix Matrix::drop_column(std::size_t col) const {
    if (col >= cols_) throw std::out_of_range("Matrix::drop_column: column out of range");
    Matrix m(rows_, cols_ - 1);
    for (std::size_t r = 0; r < rows_; ++r) {
        std::size_t k = 0;
        for (std::size_t c = 0; c < cols_; ++c) {
            if (c == col) continue;
            m.at(r, k++) = at(r, c);
        }
    }
    return m;
}

inline Matrix Matrix::select_rows(std::span<const int> indices) const {
    Matrix m(indices.size(), cols_);
    for (std::size_t r = 0; r < indices.size(); ++r)
        for (std::size_t c = 0; c < cols_; ++c) m.at(r, c) = at(static_cast<std::size_t>(indices[r]), c);
    return m;
}

inline std::vector<double> Matrix::column(std::size_t col) const {
    std::vector<double> v(rows_);
    for (std::size_t r = 0; r < rows_; ++r) v[r] = at(r, col);
    return v;
}

/// Run fn(i) for i in [0, n). Work is split into contiguous chunks, one per
/// worker, with disjoint writes expected from the caller; results must not
/// depend on the schedule. workers <= 1 runs inline.
void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& fn);

}  // namespace qmlx
