#include "ftcons/matrix.hpp"

#include <cmath>
#include <stdexcept>

namespace ftcons {

Matrix::Matrix(std::size_t rows, std::size_t cols, Real fill)
    : rows_(rows), cols_(cols), values_(rows * cols, fill) {}

Matrix Matrix::from_rows(const std::vector<std::vector<Real>>& rows) {
    if (rows.empty()) {
        return {};
    }
    Matrix out(rows.size(), rows.front().size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        if (rows[r].size() != out.cols_) {
            throw std::invalid_argument("Matrix::from_rows: ragged rows");
        }
        for (std::size_t c = 0; c < out.cols_; ++c) {
            out(r, c) = rows[r][c];
        }
    }
    return out;
}

Matrix Matrix::column(std::span<const Real> values) {
    Matrix out(values.size(), 1);
    for (std::size_t i = 0; i < values.size(); ++i) {
        out(i, 0) = values[i];
    }
    return out;
}

Matrix Matrix::column(std::initializer_list<Real> values) {
    return column(std::span<const Real>(values.begin(), values.size()));
}

std::vector<Real> Matrix::column_values(std::size_t c) const {
    std::vector<Real> out(rows_);
    for (std::size_t r = 0; r < rows_; ++r) {
        out[r] = (*this)(r, c);
    }
    return out;
}

bool Matrix::all_finite() const noexcept {
    for (Real v : values_) {
        if (!std::isfinite(v)) {
            return false;
        }
    }
    return true;
}

Matrix& Matrix::add_scaled(Real scale, const Matrix& other) {
    if (other.rows_ != rows_ || other.cols_ != cols_) {
        throw std::invalid_argument("Matrix::add_scaled: shape mismatch");
    }
    for (std::size_t i = 0; i < values_.size(); ++i) {
        values_[i] += scale * other.values_[i];
    }
    return *this;
}

}  // namespace ftcons
