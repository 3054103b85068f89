#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

namespace ftcons {

using Real = double;

/// Dense row-major matrix. Agent states use one row per agent (n x m); the
/// Laplacian uses it as an n x n matrix.
class Matrix {
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, Real fill = 0.0);

    static Matrix from_rows(const std::vector<std::vector<Real>>& rows);
    /// n x 1 matrix, the scalar-agent case.
    static Matrix column(std::span<const Real> values);
    static Matrix column(std::initializer_list<Real> values);

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    bool empty() const noexcept { return values_.empty(); }

    Real& operator()(std::size_t r, std::size_t c) { return values_[r * cols_ + c]; }
    Real operator()(std::size_t r, std::size_t c) const { return values_[r * cols_ + c]; }

    std::span<Real> row(std::size_t r) { return {values_.data() + r * cols_, cols_}; }
    std::span<const Real> row(std::size_t r) const { return {values_.data() + r * cols_, cols_}; }

    std::span<Real> data() noexcept { return values_; }
    std::span<const Real> data() const noexcept { return values_; }

    /// Column c copied out, e.g. the scalar states of every agent when m = 1.
    std::vector<Real> column_values(std::size_t c) const;

    bool all_finite() const noexcept;

    /// this += scale * other
    Matrix& add_scaled(Real scale, const Matrix& other);

    bool operator==(const Matrix&) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<Real> values_;
};

/// Stacked agent states r (n x m) at time t.
struct AgentState {
    Real t = 0.0;
    Matrix r;
};

}  // namespace ftcons
