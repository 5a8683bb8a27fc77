#pragma once

#include <cstddef>
#include <initializer_list>
#include <span>
#include <vector>

#include "pa/errors.hpp"

namespace pa {

/// Dense row-major matrix of doubles. Rows are observations, columns are features.
class Matrix {
public:
    Matrix() = default;

    Matrix(std::size_t rows, std::size_t cols, double fill = 0.0)
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}

    static Matrix from_rows(std::initializer_list<std::initializer_list<double>> rows);
    static Matrix from_rows(const std::vector<std::vector<double>>& rows);

    std::size_t rows() const { return rows_; }
    std::size_t cols() const { return cols_; }
    bool empty() const { return rows_ == 0; }

    double& operator()(std::size_t r, std::size_t c) { return data_[r * cols_ + c]; }
    double operator()(std::size_t r, std::size_t c) const { return data_[r * cols_ + c]; }

    std::span<double> row(std::size_t r) { return {data_.data() + r * cols_, cols_}; }
    std::span<const double> row(std::size_t r) const { return {data_.data() + r * cols_, cols_}; }

    /// Appends a row; fixes the column count on first append.
    void append_row(std::span<const double> values);

    /// Returns a matrix holding the selected rows, in the given order.
    Matrix select_rows(std::span<const std::size_t> indices) const;

    /// Vertical concatenation. Either side may be empty.
    static Matrix vstack(const Matrix& top, const Matrix& bottom);

    const std::vector<double>& data() const { return data_; }
    std::vector<double>& data() { return data_; }

    bool operator==(const Matrix& other) const = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<double> data_;
};

/// Squared Euclidean distance between two points of equal dimension.
double squared_distance(std::span<const double> a, std::span<const double> b);

} // namespace pa
