// SPDX-License-Identifier: Apache-2.0
//
// csikit - phase sanitization for OFDM channel state information
// Copyright (C) 2026 The csikit Authors
//
// Licensed under the Apache License, Version 2.0 (the "License");
// you may not use this file except in compliance with the License.
// You may obtain a copy of the License at
// http://www.apache.org/licenses/LICENSE-2.0
//
// Unless required by applicable law or agreed to in writing, software
// distributed under the License is distributed on an "AS IS" BASIS,
// WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
// See the License for the specific language governing permissions and
// limitations under the License.
// ------------------------------------------------------------------------

#pragma once

#include <cassert>
#include <complex>
#include <cstddef>
#include <span>
#include <utility>
#include <vector>

namespace csikit
{

using cdouble = std::complex<double>;

/// Dense row-major matrix. Rows are OFDM symbols (time), columns are
/// subcarriers (frequency).
template <typename T>
class Matrix
{
public:
    Matrix() = default;
    Matrix(std::size_t rows, std::size_t cols, T fill = T{})
        : rows_(rows), cols_(cols), data_(rows * cols, fill) {}
    Matrix(std::size_t rows, std::size_t cols, std::vector<T> data)
        : rows_(rows), cols_(cols), data_(std::move(data))
    {
        assert(data_.size() == rows_ * cols_);
    }

    /// Builds a matrix from nested rows; all rows must share a length.
    static Matrix from_rows(const std::vector<std::vector<T>> &rows)
    {
        const std::size_t r = rows.size();
        const std::size_t c = r ? rows.front().size() : 0;
        Matrix m(r, c);
        for (std::size_t i = 0; i < r; ++i)
        {
            assert(rows[i].size() == c);
            for (std::size_t j = 0; j < c; ++j)
                m(i, j) = rows[i][j];
        }
        return m;
    }

    std::size_t rows() const noexcept { return rows_; }
    std::size_t cols() const noexcept { return cols_; }
    std::size_t size() const noexcept { return data_.size(); }
    bool empty() const noexcept { return data_.empty(); }

    T &operator()(std::size_t r, std::size_t c) noexcept { return data_[r * cols_ + c]; }
    const T &operator()(std::size_t r, std::size_t c) const noexcept { return data_[r * cols_ + c]; }

    std::span<T> row(std::size_t r) noexcept { return {data_.data() + r * cols_, cols_}; }
    std::span<const T> row(std::size_t r) const noexcept { return {data_.data() + r * cols_, cols_}; }

    std::vector<T> col(std::size_t c) const
    {
        std::vector<T> out(rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            out[r] = (*this)(r, c);
        return out;
    }

    void set_col(std::size_t c, std::span<const T> values)
    {
        assert(values.size() == rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            (*this)(r, c) = values[r];
    }

    std::span<T> data() noexcept { return data_; }
    std::span<const T> data() const noexcept { return data_; }

    Matrix transposed() const
    {
        Matrix t(cols_, rows_);
        for (std::size_t r = 0; r < rows_; ++r)
            for (std::size_t c = 0; c < cols_; ++c)
                t(c, r) = (*this)(r, c);
        return t;
    }

    bool same_shape(const auto &other) const noexcept
    {
        return rows_ == other.rows() && cols_ == other.cols();
    }

    friend bool operator==(const Matrix &, const Matrix &) = default;

private:
    std::size_t rows_ = 0;
    std::size_t cols_ = 0;
    std::vector<T> data_;
};

using RealMatrix = Matrix<double>;
using ComplexMatrix = Matrix<cdouble>;

} // namespace csikit
