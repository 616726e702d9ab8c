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

#include "csikit/errors.hpp"
#include "csikit/matrix.hpp"

#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace csikit
{

inline constexpr double pi = std::numbers::pi;
inline constexpr double two_pi = 2.0 * std::numbers::pi;

/// Estimated channel: S symbols by K subcarriers of complex gains.
/// Requires S >= 1, K >= 2 and finite components.
class CsiMatrix
{
public:
    explicit CsiMatrix(ComplexMatrix values);

    std::size_t symbols() const noexcept { return values_.rows(); }
    std::size_t subcarriers() const noexcept { return values_.cols(); }
    const ComplexMatrix &values() const noexcept { return values_; }
    const cdouble &operator()(std::size_t s, std::size_t k) const noexcept { return values_(s, k); }

    friend bool operator==(const CsiMatrix &, const CsiMatrix &) = default;

private:
    ComplexMatrix values_;
};

/// Linear gain magnitudes; non-negative and finite.
class AmplitudeMatrix
{
public:
    explicit AmplitudeMatrix(RealMatrix values);

    std::size_t symbols() const noexcept { return values_.rows(); }
    std::size_t subcarriers() const noexcept { return values_.cols(); }
    const RealMatrix &values() const noexcept { return values_; }

    friend bool operator==(const AmplitudeMatrix &, const AmplitudeMatrix &) = default;

private:
    RealMatrix values_;
};

/// Processing stage of a phase matrix. Stages only move forward.
enum class PhaseStage
{
    raw,
    calibrated,
    smoothed,
    rebuilt
};

const char *to_string(PhaseStage stage);

/// Phases in radians, tagged with the pipeline stage that produced them.
class PhaseMatrix
{
public:
    explicit PhaseMatrix(RealMatrix values, PhaseStage stage = PhaseStage::raw);

    std::size_t symbols() const noexcept { return values_.rows(); }
    std::size_t subcarriers() const noexcept { return values_.cols(); }
    const RealMatrix &values() const noexcept { return values_; }
    PhaseStage stage() const noexcept { return stage_; }
    double operator()(std::size_t s, std::size_t k) const noexcept { return values_(s, k); }

    /// Copy of this matrix holding new values at a later (or equal) stage.
    PhaseMatrix advance(RealMatrix values, PhaseStage stage) const;

    friend bool operator==(const PhaseMatrix &, const PhaseMatrix &) = default;

private:
    RealMatrix values_;
    PhaseStage stage_;
};

/// Physical subcarrier indices m_k inside an N-point DFT grid.
class SubcarrierMap
{
public:
    SubcarrierMap(std::vector<int> indices, int n_fft);

    /// m_k = first, first+1, ..., first+K-1.
    static SubcarrierMap contiguous(std::size_t count, int n_fft, int first = 1);

    std::size_t size() const noexcept { return indices_.size(); }
    std::span<const int> indices() const noexcept { return indices_; }
    int operator[](std::size_t k) const noexcept { return indices_[k]; }
    int n_fft() const noexcept { return n_fft_; }
    double mean_index() const noexcept;

    friend bool operator==(const SubcarrierMap &, const SubcarrierMap &) = default;

private:
    std::vector<int> indices_;
    int n_fft_;
};

struct Decomposition
{
    AmplitudeMatrix amplitude;
    PhaseMatrix phase;
    /// (symbol, subcarrier) cells with zero magnitude; their phase is set to 0.
    std::vector<std::pair<std::size_t, std::size_t>> zero_cells;
};

/// Splits CSI into modulus and principal argument in (-pi, pi].
Decomposition decompose(const CsiMatrix &csi);

/// amp * (cos(phase) + j sin(phase)) elementwise.
CsiMatrix recompose(const AmplitudeMatrix &amp, const PhaseMatrix &phase);

/// Maps an angle into (-pi, pi].
double wrap_to_pi(double angle) noexcept;

/// Cumulative-correction unwrapping: out[0] = in[0] and every consecutive
/// output difference is the wrapped input difference.
std::vector<double> unwrap(std::span<const double> phase);

/// In-place variant used by the row/column helpers below.
void unwrap_inplace(std::span<double> phase);

RealMatrix unwrap_rows(const RealMatrix &m);
RealMatrix unwrap_cols(const RealMatrix &m);

/// Throws DataError naming the first non-finite cell.
void require_finite(const RealMatrix &m, const char *what);

} // namespace csikit
