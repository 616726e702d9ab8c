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

#include "csikit/core.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace csikit
{

namespace
{

std::string cell(std::size_t s, std::size_t k)
{
    return "(" + std::to_string(s) + ", " + std::to_string(k) + ")";
}

} // namespace

const char *to_string(FormatErrc code)
{
    switch (code)
    {
    case FormatErrc::bad_magic: return "bad magic";
    case FormatErrc::bad_version: return "unsupported version";
    case FormatErrc::bad_flags: return "bad flags";
    case FormatErrc::bad_header: return "bad header";
    case FormatErrc::truncated: return "truncated payload";
    case FormatErrc::trailing_bytes: return "trailing bytes";
    case FormatErrc::csv_header: return "bad csv header";
    case FormatErrc::csv_ragged: return "ragged csv row";
    case FormatErrc::csv_non_numeric: return "non-numeric csv cell";
    case FormatErrc::csv_duplicate: return "duplicate csv cell";
    case FormatErrc::csv_missing_cell: return "missing csv cell";
    case FormatErrc::csv_index: return "bad csv index";
    case FormatErrc::sidecar: return "bad sidecar";
    case FormatErrc::spec_syntax: return "bad spec file";
    }
    return "format error";
}

FormatError::FormatError(FormatErrc code, const std::string &message, std::size_t location)
    : Error(std::string(to_string(code)) + ": " + message), code_(code), location_(location)
{
}

const char *to_string(PhaseStage stage)
{
    switch (stage)
    {
    case PhaseStage::raw: return "raw";
    case PhaseStage::calibrated: return "calibrated";
    case PhaseStage::smoothed: return "smoothed";
    case PhaseStage::rebuilt: return "rebuilt";
    }
    return "?";
}

// ---------------------------------------------------------------------------

CsiMatrix::CsiMatrix(ComplexMatrix values) : values_(std::move(values))
{
    if (values_.rows() < 1)
        throw DataError("CSI matrix needs at least one symbol");
    if (values_.cols() < 2)
        throw DataError("CSI matrix needs at least two subcarriers, got " + std::to_string(values_.cols()));
    for (std::size_t s = 0; s < values_.rows(); ++s)
        for (std::size_t k = 0; k < values_.cols(); ++k)
        {
            const cdouble v = values_(s, k);
            if (!std::isfinite(v.real()) || !std::isfinite(v.imag()))
                throw DataError("non-finite CSI value at " + cell(s, k));
        }
}

void require_finite(const RealMatrix &m, const char *what)
{
    for (std::size_t s = 0; s < m.rows(); ++s)
        for (std::size_t k = 0; k < m.cols(); ++k)
            if (!std::isfinite(m(s, k)))
                throw DataError(std::string("non-finite ") + what + " value at " + cell(s, k));
}

AmplitudeMatrix::AmplitudeMatrix(RealMatrix values) : values_(std::move(values))
{
    if (values_.empty())
        throw DataError("empty amplitude matrix");
    require_finite(values_, "amplitude");
    for (std::size_t s = 0; s < values_.rows(); ++s)
        for (std::size_t k = 0; k < values_.cols(); ++k)
            if (values_(s, k) < 0.0)
                throw DataError("negative amplitude at " + cell(s, k));
}

PhaseMatrix::PhaseMatrix(RealMatrix values, PhaseStage stage) : values_(std::move(values)), stage_(stage)
{
    if (values_.empty())
        throw DataError("empty phase matrix");
    require_finite(values_, "phase");
}

PhaseMatrix PhaseMatrix::advance(RealMatrix values, PhaseStage stage) const
{
    if (!values_.same_shape(values))
        throw DataError("phase stage changed matrix dimensions");
    return PhaseMatrix(std::move(values), std::max(stage, stage_));
}

SubcarrierMap::SubcarrierMap(std::vector<int> indices, int n_fft) : indices_(std::move(indices)), n_fft_(n_fft)
{
    if (indices_.empty())
        throw DataError("empty subcarrier map");
    if (n_fft_ <= 0)
        throw DataError("DFT size must be positive");
    for (std::size_t k = 1; k < indices_.size(); ++k)
        if (indices_[k] <= indices_[k - 1])
            throw DataError("subcarrier indices must be strictly increasing (position " + std::to_string(k) + ")");
    if (static_cast<long long>(indices_.back()) - indices_.front() + 1 > n_fft_)
        throw DataError("subcarrier span exceeds DFT size " + std::to_string(n_fft_));
}

SubcarrierMap SubcarrierMap::contiguous(std::size_t count, int n_fft, int first)
{
    std::vector<int> m(count);
    for (std::size_t k = 0; k < count; ++k)
        m[k] = first + static_cast<int>(k);
    return SubcarrierMap(std::move(m), n_fft);
}

double SubcarrierMap::mean_index() const noexcept
{
    double sum = 0.0;
    for (int m : indices_)
        sum += m;
    return sum / static_cast<double>(indices_.size());
}

// ---------------------------------------------------------------------------

Decomposition decompose(const CsiMatrix &csi)
{
    const std::size_t S = csi.symbols();
    const std::size_t K = csi.subcarriers();
    RealMatrix amp(S, K);
    RealMatrix phase(S, K);
    std::vector<std::pair<std::size_t, std::size_t>> zero_cells;

    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t k = 0; k < K; ++k)
        {
            const cdouble v = csi(s, k);
            amp(s, k) = std::abs(v);
            if (amp(s, k) == 0.0)
            {
                phase(s, k) = 0.0;
                zero_cells.emplace_back(s, k);
                continue;
            }
            double arg = std::arg(v);
            // atan2(-0, x<0) returns -pi; the branch is upper-inclusive.
            if (arg <= -pi)
                arg = pi;
            phase(s, k) = arg;
        }

    return {AmplitudeMatrix(std::move(amp)), PhaseMatrix(std::move(phase), PhaseStage::raw), std::move(zero_cells)};
}

CsiMatrix recompose(const AmplitudeMatrix &amp, const PhaseMatrix &phase)
{
    if (!amp.values().same_shape(phase.values()))
        throw DataError("amplitude is " + std::to_string(amp.symbols()) + "x" + std::to_string(amp.subcarriers()) +
                        " but phase is " + std::to_string(phase.symbols()) + "x" +
                        std::to_string(phase.subcarriers()));
    ComplexMatrix out(amp.symbols(), amp.subcarriers());
    for (std::size_t s = 0; s < out.rows(); ++s)
        for (std::size_t k = 0; k < out.cols(); ++k)
        {
            const double a = amp.values()(s, k);
            const double p = phase(s, k);
            out(s, k) = cdouble(a * std::cos(p), a * std::sin(p));
        }
    return CsiMatrix(std::move(out));
}

double wrap_to_pi(double angle) noexcept
{
    double r = std::remainder(angle, two_pi);
    if (r <= -pi)
        r += two_pi;
    else if (r > pi)
        r -= two_pi;
    return r;
}

void unwrap_inplace(std::span<double> phase)
{
    // Corrections are accumulated as whole turns and applied once per sample,
    // so an already continuous input passes through bit-for-bit.
    long long turns = 0;
    double prev_in = phase.empty() ? 0.0 : phase[0];
    for (std::size_t i = 1; i < phase.size(); ++i)
    {
        const double in = phase[i];
        const double d = in - prev_in;
        const double w = wrap_to_pi(d);
        if (w != d)
            turns += std::llround((w - d) / two_pi);
        prev_in = in;
        if (turns != 0)
            phase[i] = in + two_pi * static_cast<double>(turns);
    }
}

std::vector<double> unwrap(std::span<const double> phase)
{
    if (phase.empty())
        throw DataError("cannot unwrap an empty phase vector");
    std::vector<double> out(phase.begin(), phase.end());
    unwrap_inplace(out);
    return out;
}

RealMatrix unwrap_rows(const RealMatrix &m)
{
    RealMatrix out = m;
    for (std::size_t s = 0; s < out.rows(); ++s)
        unwrap_inplace(out.row(s));
    return out;
}

RealMatrix unwrap_cols(const RealMatrix &m)
{
    RealMatrix out = m;
    std::vector<double> column;
    for (std::size_t k = 0; k < out.cols(); ++k)
    {
        column = out.col(k);
        unwrap_inplace(column);
        out.set_col(k, column);
    }
    return out;
}

} // namespace csikit
