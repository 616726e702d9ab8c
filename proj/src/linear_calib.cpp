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

#include "csikit/linear_calib.hpp"

#include "csikit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace csikit
{

namespace
{

void require_raw(const PhaseMatrix &phase)
{
    if (phase.stage() != PhaseStage::raw)
        throw DataError(std::string("calibration expects raw phases, got stage ") + to_string(phase.stage()));
}

void require_two_columns(std::size_t k)
{
    if (k < 2)
        throw DataError("calibration needs at least two subcarriers");
}

} // namespace

std::vector<double> ordinal_abscissa(std::size_t count)
{
    std::vector<double> x(count);
    for (std::size_t k = 0; k < count; ++k)
        x[k] = static_cast<double>(k + 1);
    return x;
}

LtFit lt_fit(std::span<const double> row, const SubcarrierMap &map)
{
    require_two_columns(row.size());
    if (map.size() != row.size())
        throw DataError("subcarrier map has " + std::to_string(map.size()) + " entries for " +
                        std::to_string(row.size()) + " subcarriers");
    const int span = map[map.size() - 1] - map[0];
    if (span == 0)
        throw DataError("degenerate subcarrier map: m_K equals m_1");

    LtFit fit;
    fit.epsilon = (row.back() - row.front()) / static_cast<double>(span);
    double sum = 0.0;
    for (double v : row)
        sum += v;
    fit.tau = sum / static_cast<double>(row.size());
    return fit;
}

PhaseMatrix lt_calibrate(const PhaseMatrix &raw, const SubcarrierMap &map)
{
    require_raw(raw);
    RealMatrix out = unwrap_rows(raw.values());
    const std::size_t K = out.cols();
    lt_fit(out.row(0), map); // validates the map once up front

    parallel_for(out.rows(), [&](std::size_t s) {
        auto row = out.row(s);
        const LtFit fit = lt_fit(row, map);
        for (std::size_t k = 0; k < K; ++k)
            row[k] = row[k] - fit.epsilon * map[k] - fit.tau;
    });
    return raw.advance(std::move(out), PhaseStage::calibrated);
}

RegressionFit regress_symbol(std::span<const double> row, std::span<const double> x)
{
    require_two_columns(row.size());
    if (x.size() != row.size())
        throw DataError("abscissa length does not match the row");

    const double n = static_cast<double>(row.size());
    double x_mean = 0.0;
    double y_mean = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k)
    {
        x_mean += x[k];
        y_mean += row[k];
    }
    x_mean /= n;
    y_mean /= n;

    double sxy = 0.0;
    double sxx = 0.0;
    for (std::size_t k = 0; k < row.size(); ++k)
    {
        const double dx = x[k] - x_mean;
        sxy += (row[k] - y_mean) * dx;
        sxx += dx * dx;
    }
    if (sxx == 0.0)
        throw DataError("regression abscissas are all equal");

    RegressionFit fit;
    fit.a = sxy / sxx;
    fit.b = y_mean - x_mean * fit.a;
    fit.alpha = std::atan(fit.a);
    fit.r1 = fit.a * x[0] + fit.b;
    return fit;
}

RegressionFit regress_symbol(std::span<const double> row)
{
    const auto x = ordinal_abscissa(row.size());
    return regress_symbol(row, x);
}

std::vector<double> rotate_symbol(std::span<const double> row, std::span<const double> x, const RegressionFit &fit)
{
    const double sin_a = std::sin(fit.alpha);
    const double cos_a = std::cos(fit.alpha);
    std::vector<double> out(row.size());
    for (std::size_t k = 0; k < row.size(); ++k)
        out[k] = -x[k] * sin_a + row[k] * cos_a - fit.r1;
    return out;
}

PhaseMatrix lrr_calibrate(const PhaseMatrix &raw, Abscissa abscissa, const SubcarrierMap *map)
{
    require_raw(raw);
    const std::size_t K = raw.subcarriers();
    require_two_columns(K);

    std::vector<double> x;
    if (abscissa == Abscissa::physical)
    {
        if (map == nullptr)
            throw DataError("physical abscissa requires a subcarrier map");
        if (map->size() != K)
            throw DataError("subcarrier map has " + std::to_string(map->size()) + " entries for " +
                            std::to_string(K) + " subcarriers");
        x.assign(map->indices().begin(), map->indices().end());
    }
    else
    {
        x = ordinal_abscissa(K);
    }

    RealMatrix out = unwrap_rows(raw.values());
    parallel_for(out.rows(), [&](std::size_t s) {
        auto row = out.row(s);
        const RegressionFit fit = regress_symbol(row, x);
        const auto rotated = rotate_symbol(row, x, fit);
        std::copy(rotated.begin(), rotated.end(), row.begin());
    });
    return raw.advance(std::move(out), PhaseStage::calibrated);
}

} // namespace csikit
