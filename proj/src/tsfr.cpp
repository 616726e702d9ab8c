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

#include "csikit/tsfr.hpp"

#include "csikit/parallel.hpp"

#include <algorithm>
#include <cmath>
#include <string>

namespace csikit
{

GapThreshold gap_stats(std::span<const double> row)
{
    if (row.size() < 2)
        throw DataError("gap statistics need at least two subcarriers");
    const double count = static_cast<double>(row.size() - 1);

    double sum = 0.0;
    for (std::size_t k = 1; k < row.size(); ++k)
        sum += std::abs(row[k] - row[k - 1]);
    GapThreshold g;
    g.mu = sum / count;

    double sq = 0.0;
    for (std::size_t k = 1; k < row.size(); ++k)
    {
        const double dev = std::abs(row[k] - row[k - 1]) - g.mu;
        sq += dev * dev;
    }
    g.sigma = std::sqrt(sq / count);
    g.d = g.mu + g.sigma;
    return g;
}

std::size_t RebuildResult::flagged() const noexcept
{
    return static_cast<std::size_t>(std::count_if(branch.begin(), branch.end(), [](RebuildBranch b) {
        return b == RebuildBranch::clamp_up || b == RebuildBranch::clamp_down;
    }));
}

RebuildResult rebuild_symbol(std::span<const double> smoothed, double d)
{
    if (smoothed.size() < 2)
        throw DataError("rebuild needs at least two subcarriers");
    if (!(d >= 0.0))
        throw DataError("gap threshold must be non-negative");

    RebuildResult r;
    r.phase.resize(smoothed.size());
    r.branch.resize(smoothed.size());
    r.phase[0] = smoothed[0];
    r.branch[0] = RebuildBranch::first;
    for (std::size_t k = 1; k < smoothed.size(); ++k)
    {
        const double step = smoothed[k] - smoothed[k - 1];
        if (step < -d)
        {
            r.phase[k] = r.phase[k - 1] - d;
            r.branch[k] = RebuildBranch::clamp_down;
        }
        else if (step > d)
        {
            r.phase[k] = r.phase[k - 1] + d;
            r.branch[k] = RebuildBranch::clamp_up;
        }
        else
        {
            r.phase[k] = smoothed[k] - (smoothed[k - 1] - r.phase[k - 1]);
            r.branch[k] = RebuildBranch::follow;
        }
    }
    return r;
}

TsfrResult tsfr(const PhaseMatrix &raw, const TsfrParams &params, const SubcarrierMap *map)
{
    const std::size_t S = raw.symbols();
    const std::size_t K = raw.subcarriers();
    if (S < 3)
        throw DataError("TSFR needs at least 3 symbols, got " + std::to_string(S));
    if (K < 2)
        throw DataError("TSFR needs at least 2 subcarriers, got " + std::to_string(K));

    PhaseMatrix calibrated = lrr_calibrate(raw, params.abscissa, map);
    PhaseMatrix smoothed = sg_time(calibrated, params.sg_fraction, params.sg_order);

    RealMatrix rebuilt(S, K);
    TsfrReport report;
    report.subcarriers = K;
    report.thresholds.resize(S);
    report.exceedance = Matrix<std::uint8_t>(S, K, 0);
    report.clamped_up.assign(S, 0);
    report.clamped_down.assign(S, 0);
    report.modified_fraction.assign(S, 0.0);

    parallel_for(S, [&](std::size_t s) {
        const auto phi = unwrap(smoothed.values().row(s));
        const auto theta = unwrap(calibrated.values().row(s));
        const GapThreshold g = gap_stats(theta);
        const RebuildResult r = rebuild_symbol(phi, g.d);

        std::copy(r.phase.begin(), r.phase.end(), rebuilt.row(s).begin());
        report.thresholds[s] = g;
        for (std::size_t k = 1; k < K; ++k)
        {
            if (r.branch[k] == RebuildBranch::clamp_up)
                ++report.clamped_up[s];
            else if (r.branch[k] == RebuildBranch::clamp_down)
                ++report.clamped_down[s];
            else
                continue;
            report.exceedance(s, k) = 1;
        }
        report.modified_fraction[s] = static_cast<double>(report.flagged(s)) / static_cast<double>(K - 1);
    });

    PhaseMatrix rebuilt_phase = smoothed.advance(std::move(rebuilt), PhaseStage::rebuilt);
    return {std::move(calibrated), std::move(smoothed), std::move(rebuilt_phase), std::move(report)};
}

// ---------------------------------------------------------------------------

const std::vector<Method> &all_methods()
{
    static const std::vector<Method> methods{Method::raw,         Method::lt,          Method::lrr,
                                             Method::lrr_sg_freq, Method::lrr_sg_time, Method::lrr_sg_2d,
                                             Method::tsfr};
    return methods;
}

std::string_view to_string(Method method)
{
    switch (method)
    {
    case Method::raw: return "raw";
    case Method::lt: return "lt";
    case Method::lrr: return "lrr";
    case Method::lrr_sg_freq: return "lrr+sgfreq";
    case Method::lrr_sg_time: return "lrr+sgtime";
    case Method::lrr_sg_2d: return "lrr+sg2d";
    case Method::tsfr: return "tsfr";
    }
    return "?";
}

std::optional<Method> parse_method(std::string_view name)
{
    for (Method m : all_methods())
        if (to_string(m) == name)
            return m;
    return std::nullopt;
}

std::string method_names()
{
    std::string out;
    for (Method m : all_methods())
    {
        if (!out.empty())
            out += '|';
        out += to_string(m);
    }
    return out;
}

SubcarrierMap default_map(std::size_t subcarriers)
{
    int n_fft = 64;
    while (static_cast<std::size_t>(n_fft) < subcarriers)
        n_fft *= 2;
    return SubcarrierMap::contiguous(subcarriers, n_fft);
}

ProcessResult process(const CsiMatrix &csi, Method method, const ProcessParams &params)
{
    Decomposition parts = decompose(csi);
    const std::size_t S = csi.symbols();
    const std::size_t K = csi.subcarriers();
    const SubcarrierMap map = params.map ? *params.map : default_map(K);
    if (map.size() != K)
        throw DataError("subcarrier map has " + std::to_string(map.size()) + " entries for " + std::to_string(K) +
                        " subcarriers");

    std::optional<TsfrReport> report;
    auto lrr = [&] { return lrr_calibrate(parts.phase, params.abscissa, &map); };

    PhaseMatrix phase = [&]() -> PhaseMatrix {
        switch (method)
        {
        case Method::raw: return parts.phase;
        case Method::lt: return lt_calibrate(parts.phase, map);
        case Method::lrr: return lrr();
        case Method::lrr_sg_freq: return sg_freq(lrr(), params.sg_fraction, params.sg_order);
        case Method::lrr_sg_time: return sg_time(lrr(), params.sg_fraction, params.sg_order);
        case Method::lrr_sg_2d:
        {
            const Sg2dSpec spec = Sg2dSpec::from_fraction(S, K, params.sg_fraction, params.sg_order);
            return params.separable_2d ? sg_2d_separable(lrr(), spec) : sg_2d(lrr(), spec);
        }
        case Method::tsfr:
        {
            TsfrResult r = tsfr(parts.phase, {params.sg_order, params.sg_fraction, params.abscissa}, &map);
            report = std::move(r.report);
            return std::move(r.rebuilt);
        }
        }
        throw DataError("unknown method");
    }();

    CsiMatrix out = recompose(parts.amplitude, phase);
    return {std::move(out), std::move(parts.amplitude), std::move(phase), std::move(report),
            std::move(parts.zero_cells)};
}

} // namespace csikit
