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

#include "csikit/stats.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>

namespace csikit
{

std::size_t Histogram::total() const noexcept
{
    return std::accumulate(counts.begin(), counts.end(), std::size_t{0});
}

double Histogram::gaussian_count(std::size_t bin) const
{
    const double n = static_cast<double>(total());
    if (stddev == 0.0)
        return (edges[bin] <= mean && mean < edges[bin + 1]) ? n : 0.0;
    auto cdf = [&](double x) { return 0.5 * std::erfc(-(x - mean) / (stddev * std::sqrt(2.0))); };
    return n * (cdf(edges[bin + 1]) - cdf(edges[bin]));
}

Histogram diff_histogram(const PhaseMatrix &phase, int bins)
{
    if (bins < 1)
        throw DataError("histogram needs at least one bin");
    if (phase.subcarriers() < 2)
        throw DataError("difference histogram needs at least two subcarriers");

    const RealMatrix &m = phase.values();
    std::vector<double> diffs;
    diffs.reserve(m.rows() * (m.cols() - 1));
    for (std::size_t s = 0; s < m.rows(); ++s)
        for (std::size_t k = 1; k < m.cols(); ++k)
            diffs.push_back(m(s, k) - m(s, k - 1));

    Histogram h;
    const double n = static_cast<double>(diffs.size());
    h.mean = std::accumulate(diffs.begin(), diffs.end(), 0.0) / n;
    double sq = 0.0;
    for (double d : diffs)
        sq += (d - h.mean) * (d - h.mean);
    h.stddev = std::sqrt(sq / n);

    const double half = h.stddev > 0.0 ? default_hist_span_sigmas * h.stddev : 0.5;
    const double lo = h.mean - half;
    const double width = 2.0 * half / bins;
    h.edges.resize(static_cast<std::size_t>(bins) + 1);
    for (int i = 0; i <= bins; ++i)
        h.edges[static_cast<std::size_t>(i)] = lo + width * i;
    h.edges.back() = h.mean + half;

    h.counts.assign(static_cast<std::size_t>(bins), 0);
    for (double d : diffs)
    {
        const double pos = std::floor((d - lo) / width);
        const long long idx = std::clamp<long long>(static_cast<long long>(pos), 0, bins - 1);
        ++h.counts[static_cast<std::size_t>(idx)];
    }
    return h;
}

DsSeries ds_series(const PhaseMatrix &phase, const std::vector<std::string> *labels)
{
    if (phase.subcarriers() < 2)
        throw DataError("d_s needs at least two subcarriers");
    if (labels && labels->size() != phase.symbols())
        throw DataError("got " + std::to_string(labels->size()) + " labels for " +
                        std::to_string(phase.symbols()) + " symbols");

    DsSeries out;
    out.thresholds.reserve(phase.symbols());
    for (std::size_t s = 0; s < phase.symbols(); ++s)
        out.thresholds.push_back(gap_stats(unwrap(phase.values().row(s))));

    if (labels)
    {
        std::map<std::string, std::pair<std::size_t, double>> acc;
        for (std::size_t s = 0; s < labels->size(); ++s)
        {
            auto &slot = acc[(*labels)[s]];
            ++slot.first;
            slot.second += out.thresholds[s].d;
        }
        for (const auto &[label, v] : acc)
            out.groups.push_back({label, v.first, v.second / static_cast<double>(v.first)});
    }
    return out;
}

std::vector<std::size_t> exceedance_profile(const TsfrReport &report)
{
    std::vector<std::size_t> counts(report.exceedance.cols(), 0);
    for (std::size_t s = 0; s < report.exceedance.rows(); ++s)
        for (std::size_t k = 1; k < report.exceedance.cols(); ++k)
            counts[k] += report.exceedance(s, k);
    return counts;
}

} // namespace csikit
