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

#include "csikit/core.hpp"
#include "csikit/tsfr.hpp"

#include <optional>
#include <span>
#include <string>
#include <vector>

namespace csikit
{

/// Histogram of signed adjacent-subcarrier phase differences with a
/// moment-fitted Gaussian overlay.
struct Histogram
{
    std::vector<double> edges; ///< bins + 1 strictly increasing edges, rad
    std::vector<std::size_t> counts;
    double mean = 0.0;
    double stddev = 0.0; ///< population standard deviation

    std::size_t total() const noexcept;
    /// Expected count of bin i under the fitted Gaussian.
    double gaussian_count(std::size_t bin) const;
};

inline constexpr int default_hist_bins = 101;
inline constexpr double default_hist_span_sigmas = 4.0;

/// Bins span mean +- 4 fitted std (mean +- 0.5 rad when the std is 0).
/// Samples outside the span are counted in the outermost bins, so counts
/// always sum to S * (K - 1).
Histogram diff_histogram(const PhaseMatrix &phase, int bins = default_hist_bins);

struct LabelMean
{
    std::string label;
    std::size_t count = 0;
    double mean_d = 0.0;
};

struct DsSeries
{
    std::vector<GapThreshold> thresholds;
    /// Sorted by label; empty when no labels were given.
    std::vector<LabelMean> groups;
};

/// Per-symbol gap thresholds of a calibrated phase matrix (rows are
/// unwrapped first), optionally averaged per label.
DsSeries ds_series(const PhaseMatrix &phase, const std::vector<std::string> *labels = nullptr);

/// counts[k] = number of symbols flagged at subcarrier k (0-based; entry 0 is
/// always zero).
std::vector<std::size_t> exceedance_profile(const TsfrReport &report);

} // namespace csikit
