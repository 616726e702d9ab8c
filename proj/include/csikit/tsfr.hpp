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
#include "csikit/linear_calib.hpp"
#include "csikit/savgol.hpp"

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <vector>

namespace csikit
{

/// Per-symbol gap threshold d = mu + sigma of the absolute adjacent
/// subcarrier phase differences.
struct GapThreshold
{
    double mu = 0.0;
    double sigma = 0.0;
    double d = 0.0;
};

GapThreshold gap_stats(std::span<const double> unwrapped_row);

/// Which branch of the rebuild recursion handled a subcarrier.
enum class RebuildBranch : std::uint8_t
{
    first,
    clamp_down,
    clamp_up,
    follow
};

struct RebuildResult
{
    std::vector<double> phase;
    std::vector<RebuildBranch> branch;

    std::size_t flagged() const noexcept;
};

/// Left-to-right rebuild: adjacent steps larger than d are clamped to +-d and
/// every other step is copied from the smoothed row.
RebuildResult rebuild_symbol(std::span<const double> smoothed, double d);

struct TsfrReport
{
    std::size_t subcarriers = 0;
    std::vector<GapThreshold> thresholds;
    /// S x K marks, true where |step| > d_s (column 0 is never marked).
    Matrix<std::uint8_t> exceedance;
    std::vector<std::size_t> clamped_up;
    std::vector<std::size_t> clamped_down;
    /// Flagged steps over the K-1 candidate positions of each symbol.
    std::vector<double> modified_fraction;

    std::size_t symbols() const noexcept { return thresholds.size(); }
    std::size_t flagged(std::size_t s) const noexcept { return clamped_up[s] + clamped_down[s]; }
};

struct TsfrParams
{
    int sg_order = default_sg_order;
    double sg_fraction = default_sg_fraction;
    Abscissa abscissa = Abscissa::ordinal;
};

struct TsfrResult
{
    PhaseMatrix calibrated;
    PhaseMatrix smoothed;
    PhaseMatrix rebuilt;
    TsfrReport report;
};

/// LRR calibration, time-domain smoothing, then per-symbol frequency rebuild.
/// `map` is only consulted for the physical abscissa.
TsfrResult tsfr(const PhaseMatrix &raw, const TsfrParams &params = {}, const SubcarrierMap *map = nullptr);

/// The seven processing ladders.
enum class Method
{
    raw,
    lt,
    lrr,
    lrr_sg_freq,
    lrr_sg_time,
    lrr_sg_2d,
    tsfr
};

const std::vector<Method> &all_methods();
std::string_view to_string(Method method);
std::optional<Method> parse_method(std::string_view name);
/// "raw|lt|lrr|lrr+sgfreq|lrr+sgtime|lrr+sg2d|tsfr"
std::string method_names();

struct ProcessParams
{
    int sg_order = default_sg_order;
    double sg_fraction = default_sg_fraction;
    Abscissa abscissa = Abscissa::ordinal;
    bool separable_2d = false;
    /// Needed by LT (and by LRR with the physical abscissa). Defaults to a
    /// contiguous map 1..K with N = 64 rounded up to cover K.
    std::optional<SubcarrierMap> map;
};

struct ProcessResult
{
    CsiMatrix csi;
    /// Amplitude handed to recomposition; a passthrough of the input.
    AmplitudeMatrix amplitude;
    PhaseMatrix phase;
    std::optional<TsfrReport> report;
    std::vector<std::pair<std::size_t, std::size_t>> zero_cells;
};

/// Decomposes, runs the selected phase pipeline and recomposes with the
/// original amplitude.
ProcessResult process(const CsiMatrix &csi, Method method, const ProcessParams &params = {});

SubcarrierMap default_map(std::size_t subcarriers);

} // namespace csikit
