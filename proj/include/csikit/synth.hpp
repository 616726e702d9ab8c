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

#include <cstdint>
#include <random>
#include <string>
#include <string_view>
#include <vector>

namespace csikit
{

/// Seedable generator with a fixed stream discipline: stream `id` of seed
/// `seed` is std::mt19937_64 seeded with splitmix64(seed ^ splitmix64(id)).
/// Uniforms use the top 53 bits; normals use Box-Muller. Both are defined
/// in terms of the engine's raw output, so draws are identical across
/// platforms and standard libraries.
class Rng
{
public:
    Rng(std::uint64_t seed, std::uint64_t stream);

    /// Uniform in [0, 1).
    double uniform();
    /// Uniform in [lo, hi).
    double uniform(double lo, double hi) { return lo + (hi - lo) * uniform(); }
    /// Standard normal.
    double normal();

private:
    std::mt19937_64 engine_;
    double spare_ = 0.0;
    bool has_spare_ = false;
};

std::uint64_t splitmix64(std::uint64_t x) noexcept;

/// Stream ids. Rows use their symbol index; the others sit far above any
/// realistic symbol count.
inline constexpr std::uint64_t stream_delta_t = 0xD17A000000000001ull;
inline constexpr std::uint64_t stream_gamma = 0xD17A000000000002ull;
inline constexpr std::uint64_t stream_gain_noise = 0xD17A000000000003ull;

struct PathSpec
{
    double delay = 0.0; ///< samples, in [0, N)
    cdouble gain{1.0, 0.0};
};

/// Multipath channel. With drift_depth > 0 the gain of path p in symbol s is
/// g_p * (1 + depth * sin(2 pi s / period + p)), a slow activity-like change.
struct ChannelSpec
{
    std::vector<PathSpec> paths;
    double drift_depth = 0.0;
    double drift_period = 0.0; ///< symbols

    void validate(int n_fft) const;
};

/// Receiver impairments: theta_hat = theta + 2 pi m_k dt_s / N + gamma_s + Z.
struct ImpairmentSpec
{
    std::vector<double> delta_t; ///< per symbol, samples
    std::vector<double> gamma;   ///< per symbol, rad
    double noise_sigma = 0.0;    ///< phase noise std, rad
    double gain_noise_sigma = 0.0; ///< optional complex noise on the gain
    std::uint64_t seed = 0;
    SubcarrierMap map = SubcarrierMap::contiguous(2, 64);

    void validate(std::size_t symbols, std::size_t subcarriers) const;
};

struct SynthOutput
{
    CsiMatrix true_csi;
    CsiMatrix measured_csi;
    ImpairmentSpec impairments;
};

/// H_s(k) = sum_p g_{p,s} exp(-j 2 pi m_k tau_p / N).
CsiMatrix gen_true_csi(const ChannelSpec &channel, std::size_t symbols, const SubcarrierMap &map);

SynthOutput apply_impairments(const CsiMatrix &true_csi, const ImpairmentSpec &imp);

SynthOutput gen_dataset(const ChannelSpec &channel, const ImpairmentSpec &imp, std::size_t symbols);

/// Human-editable generator description; see format_synth_config for the
/// key/value schema.
struct SynthConfig
{
    ChannelSpec channel;
    int n_fft = 64;
    int first_index = 1;
    std::vector<int> indices; ///< explicit m_k; overrides first_index when set
    double delta_t_lo = 0.0;
    double delta_t_hi = 0.0;
    double gamma_lo = 0.0;
    double gamma_hi = 0.0;
    double noise_sigma = 0.0;
    double gain_noise_sigma = 0.0;
    std::size_t symbols = 1000;
    std::size_t subcarriers = 52;

    SubcarrierMap subcarrier_map(std::size_t subcarriers) const;
};

/// Three paths with a dominant direct path (no deep fades), N = 64, dt
/// uniform in (-2, 2], gamma uniform in (-pi, pi], phase noise 0.05 rad,
/// S = 1000, K = 52.
SynthConfig demo_config();

SynthConfig parse_synth_config(std::string_view text);
std::string format_synth_config(const SynthConfig &config);

/// Draws per-symbol dt and gamma uniformly from the configured (lo, hi] ranges.
ImpairmentSpec draw_impairments(const SynthConfig &config, std::size_t symbols, std::size_t subcarriers,
                                std::uint64_t seed);

/// Full generator: true channel, drawn impairments, measured channel.
SynthOutput synthesize(const SynthConfig &config, std::size_t symbols, std::size_t subcarriers,
                       std::uint64_t seed);

} // namespace csikit
