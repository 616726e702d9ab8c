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

#include <span>
#include <string>
#include <vector>

namespace csikit
{

/// Savitzky-Golay parameters: polynomial degree and odd window length.
struct SgSpec
{
    int order = 2;
    int window = 5;

    /// Throws DataError unless window is odd, >= 3 and > order.
    void validate() const;
};

/// Least-squares smoothing weights. `central` applies to interior samples;
/// `leading[p]` / `trailing[p]` give the weights over the first / last
/// `window` samples for the p-th edge position.
struct SgKernel
{
    SgSpec spec;
    std::vector<double> central;
    std::vector<std::vector<double>> leading;
    std::vector<std::vector<double>> trailing;

    int half() const noexcept { return spec.window / 2; }
};

SgKernel sg_design(const SgSpec &spec);

/// Smooths `v`. Edge samples are re-fitted on the nearest `window` samples and
/// evaluated at their own abscissa. A vector shorter than the window is
/// returned unchanged and a warning is appended.
std::vector<double> sg_apply(std::span<const double> v, const SgSpec &spec,
                             std::vector<std::string> *warnings = nullptr);
std::vector<double> sg_apply(std::span<const double> v, const SgKernel &kernel,
                             std::vector<std::string> *warnings = nullptr);

/// Odd window closest to fraction * length: rounded, bumped to odd, clamped to
/// [3, largest odd <= length] and raised above `order` when possible.
int sg_window_for(std::size_t length, double fraction, int order);

inline constexpr int default_sg_order = 2;
inline constexpr double default_sg_fraction = 0.1;

/// Filters every subcarrier along time after unwrapping each column.
PhaseMatrix sg_time(const PhaseMatrix &phase, const SgSpec &spec, std::vector<std::string> *warnings = nullptr);
PhaseMatrix sg_time(const PhaseMatrix &phase, double fraction = default_sg_fraction, int order = default_sg_order);

/// Filters every symbol along frequency after unwrapping each row.
PhaseMatrix sg_freq(const PhaseMatrix &phase, const SgSpec &spec, std::vector<std::string> *warnings = nullptr);
PhaseMatrix sg_freq(const PhaseMatrix &phase, double fraction = default_sg_fraction, int order = default_sg_order);

/// Bivariate Savitzky-Golay parameters. The basis is every monomial
/// t^i f^j with i + j <= order over a window_time x window_freq patch.
struct Sg2dSpec
{
    int order = 2;
    int window_time = 5;
    int window_freq = 5;

    void validate() const;
    static Sg2dSpec square(int order, int window) { return {order, window, window}; }
    static Sg2dSpec from_fraction(std::size_t symbols, std::size_t subcarriers, double fraction, int order);
};

/// Central weights of the bivariate fit, row-major window_time x window_freq.
std::vector<double> sg2d_central_weights(const Sg2dSpec &spec);

/// Joint time-frequency smoothing; columns are unwrapped first. Edge cells use
/// the nearest full patch and are evaluated at their own position.
PhaseMatrix sg_2d(const PhaseMatrix &phase, const Sg2dSpec &spec);

/// Time pass followed by a frequency pass; kept for comparison with sg_2d.
PhaseMatrix sg_2d_separable(const PhaseMatrix &phase, const Sg2dSpec &spec);

} // namespace csikit
