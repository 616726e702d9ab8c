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
#include <vector>

namespace csikit
{

/// Endpoint slope and mean offset of one symbol (linear transformation).
struct LtFit
{
    double epsilon = 0.0; ///< rad per subcarrier index
    double tau = 0.0;     ///< rad
};

/// Least-squares line through (x_k, theta_k) and the rotation that levels it.
struct RegressionFit
{
    double a = 0.0;     ///< slope
    double b = 0.0;     ///< intercept
    double alpha = 0.0; ///< atan(a), in (-pi/2, pi/2)
    double r1 = 0.0;    ///< regression value at the first abscissa
};

/// Abscissa used by the regression: column ordinal k = 1..K, or the
/// physical subcarrier index m_k.
enum class Abscissa
{
    ordinal,
    physical
};

LtFit lt_fit(std::span<const double> unwrapped_row, const SubcarrierMap &map);

/// Per row: unwrap, then subtract epsilon_s * m_k + tau_s.
PhaseMatrix lt_calibrate(const PhaseMatrix &raw, const SubcarrierMap &map);

/// Centered OLS over k = 1..K.
RegressionFit regress_symbol(std::span<const double> unwrapped_row);

/// Centered OLS over arbitrary abscissas (same length as the row, not all equal).
RegressionFit regress_symbol(std::span<const double> unwrapped_row, std::span<const double> abscissa);

/// Rotates each (x_k, theta_k) by -alpha and removes r1; the result has zero
/// regression slope.
std::vector<double> rotate_symbol(std::span<const double> unwrapped_row, std::span<const double> abscissa,
                                  const RegressionFit &fit);

/// Linear regression and rotation sanitization of every symbol.
/// `map` is required when `abscissa` is physical.
PhaseMatrix lrr_calibrate(const PhaseMatrix &raw, Abscissa abscissa = Abscissa::ordinal,
                          const SubcarrierMap *map = nullptr);

/// 1, 2, ..., K
std::vector<double> ordinal_abscissa(std::size_t count);

} // namespace csikit
