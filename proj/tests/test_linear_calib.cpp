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
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>

using namespace csikit;

namespace
{

PhaseMatrix raw_rows(std::vector<std::vector<double>> rows)
{
    return PhaseMatrix(RealMatrix::from_rows(rows), PhaseStage::raw);
}

std::vector<double> row_of(const PhaseMatrix &p, std::size_t s)
{
    const auto r = p.values().row(s);
    return {r.begin(), r.end()};
}

/// Random continuous row: a random walk with steps below 1 rad, wrapped.
std::vector<double> continuous_row(oracle::Random &rng, std::size_t K)
{
    std::vector<double> row(K);
    double acc = rng.uniform(-pi, pi);
    for (auto &x : row)
    {
        x = acc;
        acc += rng.uniform(-0.9, 0.9);
    }
    return row;
}

} // namespace

TEST_CASE("lt_calibrate on 2k+1")
{
    const auto map = SubcarrierMap::contiguous(5, 64);
    const auto fit = lt_fit(std::vector<double>{3, 5, 7, 9, 11}, map);
    CHECK(fit.epsilon == 2.0);
    CHECK(fit.tau == 7.0);
    const PhaseMatrix out = lt_calibrate(raw_rows({{3, 5, 7, 9, 11}}), map);
    CHECK(out.stage() == PhaseStage::calibrated);
    for (double v : out.values().data())
        CHECK(v == doctest::Approx(-6.0).epsilon(1e-15));
}

TEST_CASE("lt_calibrate constant row and degenerate map")
{
    const PhaseMatrix out = lt_calibrate(raw_rows({{0.7, 0.7, 0.7}}), SubcarrierMap::contiguous(3, 64));
    for (double v : out.values().data())
        CHECK(v == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK_THROWS_AS(lt_calibrate(raw_rows({{0.1, 0.2}}), SubcarrierMap::contiguous(3, 64)), DataError);
    CHECK_THROWS_AS(lt_calibrate(PhaseMatrix(RealMatrix(1, 3, 0.0), PhaseStage::calibrated),
                                 SubcarrierMap::contiguous(3, 64)),
                    DataError);
}

TEST_CASE("lt_calibrate linear invariance on random rows")
{
    oracle::Random rng(21);
    const SubcarrierMap map({-28, -26, -24, -22, -20, -18, -16, -14, -12, -10, -8, -6, -4, -2, -1,
                             1,   2,   4,   6,   8,   10,  12,  14,  16,  18,  20,  22,  24,  26,  28},
                            64);
    const double mean_m = map.mean_index();
    for (int trial = 0; trial < 50; ++trial)
    {
        const std::size_t K = map.size();
        auto theta = continuous_row(rng, K);
        // keep every shifted step below pi: steps < 0.9 rad, m gaps <= 2
        const double c = rng.uniform(-0.5, 0.5);
        const double d = rng.uniform(-3, 3);
        std::vector<double> shifted(K);
        for (std::size_t k = 0; k < K; ++k)
            shifted[k] = theta[k] + c * map[k] + d;

        const auto base = row_of(lt_calibrate(raw_rows({theta}), map), 0);
        const auto moved = row_of(lt_calibrate(raw_rows({shifted}), map), 0);
        for (std::size_t k = 0; k < K; ++k)
            CHECK(std::abs(moved[k] - base[k] + c * mean_m) <= 1e-12);
    }
}

TEST_CASE("regress_symbol closed forms")
{
    auto fit = regress_symbol(std::vector<double>{1, 2, 3});
    CHECK(fit.a == doctest::Approx(1.0).epsilon(1e-15));
    CHECK(fit.b == doctest::Approx(0.0).scale(1.0).epsilon(1e-15));
    CHECK(fit.alpha == doctest::Approx(pi / 4).epsilon(1e-15));
    CHECK(fit.r1 == doctest::Approx(1.0).epsilon(1e-15));

    fit = regress_symbol(std::vector<double>{2.5, 2.5, 2.5});
    CHECK(fit.a == 0.0);
    CHECK(fit.b == 2.5);
    CHECK(fit.alpha == 0.0);
    CHECK(fit.r1 == 2.5);

    fit = regress_symbol(std::vector<double>{3, 5, 7, 9, 11});
    CHECK(fit.a == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(fit.b == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(fit.alpha == doctest::Approx(std::atan(2.0)).epsilon(1e-15));
    CHECK(fit.alpha == doctest::Approx(1.1071).epsilon(1e-4));
    CHECK(fit.r1 == doctest::Approx(3.0).epsilon(1e-15));
    CHECK(fit.r1 == fit.a + fit.b);
}

TEST_CASE("regress_symbol agrees with the OLS oracle")
{
    oracle::Random rng(4);
    for (int trial = 0; trial < 100; ++trial)
    {
        const std::size_t K = static_cast<std::size_t>(rng.integer(2, 100));
        std::vector<double> y(K), x(K);
        for (std::size_t k = 0; k < K; ++k)
        {
            y[k] = rng.uniform(-5, 5);
            x[k] = static_cast<double>(k + 1);
        }
        const auto fit = regress_symbol(y);
        CHECK(fit.a == doctest::Approx(oracle::ols_slope(x, y)).epsilon(1e-12).scale(1.0));
        CHECK(std::abs(fit.alpha) < pi / 2);
    }
}

TEST_CASE("lrr_calibrate examples")
{
    auto out = lrr_calibrate(raw_rows({{1, 2, 3}}));
    CHECK(out.stage() == PhaseStage::calibrated);
    for (double v : out.values().data())
        CHECK(v == doctest::Approx(-1.0).epsilon(1e-14));

    out = lrr_calibrate(raw_rows({{1.25, 1.25, 1.25, 1.25}}));
    for (double v : out.values().data())
        CHECK(v == 0.0);

    std::vector<double> affine(11);
    for (std::size_t k = 0; k < affine.size(); ++k)
        affine[k] = 0.1 * static_cast<double>(k + 1) + 2.0;
    out = lrr_calibrate(raw_rows({affine}));
    const double expected = 2.0 * std::cos(std::atan(0.1)) - 2.1;
    CHECK(expected == doctest::Approx(-0.109926).epsilon(1e-5));
    const auto row = row_of(out, 0);
    for (double v : row)
        CHECK(v == doctest::Approx(expected).epsilon(1e-12));
    const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
    CHECK(*hi - *lo <= 1e-12);
}

TEST_CASE("lrr_calibrate flattens random rows")
{
    oracle::Random rng(99);
    RealMatrix m(40, 64);
    for (auto &v : m.data())
        v = rng.uniform(-pi, pi);
    const PhaseMatrix out = lrr_calibrate(PhaseMatrix(m));
    REQUIRE(out.values().same_shape(m));
    const auto x = ordinal_abscissa(64);
    for (std::size_t s = 0; s < 40; ++s)
        CHECK(std::abs(oracle::ols_slope(x, row_of(out, s))) <= 1e-9);
}

TEST_CASE("lrr_calibrate with the physical abscissa")
{
    const SubcarrierMap map({-3, -1, 2, 6}, 64);
    std::vector<double> row;
    for (int m : map.indices())
        row.push_back(0.05 * m + 0.3);
    const auto out = row_of(lrr_calibrate(raw_rows({row}), Abscissa::physical, &map), 0);
    const double alpha = std::atan(0.05);
    for (double v : out)
        CHECK(v == doctest::Approx(0.3 * std::cos(alpha) - (0.05 * -3 + 0.3)).epsilon(1e-12));

    std::vector<double> x(map.indices().begin(), map.indices().end());
    oracle::Random rng(8);
    for (auto &v : row)
        v = rng.uniform(-1, 1);
    const auto noisy = row_of(lrr_calibrate(raw_rows({row}), Abscissa::physical, &map), 0);
    CHECK(std::abs(oracle::ols_slope(x, noisy)) <= 1e-9);

    CHECK_THROWS_AS(lrr_calibrate(raw_rows({row}), Abscissa::physical), DataError);
}
