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

#include "csikit/parallel.hpp"
#include "csikit/synth.hpp"
#include "csikit/tsfr.hpp"
#include "oracles.hpp"

#include <doctest.h>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

using namespace csikit;

namespace
{

using Rows = std::vector<std::vector<double>>;

/// Test-side TSFR: unwrap, OLS + rotation, column unwrap, brute-force SG,
/// row unwraps, gap statistics and the scalar rebuild trace. Returns the
/// per-symbol fraction of clamped steps.
std::vector<double> oracle_fractions(const Rows &raw, int order, int window)
{
    const std::size_t S = raw.size();
    const std::size_t K = raw.front().size();
    Rows cal(S);
    std::vector<double> x(K);
    std::iota(x.begin(), x.end(), 1.0);
    for (std::size_t s = 0; s < S; ++s)
    {
        const auto th = oracle::naive_unwrap(raw[s]);
        const double a = oracle::ols_slope(x, th);
        const double mean_t = std::accumulate(th.begin(), th.end(), 0.0) / static_cast<double>(K);
        const double mean_x = (static_cast<double>(K) + 1.0) / 2.0;
        const double b = mean_t - a * mean_x;
        const double alpha = std::atan(a);
        for (std::size_t k = 0; k < K; ++k)
            cal[s].push_back(-x[k] * std::sin(alpha) + th[k] * std::cos(alpha) - (a + b));
    }
    Rows smooth(S, std::vector<double>(K));
    for (std::size_t k = 0; k < K; ++k)
    {
        std::vector<double> col(S);
        for (std::size_t s = 0; s < S; ++s)
            col[s] = cal[s][k];
        const auto f = oracle::naive_sg(oracle::naive_unwrap(col), order, window);
        for (std::size_t s = 0; s < S; ++s)
            smooth[s][k] = f[s];
    }
    std::vector<double> fraction(S);
    for (std::size_t s = 0; s < S; ++s)
    {
        const auto theta = oracle::naive_unwrap(cal[s]);
        double mu = 0;
        for (std::size_t k = 1; k < K; ++k)
            mu += std::abs(theta[k] - theta[k - 1]);
        mu /= static_cast<double>(K - 1);
        double var = 0;
        for (std::size_t k = 1; k < K; ++k)
            var += std::pow(std::abs(theta[k] - theta[k - 1]) - mu, 2);
        const double d = mu + std::sqrt(var / static_cast<double>(K - 1));

        const auto phi = oracle::naive_unwrap(smooth[s]);
        std::size_t flagged = 0;
        for (std::size_t k = 1; k < K; ++k)
            flagged += std::abs(phi[k] - phi[k - 1]) > d;
        fraction[s] = static_cast<double>(flagged) / static_cast<double>(K - 1);
    }
    return fraction;
}

Rows rows_of(const RealMatrix &m)
{
    Rows out(m.rows());
    for (std::size_t s = 0; s < m.rows(); ++s)
        out[s].assign(m.row(s).begin(), m.row(s).end());
    return out;
}

double mean(const std::vector<double> &v) { return std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size()); }

} // namespace

TEST_CASE("gap_stats examples")
{
    auto g = gap_stats(std::vector<double>{0, 1, 3, 6});
    CHECK(g.mu == doctest::Approx(2.0).epsilon(1e-15));
    CHECK(g.sigma == doctest::Approx(std::sqrt(2.0 / 3.0)).epsilon(1e-15));
    CHECK(g.d == doctest::Approx(2.8165).epsilon(1e-4));
    CHECK(g.d == g.mu + g.sigma);

    g = gap_stats(std::vector<double>{1.0, 0.5, 0.0, -0.5});
    CHECK(g.mu == 0.5);
    CHECK(g.sigma == 0.0);
    CHECK(g.d == 0.5);

    g = gap_stats(std::vector<double>{2, 2, 2});
    CHECK(g.mu == 0.0);
    CHECK(g.sigma == 0.0);
    CHECK(g.d == 0.0);

    CHECK_THROWS_AS(gap_stats(std::vector<double>{1.0}), DataError);
}

TEST_CASE("rebuild_symbol examples")
{
    auto r = rebuild_symbol(std::vector<double>{0, 5, 5.5}, 2.0);
    CHECK(r.phase == std::vector<double>{0, 2, 2.5});
    CHECK(r.branch[1] == RebuildBranch::clamp_up);
    CHECK(r.branch[2] == RebuildBranch::follow);
    CHECK(r.flagged() == 1);

    r = rebuild_symbol(std::vector<double>{0, -5, -5.2}, 2.0);
    CHECK(r.phase[1] == -2.0);
    CHECK(r.phase[2] == doctest::Approx(-2.2).epsilon(1e-15));
    CHECK(r.branch[1] == RebuildBranch::clamp_down);

    const std::vector<double> calm{0.3, 0.1, 0.4, 0.35};
    CHECK(rebuild_symbol(calm, 0.5).phase == calm);

    CHECK_THROWS_AS(rebuild_symbol(std::vector<double>{1.0}, 1.0), DataError);
    CHECK_THROWS_AS(rebuild_symbol(calm, -0.1), DataError);
}

TEST_CASE("rebuild_symbol properties on random rows")
{
    oracle::Random rng(61);
    for (int trial = 0; trial < 1000; ++trial)
    {
        const std::size_t K = static_cast<std::size_t>(rng.integer(2, 256));
        std::vector<double> row(K);
        double acc = 0.0;
        for (auto &v : row)
            v = acc += rng.normal(0.3);
        const double d = rng.uniform(0.0, 0.6);
        const auto r = rebuild_symbol(row, d);

        CHECK(r.phase == oracle::naive_rebuild(row, d));
        for (std::size_t k = 1; k < K; ++k)
        {
            const double step = r.phase[k] - r.phase[k - 1];
            CHECK(std::abs(step) <= d + 1e-12);
            if (r.branch[k] == RebuildBranch::clamp_up)
                CHECK(std::abs(step - d) <= 1e-12);
            if (r.branch[k] == RebuildBranch::clamp_down)
                CHECK(std::abs(step + d) <= 1e-12);
        }
        if (r.flagged() == 0)
            CHECK(r.phase == row);
    }
}

TEST_CASE("tsfr on noiseless affine impairments gives flat rows")
{
    const std::size_t S = 50, K = 30;
    ChannelSpec flat;
    flat.paths = {{0.0, {1.0, 0.0}}};
    ImpairmentSpec imp;
    imp.map = SubcarrierMap::contiguous(K, 64);
    oracle::Random rng(71);
    for (std::size_t s = 0; s < S; ++s)
    {
        imp.delta_t.push_back(rng.uniform(-2, 2));
        imp.gamma.push_back(rng.uniform(-pi, pi));
    }
    const auto data = gen_dataset(flat, imp, S);
    const auto result = tsfr(decompose(data.measured_csi).phase);
    CHECK(result.rebuilt.stage() == PhaseStage::rebuilt);
    for (std::size_t s = 0; s < S; ++s)
    {
        const auto row = result.rebuilt.values().row(s);
        const auto [lo, hi] = std::minmax_element(row.begin(), row.end());
        CHECK(*hi - *lo <= 1e-6);
    }
}

TEST_CASE("tsfr report is consistent with the rebuild")
{
    const auto data = synthesize(demo_config(), 200, 52, 3);
    const auto result = tsfr(decompose(data.measured_csi).phase);
    const auto &rep = result.report;
    REQUIRE(rep.symbols() == 200);
    CHECK(rep.subcarriers == 52);
    for (std::size_t s = 0; s < 200; ++s)
    {
        const auto &g = rep.thresholds[s];
        CHECK(g.d == g.mu + g.sigma);
        const auto phi = unwrap(result.smoothed.values().row(s));
        std::size_t marks = 0;
        CHECK(rep.exceedance(s, 0) == 0);
        for (std::size_t k = 1; k < 52; ++k)
        {
            const bool over = std::abs(phi[k] - phi[k - 1]) > g.d;
            CHECK(static_cast<bool>(rep.exceedance(s, k)) == over);
            marks += over;
        }
        CHECK(marks == rep.flagged(s));
        CHECK(rep.modified_fraction[s] == static_cast<double>(marks) / 51.0);
        CHECK(rep.modified_fraction[s] >= 0.0);
        CHECK(rep.modified_fraction[s] <= 1.0);
    }
}

TEST_CASE("tsfr modified fraction matches the Monte Carlo oracle")
{
    // A static six-path channel gives each symbol a frequency profile with
    // random adjacent-subcarrier steps that time smoothing keeps.
    SynthConfig config = demo_config();
    oracle::Random paths(5);
    config.channel.paths.clear();
    for (int p = 0; p < 6; ++p)
    {
        const double decay = std::exp(-0.3 * p);
        config.channel.paths.push_back(
            {p == 0 ? 0.0 : paths.uniform(0, 8), {paths.normal(1) * decay, paths.normal(1) * decay}});
    }
    config.noise_sigma = 0.1;
    const std::size_t S = 1000, K = 52;
    const int window = sg_window_for(S, 0.1, 2);

    const auto data = synthesize(config, S, K, 7);
    const PhaseMatrix raw = decompose(data.measured_csi).phase;
    const auto lib = tsfr(raw).report.modified_fraction;
    CHECK(mean(lib) > 0.02);

    // Same input, independent pipeline: symbol by symbol within 2 points.
    const auto same = oracle_fractions(rows_of(raw.values()), 2, window);
    for (std::size_t s = 0; s < S; ++s)
        CHECK(std::abs(lib[s] - same[s]) <= 0.02);

    // Independent draws of the same forward model: mean within 2 points.
    oracle::Random rng(2024);
    Rows fresh(S, std::vector<double>(K));
    for (std::size_t s = 0; s < S; ++s)
    {
        const double dt = rng.uniform(-2, 2);
        const double gamma = rng.uniform(-pi, pi);
        for (std::size_t k = 0; k < K; ++k)
        {
            const double m = static_cast<double>(k + 1);
            cdouble h{};
            for (std::size_t p = 0; p < config.channel.paths.size(); ++p)
            {
                const auto &path = config.channel.paths[p];
                const double drift = 1.0 + config.channel.drift_depth *
                                               std::sin(two_pi * static_cast<double>(s) / config.channel.drift_period +
                                                        static_cast<double>(p));
                h += path.gain * drift * std::polar(1.0, -two_pi * m * path.delay / 64.0);
            }
            fresh[s][k] = wrap_to_pi(std::arg(h) + two_pi * m / 64.0 * dt + gamma + rng.normal(0.1));
        }
    }
    const double mc = mean(oracle_fractions(fresh, 2, window));
    MESSAGE("library mean fraction " << mean(lib) << ", Monte Carlo " << mc);
    CHECK(std::abs(mean(lib) - mc) <= 0.02);
}

TEST_CASE("tsfr is deterministic across thread counts")
{
    const auto data = synthesize(demo_config(), 300, 52, 11);
    const PhaseMatrix raw = decompose(data.measured_csi).phase;
    set_thread_count(1);
    const auto a = tsfr(raw);
    set_thread_count(4);
    const auto b = tsfr(raw);
    set_thread_count(0);
    CHECK(a.rebuilt.values() == b.rebuilt.values());
    CHECK(a.report.exceedance == b.report.exceedance);
    CHECK_THROWS_AS(tsfr(PhaseMatrix(RealMatrix(2, 10, 0.0))), DataError);
}

TEST_CASE("method names")
{
    CHECK(method_names() == "raw|lt|lrr|lrr+sgfreq|lrr+sgtime|lrr+sg2d|tsfr");
    for (Method m : all_methods())
        CHECK(parse_method(to_string(m)) == m);
    CHECK_FALSE(parse_method("lrr+sg3d").has_value());
}

TEST_CASE("process keeps amplitudes for every method")
{
    const auto data = synthesize(demo_config(), 120, 52, 5);
    const auto expected = decompose(data.measured_csi).amplitude;
    for (Method m : all_methods())
    {
        CAPTURE(to_string(m));
        const auto r = process(data.measured_csi, m);
        CHECK(r.amplitude.values() == expected.values());
        CHECK(r.report.has_value() == (m == Method::tsfr));
        for (std::size_t s = 0; s < 120; ++s)
            for (std::size_t k = 0; k < 52; ++k)
            {
                const double a = expected.values()(s, k);
                CHECK(std::abs(std::abs(r.csi(s, k)) - a) <= 4 * std::numeric_limits<double>::epsilon() * a);
            }
    }
}

TEST_CASE("process raw is a round trip")
{
    const auto data = synthesize(demo_config(), 20, 52, 9);
    const auto r = process(data.measured_csi, Method::raw);
    for (std::size_t i = 0; i < r.csi.values().size(); ++i)
    {
        const cdouble x = data.measured_csi.values().data()[i];
        CHECK(std::abs(r.csi.values().data()[i] - x) <= 1e-12 * std::abs(x));
    }
    ProcessParams params;
    params.map = SubcarrierMap::contiguous(10, 64);
    CHECK_THROWS_AS(process(data.measured_csi, Method::lt, params), DataError);
}

TEST_CASE("lrr+sgtime and tsfr part ways at the flagged subcarrier")
{
    const std::size_t S = 30, K = 20, step_at = 10;
    oracle::Random rng(81);
    ComplexMatrix m(S, K);
    for (std::size_t s = 0; s < S; ++s)
        for (std::size_t k = 0; k < K; ++k)
        {
            const double phase = 0.05 * static_cast<double>(k) + (k >= step_at ? 1.5 : 0.0) + rng.uniform(-0.02, 0.02);
            m(s, k) = std::polar(1.0 + 0.1 * static_cast<double>(k), phase);
        }
    const CsiMatrix csi(m);
    const auto plain = process(csi, Method::lrr_sg_time);
    const auto rebuilt = process(csi, Method::tsfr);
    REQUIRE(rebuilt.report);
    for (std::size_t s = 0; s < S; ++s)
    {
        CAPTURE(s);
        CHECK(rebuilt.report->flagged(s) == 1);
        CHECK(rebuilt.report->exceedance(s, step_at) == 1);
        for (std::size_t k = 0; k < K; ++k)
        {
            if (k < step_at)
                CHECK(rebuilt.csi(s, k) == plain.csi(s, k));
            else
                CHECK(std::abs(rebuilt.csi(s, k) - plain.csi(s, k)) > 1e-3);
        }
    }
}
