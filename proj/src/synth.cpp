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

#include "csikit/synth.hpp"

#include "text_util.hpp"

#include <cmath>
#include <string>

namespace csikit
{

std::uint64_t splitmix64(std::uint64_t x) noexcept
{
    x += 0x9E3779B97F4A7C15ull;
    x = (x ^ (x >> 30)) * 0xBF58476D1CE4E5B9ull;
    x = (x ^ (x >> 27)) * 0x94D049BB133111EBull;
    return x ^ (x >> 31);
}

Rng::Rng(std::uint64_t seed, std::uint64_t stream) : engine_(splitmix64(seed ^ splitmix64(stream))) {}

double Rng::uniform()
{
    return static_cast<double>(engine_() >> 11) * 0x1.0p-53;
}

double Rng::normal()
{
    if (has_spare_)
    {
        has_spare_ = false;
        return spare_;
    }
    const double u1 = 1.0 - uniform(); // (0, 1]
    const double u2 = uniform();
    const double r = std::sqrt(-2.0 * std::log(u1));
    spare_ = r * std::sin(two_pi * u2);
    has_spare_ = true;
    return r * std::cos(two_pi * u2);
}

// ---------------------------------------------------------------------------

void ChannelSpec::validate(int n_fft) const
{
    if (paths.empty())
        throw DataError("channel needs at least one path");
    for (std::size_t p = 0; p < paths.size(); ++p)
    {
        const double d = paths[p].delay;
        if (!std::isfinite(d) || d < 0.0 || d >= n_fft)
            throw DataError("path " + std::to_string(p) + " delay must lie in [0, " + std::to_string(n_fft) + ")");
        if (!std::isfinite(paths[p].gain.real()) || !std::isfinite(paths[p].gain.imag()))
            throw DataError("path " + std::to_string(p) + " gain is not finite");
    }
    if (drift_depth != 0.0 && !(drift_period > 0.0))
        throw DataError("gain drift needs a positive period");
}

void ImpairmentSpec::validate(std::size_t symbols, std::size_t subcarriers) const
{
    if (delta_t.size() != symbols || gamma.size() != symbols)
        throw DataError("impairments cover " + std::to_string(delta_t.size()) + " / " +
                        std::to_string(gamma.size()) + " symbols, matrix has " + std::to_string(symbols));
    if (map.size() != subcarriers)
        throw DataError("subcarrier map has " + std::to_string(map.size()) + " entries for " +
                        std::to_string(subcarriers) + " subcarriers");
    if (!(noise_sigma >= 0.0) || !(gain_noise_sigma >= 0.0))
        throw DataError("noise levels must be non-negative");
}

CsiMatrix gen_true_csi(const ChannelSpec &channel, std::size_t symbols, const SubcarrierMap &map)
{
    channel.validate(map.n_fft());
    if (symbols < 1)
        throw DataError("need at least one symbol");
    const std::size_t K = map.size();
    const double n = static_cast<double>(map.n_fft());

    // Per-path frequency responses do not change over time; only gains drift.
    std::vector<std::vector<cdouble>> response(channel.paths.size(), std::vector<cdouble>(K));
    for (std::size_t p = 0; p < channel.paths.size(); ++p)
        for (std::size_t k = 0; k < K; ++k)
            response[p][k] = std::polar(1.0, -two_pi * map[k] * channel.paths[p].delay / n);

    ComplexMatrix h(symbols, K, cdouble{});
    for (std::size_t s = 0; s < symbols; ++s)
        for (std::size_t p = 0; p < channel.paths.size(); ++p)
        {
            cdouble g = channel.paths[p].gain;
            if (channel.drift_depth != 0.0)
                g *= 1.0 + channel.drift_depth *
                               std::sin(two_pi * static_cast<double>(s) / channel.drift_period + static_cast<double>(p));
            for (std::size_t k = 0; k < K; ++k)
                h(s, k) += g * response[p][k];
        }
    return CsiMatrix(std::move(h));
}

SynthOutput apply_impairments(const CsiMatrix &true_csi, const ImpairmentSpec &imp)
{
    const std::size_t S = true_csi.symbols();
    const std::size_t K = true_csi.subcarriers();
    imp.validate(S, K);
    const double n = static_cast<double>(imp.map.n_fft());

    ComplexMatrix measured(S, K);
    for (std::size_t s = 0; s < S; ++s)
    {
        Rng rng(imp.seed, s);
        for (std::size_t k = 0; k < K; ++k)
        {
            double offset = two_pi * (imp.map[k] / n) * imp.delta_t[s] + imp.gamma[s];
            if (imp.noise_sigma > 0.0)
                offset += imp.noise_sigma * rng.normal();
            const cdouble h = true_csi(s, k);
            measured(s, k) = offset == 0.0 ? h : h * cdouble(std::cos(offset), std::sin(offset));
        }
    }

    if (imp.gain_noise_sigma > 0.0)
    {
        Rng rng(imp.seed, stream_gain_noise);
        const double scale = imp.gain_noise_sigma / std::sqrt(2.0);
        for (std::size_t s = 0; s < S; ++s)
            for (std::size_t k = 0; k < K; ++k)
            {
                const double re = rng.normal();
                const double im = rng.normal();
                measured(s, k) += cdouble(scale * re, scale * im);
            }
    }
    return {true_csi, CsiMatrix(std::move(measured)), imp};
}

SynthOutput gen_dataset(const ChannelSpec &channel, const ImpairmentSpec &imp, std::size_t symbols)
{
    return apply_impairments(gen_true_csi(channel, symbols, imp.map), imp);
}

// ---------------------------------------------------------------------------

SubcarrierMap SynthConfig::subcarrier_map(std::size_t count) const
{
    if (!indices.empty())
    {
        if (indices.size() != count)
            throw DataError("spec lists " + std::to_string(indices.size()) + " subcarrier indices but " +
                            std::to_string(count) + " subcarriers were requested");
        return SubcarrierMap(indices, n_fft);
    }
    return SubcarrierMap::contiguous(count, n_fft, first_index);
}

SynthConfig demo_config()
{
    SynthConfig c;
    c.channel.paths = {{0.0, {1.0, 0.0}}, {1.5, {0.25, 0.15}}, {3.0, {-0.1, 0.1}}};
    c.channel.drift_depth = 0.2;
    c.channel.drift_period = 250.0;
    c.n_fft = 64;
    c.first_index = 1;
    c.delta_t_lo = -2.0;
    c.delta_t_hi = 2.0;
    c.gamma_lo = -pi;
    c.gamma_hi = pi;
    c.noise_sigma = 0.05;
    c.symbols = 1000;
    c.subcarriers = 52;
    return c;
}

namespace
{

[[noreturn]] void spec_error(std::size_t line, const std::string &what)
{
    throw FormatError(FormatErrc::spec_syntax, "line " + std::to_string(line) + ": " + what, line);
}

double number(std::string_view s, std::size_t line)
{
    const auto v = text::parse_double(s);
    if (!v || !std::isfinite(*v))
        spec_error(line, "expected a number, got '" + std::string(s) + "'");
    return *v;
}

template <typename Int>
Int integer(std::string_view s, std::size_t line)
{
    const auto v = text::parse_int<Int>(s);
    if (!v)
        spec_error(line, "expected an integer, got '" + std::string(s) + "'");
    return *v;
}

std::vector<std::string_view> arity(std::string_view value, std::size_t n, std::size_t line, const char *key)
{
    auto w = text::words(value);
    if (w.size() != n)
        spec_error(line, std::string(key) + " takes " + std::to_string(n) + " value(s)");
    return w;
}

} // namespace

SynthConfig parse_synth_config(std::string_view source)
{
    SynthConfig c;
    c.channel.paths.clear();
    std::size_t line_no = 0;
    for (std::string_view raw : text::split(source, '\n'))
    {
        ++line_no;
        std::string_view line = raw.substr(0, raw.find('#'));
        line = text::trim(line);
        if (line.empty())
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            spec_error(line_no, "expected 'key = value'");
        const std::string_view key = text::trim(line.substr(0, eq));
        const std::string_view value = text::trim(line.substr(eq + 1));

        if (key == "n_fft")
            c.n_fft = integer<int>(value, line_no);
        else if (key == "first_index")
            c.first_index = integer<int>(value, line_no);
        else if (key == "indices")
        {
            c.indices.clear();
            for (auto item : text::split(value, ','))
                c.indices.push_back(integer<int>(item, line_no));
        }
        else if (key == "path")
        {
            const auto w = arity(value, 3, line_no, "path");
            c.channel.paths.push_back(
                {number(w[0], line_no), cdouble(number(w[1], line_no), number(w[2], line_no))});
        }
        else if (key == "drift_depth")
            c.channel.drift_depth = number(value, line_no);
        else if (key == "drift_period")
            c.channel.drift_period = number(value, line_no);
        else if (key == "delta_t")
            c.delta_t_lo = c.delta_t_hi = number(value, line_no);
        else if (key == "delta_t_range")
        {
            const auto w = arity(value, 2, line_no, "delta_t_range");
            c.delta_t_lo = number(w[0], line_no);
            c.delta_t_hi = number(w[1], line_no);
        }
        else if (key == "gamma")
            c.gamma_lo = c.gamma_hi = number(value, line_no);
        else if (key == "gamma_range")
        {
            const auto w = arity(value, 2, line_no, "gamma_range");
            c.gamma_lo = number(w[0], line_no);
            c.gamma_hi = number(w[1], line_no);
        }
        else if (key == "noise_sigma")
            c.noise_sigma = number(value, line_no);
        else if (key == "gain_noise_sigma")
            c.gain_noise_sigma = number(value, line_no);
        else if (key == "symbols")
            c.symbols = integer<std::size_t>(value, line_no);
        else if (key == "subcarriers")
            c.subcarriers = integer<std::size_t>(value, line_no);
        else
            spec_error(line_no, "unknown key '" + std::string(key) + "'");
    }
    if (c.delta_t_hi < c.delta_t_lo || c.gamma_hi < c.gamma_lo)
        throw FormatError(FormatErrc::spec_syntax, "range upper bound below lower bound");
    return c;
}

std::string format_synth_config(const SynthConfig &c)
{
    using text::format_double;
    std::string out = "# csikit synth spec v1\n";
    out += "# path = delay_samples gain_re gain_im (repeat per path)\n";
    out += "n_fft = " + std::to_string(c.n_fft) + "\n";
    if (c.indices.empty())
        out += "first_index = " + std::to_string(c.first_index) + "\n";
    else
    {
        out += "indices = ";
        for (std::size_t i = 0; i < c.indices.size(); ++i)
            out += (i ? "," : "") + std::to_string(c.indices[i]);
        out += "\n";
    }
    out += "symbols = " + std::to_string(c.symbols) + "\n";
    out += "subcarriers = " + std::to_string(c.subcarriers) + "\n";
    for (const auto &p : c.channel.paths)
        out += "path = " + format_double(p.delay) + " " + format_double(p.gain.real()) + " " +
               format_double(p.gain.imag()) + "\n";
    out += "drift_depth = " + format_double(c.channel.drift_depth) + "\n";
    out += "drift_period = " + format_double(c.channel.drift_period) + "\n";
    out += "delta_t_range = " + format_double(c.delta_t_lo) + " " + format_double(c.delta_t_hi) + "\n";
    out += "gamma_range = " + format_double(c.gamma_lo) + " " + format_double(c.gamma_hi) + "\n";
    out += "noise_sigma = " + format_double(c.noise_sigma) + "\n";
    out += "gain_noise_sigma = " + format_double(c.gain_noise_sigma) + "\n";
    return out;
}

ImpairmentSpec draw_impairments(const SynthConfig &config, std::size_t symbols, std::size_t subcarriers,
                                std::uint64_t seed)
{
    ImpairmentSpec imp;
    imp.seed = seed;
    imp.map = config.subcarrier_map(subcarriers);
    imp.noise_sigma = config.noise_sigma;
    imp.gain_noise_sigma = config.gain_noise_sigma;
    imp.delta_t.resize(symbols);
    imp.gamma.resize(symbols);

    // Both draws land in (lo, hi].
    Rng dt_rng(seed, stream_delta_t);
    Rng gamma_rng(seed, stream_gamma);
    for (std::size_t s = 0; s < symbols; ++s)
    {
        imp.delta_t[s] = config.delta_t_hi - (config.delta_t_hi - config.delta_t_lo) * dt_rng.uniform();
        imp.gamma[s] = config.gamma_hi - (config.gamma_hi - config.gamma_lo) * gamma_rng.uniform();
    }
    return imp;
}

SynthOutput synthesize(const SynthConfig &config, std::size_t symbols, std::size_t subcarriers, std::uint64_t seed)
{
    const ImpairmentSpec imp = draw_impairments(config, symbols, subcarriers, seed);
    return gen_dataset(config.channel, imp, symbols);
}

} // namespace csikit
