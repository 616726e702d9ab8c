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

#include "csikit/savgol.hpp"

#include "csikit/parallel.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <string>

namespace csikit
{

namespace
{

/// Orthonormal basis (thin Q) of the column space of a design matrix.
Eigen::MatrixXd orthonormal_basis(const Eigen::MatrixXd &design)
{
    Eigen::HouseholderQR<Eigen::MatrixXd> qr(design);
    return qr.householderQ() * Eigen::MatrixXd::Identity(design.rows(), design.cols());
}

/// Abscissas -l..l scaled to [-1, 1] to keep the Vandermonde well conditioned.
double scaled(int offset, int half) { return static_cast<double>(offset) / static_cast<double>(half); }

std::string window_message(std::size_t length, int window)
{
    return "vector of length " + std::to_string(length) + " is shorter than window " + std::to_string(window) +
           "; returned unsmoothed";
}

} // namespace

void SgSpec::validate() const
{
    if (order < 0)
        throw DataError("Savitzky-Golay order must be non-negative");
    if (window < 3 || window % 2 == 0)
        throw DataError("Savitzky-Golay window must be odd and at least 3, got " + std::to_string(window));
    if (window <= order)
        throw DataError("Savitzky-Golay window " + std::to_string(window) + " too short for order " +
                        std::to_string(order));
}

SgKernel sg_design(const SgSpec &spec)
{
    spec.validate();
    const int w = spec.window;
    const int half = w / 2;

    Eigen::MatrixXd design(w, spec.order + 1);
    for (int i = 0; i < w; ++i)
    {
        const double t = scaled(i - half, half);
        double p = 1.0;
        for (int j = 0; j <= spec.order; ++j, p *= t)
            design(i, j) = p;
    }
    const Eigen::MatrixXd q = orthonormal_basis(design);
    // Row p of the hat matrix Q Q^T evaluates the fit at sample p.
    auto hat_row = [&](int p) {
        const Eigen::VectorXd r = q * q.row(p).transpose();
        return std::vector<double>(r.data(), r.data() + r.size());
    };

    SgKernel kernel;
    kernel.spec = spec;
    kernel.central = hat_row(half);
    for (int p = 0; p < half; ++p)
    {
        kernel.leading.push_back(hat_row(p));
        kernel.trailing.push_back(hat_row(half + 1 + p));
    }
    return kernel;
}

std::vector<double> sg_apply(std::span<const double> v, const SgKernel &kernel, std::vector<std::string> *warnings)
{
    const std::size_t n = v.size();
    const std::size_t w = static_cast<std::size_t>(kernel.spec.window);
    const std::size_t half = w / 2;
    if (n < w)
    {
        if (warnings)
            warnings->push_back(window_message(n, kernel.spec.window));
        return {v.begin(), v.end()};
    }

    std::vector<double> out(n);
    for (std::size_t i = half; i + half < n; ++i)
    {
        double acc = 0.0;
        const double *x = v.data() + (i - half);
        for (std::size_t j = 0; j < w; ++j)
            acc += kernel.central[j] * x[j];
        out[i] = acc;
    }
    const double *tail = v.data() + (n - w);
    for (std::size_t p = 0; p < half; ++p)
    {
        double head_acc = 0.0;
        double tail_acc = 0.0;
        for (std::size_t j = 0; j < w; ++j)
        {
            head_acc += kernel.leading[p][j] * v[j];
            tail_acc += kernel.trailing[p][j] * tail[j];
        }
        out[p] = head_acc;
        out[n - half + p] = tail_acc;
    }
    return out;
}

std::vector<double> sg_apply(std::span<const double> v, const SgSpec &spec, std::vector<std::string> *warnings)
{
    return sg_apply(v, sg_design(spec), warnings);
}

int sg_window_for(std::size_t length, double fraction, int order)
{
    if (length < 3)
        throw DataError("need at least 3 samples to smooth, got " + std::to_string(length));
    if (!(fraction > 0.0) || !std::isfinite(fraction))
        throw DataError("window fraction must be positive");
    const long long largest_odd = static_cast<long long>(length) - static_cast<long long>((length + 1) % 2);
    long long w = std::llround(fraction * static_cast<double>(length));
    if (w % 2 == 0)
        ++w;
    w = std::clamp<long long>(w, 3, largest_odd);
    if (w <= order)
    {
        w = order + 1;
        if (w % 2 == 0)
            ++w;
        if (w > largest_odd)
            throw DataError("length " + std::to_string(length) + " cannot hold a window for order " +
                            std::to_string(order));
    }
    return static_cast<int>(w);
}

PhaseMatrix sg_time(const PhaseMatrix &phase, const SgSpec &spec, std::vector<std::string> *warnings)
{
    if (phase.symbols() < 3)
        throw DataError("time smoothing needs at least 3 symbols, got " + std::to_string(phase.symbols()));
    const SgKernel kernel = sg_design(spec);
    const RealMatrix unwrapped = unwrap_cols(phase.values());
    RealMatrix out(unwrapped.rows(), unwrapped.cols());
    if (warnings && static_cast<std::size_t>(spec.window) > unwrapped.rows())
        warnings->push_back(window_message(unwrapped.rows(), spec.window));

    parallel_for(out.cols(), [&](std::size_t k) {
        const auto column = unwrapped.col(k);
        out.set_col(k, sg_apply(column, kernel));
    });
    return phase.advance(std::move(out), PhaseStage::smoothed);
}

PhaseMatrix sg_time(const PhaseMatrix &phase, double fraction, int order)
{
    return sg_time(phase, SgSpec{order, sg_window_for(phase.symbols(), fraction, order)});
}

PhaseMatrix sg_freq(const PhaseMatrix &phase, const SgSpec &spec, std::vector<std::string> *warnings)
{
    if (phase.subcarriers() < 3)
        throw DataError("frequency smoothing needs at least 3 subcarriers, got " +
                        std::to_string(phase.subcarriers()));
    const SgKernel kernel = sg_design(spec);
    RealMatrix out = unwrap_rows(phase.values());
    if (warnings && static_cast<std::size_t>(spec.window) > out.cols())
        warnings->push_back(window_message(out.cols(), spec.window));

    parallel_for(out.rows(), [&](std::size_t s) {
        auto row = out.row(s);
        const auto smoothed = sg_apply(row, kernel);
        std::copy(smoothed.begin(), smoothed.end(), row.begin());
    });
    return phase.advance(std::move(out), PhaseStage::smoothed);
}

PhaseMatrix sg_freq(const PhaseMatrix &phase, double fraction, int order)
{
    return sg_freq(phase, SgSpec{order, sg_window_for(phase.subcarriers(), fraction, order)});
}

// ---------------------------------------------------------------------------
// Bivariate filter

void Sg2dSpec::validate() const
{
    SgSpec{order, window_time}.validate();
    SgSpec{order, window_freq}.validate();
}

Sg2dSpec Sg2dSpec::from_fraction(std::size_t symbols, std::size_t subcarriers, double fraction, int order)
{
    return {order, sg_window_for(symbols, fraction, order), sg_window_for(subcarriers, fraction, order)};
}

namespace
{

Eigen::MatrixXd bivariate_basis(const Sg2dSpec &spec)
{
    const int wt = spec.window_time;
    const int wf = spec.window_freq;
    const int terms = (spec.order + 1) * (spec.order + 2) / 2;
    Eigen::MatrixXd design(wt * wf, terms);
    for (int i = 0; i < wt; ++i)
        for (int j = 0; j < wf; ++j)
        {
            const double t = scaled(i - wt / 2, wt / 2);
            const double f = scaled(j - wf / 2, wf / 2);
            int col = 0;
            for (int total = 0; total <= spec.order; ++total)
                for (int pt = total; pt >= 0; --pt)
                    design(i * wf + j, col++) = std::pow(t, pt) * std::pow(f, total - pt);
        }
    return orthonormal_basis(design);
}

} // namespace

std::vector<double> sg2d_central_weights(const Sg2dSpec &spec)
{
    spec.validate();
    const Eigen::MatrixXd q = bivariate_basis(spec);
    const int centre = (spec.window_time / 2) * spec.window_freq + spec.window_freq / 2;
    const Eigen::VectorXd r = q * q.row(centre).transpose();
    return {r.data(), r.data() + r.size()};
}

PhaseMatrix sg_2d(const PhaseMatrix &phase, const Sg2dSpec &spec)
{
    spec.validate();
    const std::size_t S = phase.symbols();
    const std::size_t K = phase.subcarriers();
    const std::size_t wt = static_cast<std::size_t>(spec.window_time);
    const std::size_t wf = static_cast<std::size_t>(spec.window_freq);
    if (S < wt || K < wf)
        throw DataError("matrix " + std::to_string(S) + "x" + std::to_string(K) + " is smaller than the " +
                        std::to_string(wt) + "x" + std::to_string(wf) + " window");

    const Eigen::MatrixXd q = bivariate_basis(spec);
    const std::size_t ht = wt / 2;
    const std::size_t hf = wf / 2;
    const std::size_t centre = ht * wf + hf;
    const Eigen::VectorXd central = q * q.row(static_cast<Eigen::Index>(centre)).transpose();

    const RealMatrix in = unwrap_cols(phase.values());
    RealMatrix out(S, K);

    parallel_for(S, [&](std::size_t s) {
        const std::size_t s0 = std::min(s >= ht ? s - ht : 0, S - wt);
        Eigen::VectorXd patch(static_cast<Eigen::Index>(wt * wf));
        for (std::size_t k = 0; k < K; ++k)
        {
            const std::size_t k0 = std::min(k >= hf ? k - hf : 0, K - wf);
            for (std::size_t i = 0; i < wt; ++i)
                for (std::size_t j = 0; j < wf; ++j)
                    patch(static_cast<Eigen::Index>(i * wf + j)) = in(s0 + i, k0 + j);

            const std::size_t pos = (s - s0) * wf + (k - k0);
            if (pos == centre)
                out(s, k) = central.dot(patch);
            else
                out(s, k) = q.row(static_cast<Eigen::Index>(pos)).dot(q.transpose() * patch);
        }
    });
    return phase.advance(std::move(out), PhaseStage::smoothed);
}

PhaseMatrix sg_2d_separable(const PhaseMatrix &phase, const Sg2dSpec &spec)
{
    spec.validate();
    if (phase.symbols() < static_cast<std::size_t>(spec.window_time) ||
        phase.subcarriers() < static_cast<std::size_t>(spec.window_freq))
        throw DataError("matrix is smaller than the smoothing window");
    const PhaseMatrix timed = sg_time(phase, SgSpec{spec.order, spec.window_time});
    return sg_freq(timed, SgSpec{spec.order, spec.window_freq});
}

} // namespace csikit
