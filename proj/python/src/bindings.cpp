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

#include "csikit/core.hpp"
#include "csikit/io.hpp"
#include "csikit/linear_calib.hpp"
#include "csikit/savgol.hpp"
#include "csikit/stats.hpp"
#include "csikit/synth.hpp"
#include "csikit/tsfr.hpp"

#include <pybind11/complex.h>
#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include <cstring>
#include <optional>

namespace py = pybind11;
using namespace csikit;

namespace
{

using RealArray = py::array_t<double, py::array::c_style | py::array::forcecast>;
using ComplexArray = py::array_t<cdouble, py::array::c_style | py::array::forcecast>;

template <typename T, typename Array>
Matrix<T> to_matrix(const Array &a, const char *what)
{
    if (a.ndim() != 2)
        throw DataError(std::string(what) + " must be a 2-D array");
    const auto rows = static_cast<std::size_t>(a.shape(0));
    const auto cols = static_cast<std::size_t>(a.shape(1));
    return Matrix<T>(rows, cols, std::vector<T>(a.data(), a.data() + rows * cols));
}

template <typename T>
py::array_t<T> to_array(const Matrix<T> &m)
{
    py::array_t<T> out({m.rows(), m.cols()});
    std::memcpy(out.mutable_data(), m.data().data(), m.size() * sizeof(T));
    return out;
}

py::array_t<double> to_array(std::span<const double> v)
{
    py::array_t<double> out(static_cast<py::ssize_t>(v.size()));
    std::copy(v.begin(), v.end(), out.mutable_data());
    return out;
}

std::vector<double> to_vector(const RealArray &a)
{
    if (a.ndim() != 1)
        throw DataError("expected a 1-D array");
    return {a.data(), a.data() + a.size()};
}

PhaseMatrix phase_of(const RealArray &a, PhaseStage stage) { return PhaseMatrix(to_matrix<double>(a, "phase"), stage); }

std::optional<SubcarrierMap> map_of(const std::optional<std::vector<int>> &indices, int n_fft)
{
    if (!indices)
        return std::nullopt;
    return SubcarrierMap(*indices, n_fft);
}

Abscissa abscissa_of(const std::string &name)
{
    if (name == "ordinal")
        return Abscissa::ordinal;
    if (name == "physical")
        return Abscissa::physical;
    throw DataError("abscissa must be 'ordinal' or 'physical'");
}

py::dict report_dict(const TsfrReport &r)
{
    RealMatrix thresholds(r.symbols(), 3);
    for (std::size_t s = 0; s < r.symbols(); ++s)
    {
        thresholds(s, 0) = r.thresholds[s].mu;
        thresholds(s, 1) = r.thresholds[s].sigma;
        thresholds(s, 2) = r.thresholds[s].d;
    }
    py::dict d;
    d["thresholds"] = to_array(thresholds);
    d["exceedance"] = to_array(r.exceedance).attr("astype")("bool");
    d["clamped_up"] = r.clamped_up;
    d["clamped_down"] = r.clamped_down;
    d["modified_fraction"] = to_array(r.modified_fraction);
    return d;
}

} // namespace

PYBIND11_MODULE(_core, m)
{
    m.doc() = "csikit core bindings";

    py::register_exception<DataError>(m, "DataError", PyExc_ValueError);
    py::register_exception<FormatError>(m, "FormatError", PyExc_ValueError);
    py::register_exception_translator([](std::exception_ptr p) {
        try
        {
            if (p)
                std::rethrow_exception(p);
        }
        catch (const IoError &e)
        {
            py::set_error(PyExc_OSError, e.what());
        }
    });

    // core
    m.def(
        "decompose",
        [](const ComplexArray &csi) {
            const Decomposition d = decompose(CsiMatrix(to_matrix<cdouble>(csi, "csi")));
            return py::make_tuple(to_array(d.amplitude.values()), to_array(d.phase.values()), d.zero_cells);
        },
        py::arg("csi"), "Split CSI into (amplitude, phase in (-pi, pi], zero-magnitude cells).");
    m.def(
        "recompose",
        [](const RealArray &amp, const RealArray &phase) {
            return to_array(
                recompose(AmplitudeMatrix(to_matrix<double>(amp, "amplitude")), phase_of(phase, PhaseStage::raw))
                    .values());
        },
        py::arg("amplitude"), py::arg("phase"));
    m.def("unwrap", [](const RealArray &v) { return to_array(unwrap(to_vector(v))); }, py::arg("phase"));
    m.def("wrap_to_pi", &wrap_to_pi, py::arg("angle"));

    // linear calibration
    m.def(
        "lt_calibrate",
        [](const RealArray &phase, std::optional<std::vector<int>> indices, int n_fft) {
            const PhaseMatrix p = phase_of(phase, PhaseStage::raw);
            const SubcarrierMap map = indices ? SubcarrierMap(*indices, n_fft) : default_map(p.subcarriers());
            return to_array(lt_calibrate(p, map).values());
        },
        py::arg("phase"), py::arg("indices") = py::none(), py::arg("n_fft") = 64);
    m.def(
        "lrr_calibrate",
        [](const RealArray &phase, const std::string &abscissa, std::optional<std::vector<int>> indices, int n_fft) {
            const auto map = map_of(indices, n_fft);
            return to_array(lrr_calibrate(phase_of(phase, PhaseStage::raw), abscissa_of(abscissa),
                                          map ? &*map : nullptr)
                                .values());
        },
        py::arg("phase"), py::arg("abscissa") = "ordinal", py::arg("indices") = py::none(), py::arg("n_fft") = 64);
    m.def(
        "regress_symbol",
        [](const RealArray &row) {
            const RegressionFit f = regress_symbol(to_vector(row));
            py::dict d;
            d["a"] = f.a;
            d["b"] = f.b;
            d["alpha"] = f.alpha;
            d["r1"] = f.r1;
            return d;
        },
        py::arg("row"));

    // Savitzky-Golay
    m.def(
        "sg_kernel", [](int order, int window) { return to_array(sg_design({order, window}).central); },
        py::arg("order"), py::arg("window"));
    m.def(
        "sg_apply",
        [](const RealArray &v, int order, int window) { return to_array(sg_apply(to_vector(v), SgSpec{order, window})); },
        py::arg("v"), py::arg("order") = 2, py::arg("window") = 5);
    m.def(
        "sg_time",
        [](const RealArray &phase, int order, double fraction, std::optional<int> window) {
            const PhaseMatrix p = phase_of(phase, PhaseStage::calibrated);
            return to_array((window ? sg_time(p, SgSpec{order, *window}) : sg_time(p, fraction, order)).values());
        },
        py::arg("phase"), py::arg("order") = default_sg_order, py::arg("fraction") = default_sg_fraction,
        py::arg("window") = py::none());
    m.def(
        "sg_freq",
        [](const RealArray &phase, int order, double fraction, std::optional<int> window) {
            const PhaseMatrix p = phase_of(phase, PhaseStage::calibrated);
            return to_array((window ? sg_freq(p, SgSpec{order, *window}) : sg_freq(p, fraction, order)).values());
        },
        py::arg("phase"), py::arg("order") = default_sg_order, py::arg("fraction") = default_sg_fraction,
        py::arg("window") = py::none());
    m.def(
        "sg_2d",
        [](const RealArray &phase, int order, int window_time, int window_freq, bool separable) {
            const PhaseMatrix p = phase_of(phase, PhaseStage::calibrated);
            const Sg2dSpec spec{order, window_time, window_freq};
            return to_array((separable ? sg_2d_separable(p, spec) : sg_2d(p, spec)).values());
        },
        py::arg("phase"), py::arg("order") = 2, py::arg("window_time") = 5, py::arg("window_freq") = 5,
        py::arg("separable") = false);

    // TSFR
    m.def(
        "gap_stats",
        [](const RealArray &row) {
            const GapThreshold g = gap_stats(to_vector(row));
            return py::make_tuple(g.mu, g.sigma, g.d);
        },
        py::arg("row"), "Returns (mu, sigma, d).");
    m.def(
        "rebuild_symbol",
        [](const RealArray &row, double d) {
            const RebuildResult r = rebuild_symbol(to_vector(row), d);
            std::vector<bool> flagged(r.branch.size());
            for (std::size_t k = 0; k < r.branch.size(); ++k)
                flagged[k] = r.branch[k] == RebuildBranch::clamp_up || r.branch[k] == RebuildBranch::clamp_down;
            return py::make_tuple(to_array(r.phase), flagged);
        },
        py::arg("smoothed"), py::arg("d"), "Returns (rebuilt row, per-position clamp flags).");

    py::class_<TsfrReport>(m, "TsfrReport")
        .def_property_readonly("symbols", &TsfrReport::symbols)
        .def_readonly("subcarriers", &TsfrReport::subcarriers)
        .def("as_dict", &report_dict);

    m.def(
        "tsfr",
        [](const RealArray &phase, int sg_order, double sg_fraction) {
            TsfrResult r = tsfr(phase_of(phase, PhaseStage::raw), {sg_order, sg_fraction, Abscissa::ordinal});
            py::dict d;
            d["calibrated"] = to_array(r.calibrated.values());
            d["smoothed"] = to_array(r.smoothed.values());
            d["rebuilt"] = to_array(r.rebuilt.values());
            d["report"] = std::move(r.report);
            return d;
        },
        py::arg("phase"), py::arg("sg_order") = default_sg_order, py::arg("sg_fraction") = default_sg_fraction);
    m.def("method_names", [] {
        std::vector<std::string> names;
        for (Method m : all_methods())
            names.emplace_back(to_string(m));
        return names;
    });
    m.def(
        "process",
        [](const ComplexArray &csi, const std::string &method, int sg_order, double sg_fraction,
           const std::string &abscissa, bool separable) {
            const auto parsed = parse_method(method);
            if (!parsed)
                throw DataError("unknown method '" + method + "'; valid methods: " + method_names());
            ProcessParams params;
            params.sg_order = sg_order;
            params.sg_fraction = sg_fraction;
            params.abscissa = abscissa_of(abscissa);
            params.separable_2d = separable;
            ProcessResult r = process(CsiMatrix(to_matrix<cdouble>(csi, "csi")), *parsed, params);
            py::object report = py::none();
            if (r.report)
                report = py::cast(std::move(*r.report));
            return py::make_tuple(to_array(r.csi.values()), to_array(r.phase.values()), report);
        },
        py::arg("csi"), py::arg("method"), py::arg("sg_order") = default_sg_order,
        py::arg("sg_fraction") = default_sg_fraction, py::arg("abscissa") = "ordinal", py::arg("separable") = false,
        "Returns (csi, phase, report or None).");

    // synth
    m.def("demo_spec", [] { return format_synth_config(demo_config()); });
    m.def(
        "synthesize",
        [](std::uint64_t seed, std::optional<std::size_t> symbols, std::optional<std::size_t> subcarriers,
           std::optional<std::string> spec) {
            const SynthConfig config = spec ? parse_synth_config(*spec) : demo_config();
            const SynthOutput out =
                synthesize(config, symbols.value_or(config.symbols), subcarriers.value_or(config.subcarriers), seed);
            py::dict d;
            d["true"] = to_array(out.true_csi.values());
            d["measured"] = to_array(out.measured_csi.values());
            d["delta_t"] = to_array(out.impairments.delta_t);
            d["gamma"] = to_array(out.impairments.gamma);
            d["indices"] = std::vector<int>(out.impairments.map.indices().begin(), out.impairments.map.indices().end());
            return d;
        },
        py::arg("seed"), py::arg("symbols") = py::none(), py::arg("subcarriers") = py::none(),
        py::arg("spec") = py::none());

    // stats
    m.def(
        "diff_histogram",
        [](const RealArray &phase, int bins) {
            const Histogram h = diff_histogram(phase_of(phase, PhaseStage::calibrated), bins);
            py::dict d;
            d["edges"] = to_array(h.edges);
            d["counts"] = h.counts;
            d["mean"] = h.mean;
            d["std"] = h.stddev;
            return d;
        },
        py::arg("phase"), py::arg("bins") = default_hist_bins);
    m.def(
        "ds_series",
        [](const RealArray &phase, std::optional<std::vector<std::string>> labels) {
            const DsSeries s = ds_series(phase_of(phase, PhaseStage::calibrated), labels ? &*labels : nullptr);
            std::vector<double> d;
            for (const auto &g : s.thresholds)
                d.push_back(g.d);
            py::dict groups;
            for (const auto &g : s.groups)
                groups[py::str(g.label)] = py::make_tuple(g.count, g.mean_d);
            return py::make_tuple(to_array(d), groups);
        },
        py::arg("phase"), py::arg("labels") = py::none(), "Returns (d per symbol, {label: (count, mean d)}).");
    m.def("exceedance_profile", &exceedance_profile, py::arg("report"));

    // io
    m.def(
        "encode_csif",
        [](const py::array &a) {
            const io::Bytes b = py::isinstance<py::array_t<cdouble>>(a)
                                    ? io::encode_csif(to_matrix<cdouble>(ComplexArray::ensure(a), "matrix"))
                                    : io::encode_csif(to_matrix<double>(RealArray::ensure(a), "matrix"));
            return py::bytes(reinterpret_cast<const char *>(b.data()), b.size());
        },
        py::arg("matrix"));
    m.def(
        "decode_csif",
        [](const py::bytes &data) -> py::object {
            const std::string raw = data;
            const io::AnyMatrix any =
                io::decode_csif({reinterpret_cast<const std::uint8_t *>(raw.data()), raw.size()});
            if (const auto *c = std::get_if<ComplexMatrix>(&any))
                return to_array(*c);
            return to_array(std::get<RealMatrix>(any));
        },
        py::arg("data"));
    m.def(
        "read_csif",
        [](const std::string &path) -> py::object {
            const io::AnyMatrix any = io::read_csif(path);
            if (const auto *c = std::get_if<ComplexMatrix>(&any))
                return to_array(*c);
            return to_array(std::get<RealMatrix>(any));
        },
        py::arg("path"));
    m.def(
        "write_csif",
        [](const std::string &path, const py::array &a) {
            if (py::isinstance<py::array_t<cdouble>>(a))
                io::write_csif(path, to_matrix<cdouble>(ComplexArray::ensure(a), "matrix"));
            else
                io::write_csif(path, to_matrix<double>(RealArray::ensure(a), "matrix"));
        },
        py::arg("path"), py::arg("matrix"));
}
