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

#include "csikit/cli.hpp"

#include "csikit/io.hpp"
#include "csikit/stats.hpp"
#include "csikit/synth.hpp"
#include "csikit/tsfr.hpp"
#include "text_util.hpp"

#include <CLI11.hpp>

#include <algorithm>
#include <cmath>
#include <filesystem>
#include <limits>
#include <optional>
#include <ostream>
#include <string>

namespace csikit::cli
{

namespace fs = std::filesystem;

namespace
{

/// Raised for semantic flag problems detected after parsing.
struct UsageError : Error
{
    using Error::Error;
};

std::string read_text(const fs::path &path)
{
    const io::Bytes bytes = io::read_file(path);
    return {bytes.begin(), bytes.end()};
}

void require_distinct(const std::string &in, const std::string &out)
{
    std::error_code ec;
    if (in == out || (fs::exists(out, ec) && fs::equivalent(in, out, ec)))
        throw UsageError("output path must differ from the input path (" + out + ")");
}

SynthConfig load_config(const std::string &spec_path)
{
    return spec_path.empty() ? demo_config() : parse_synth_config(read_text(spec_path));
}

// ---------------------------------------------------------------------------
// synth

struct SynthArgs
{
    std::string spec;
    std::optional<std::size_t> symbols;
    std::optional<std::size_t> subcarriers;
    std::uint64_t seed = 0;
    std::string output;
    bool dump_spec = false;
};

int cmd_synth(const SynthArgs &a, std::ostream &out)
{
    SynthConfig config = load_config(a.spec);
    if (a.dump_spec)
    {
        out << format_synth_config(config);
        return exit_ok;
    }
    if (a.output.empty())
        throw UsageError("synth requires -o OUT");

    const std::size_t S = a.symbols.value_or(config.symbols);
    const std::size_t K = a.subcarriers.value_or(config.subcarriers);
    const SynthOutput result = synthesize(config, S, K, a.seed);

    std::string base = a.output;
    if (base.size() > 5 && base.ends_with(".csif"))
        base.resize(base.size() - 5);
    const std::string true_path = base + ".true.csif";
    const std::string meas_path = base + ".meas.csif";
    io::write_csif(true_path, result.true_csi.values());
    io::write_csif(meas_path, result.measured_csi.values());

    out << "synth: S=" << S << " K=" << K << " seed=" << a.seed << " true=" << true_path
        << " measured=" << meas_path << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// process

struct ProcessArgs
{
    std::string input;
    std::string output;
    std::string method;
    int sg_order = default_sg_order;
    double sg_frac = default_sg_fraction;
    std::string abscissa = "ordinal";
    std::string report;
    std::string spec;
    std::string phase_out;
    std::string features;
    bool verify_amplitude = false;
    bool separable = false;
};

/// Largest deviation of |csi| from `amp`, in units of the amplitude's ulp.
double max_ulp_deviation(const CsiMatrix &csi, const AmplitudeMatrix &amp)
{
    double worst = 0.0;
    for (std::size_t s = 0; s < csi.symbols(); ++s)
        for (std::size_t k = 0; k < csi.subcarriers(); ++k)
        {
            const double a = amp.values()(s, k);
            const double dev = std::abs(std::abs(csi(s, k)) - a);
            if (dev == 0.0)
                continue;
            const double ulp = a > 0.0 ? std::nextafter(a, INFINITY) - a : std::numeric_limits<double>::denorm_min();
            worst = std::max(worst, dev / ulp);
        }
    return worst;
}

int cmd_process(const ProcessArgs &a, std::ostream &out, std::ostream &err)
{
    const auto method = parse_method(a.method);
    if (!method)
        throw UsageError("unknown method '" + a.method + "'; valid methods: " + method_names());
    if (!a.report.empty() && *method != Method::tsfr)
        throw UsageError("--report is only produced by --method tsfr");
    for (const std::string *path : {&a.output, &a.report, &a.phase_out, &a.features})
        if (!path->empty())
            require_distinct(a.input, *path);

    const CsiMatrix csi = io::read_csi(a.input);

    ProcessParams params;
    params.sg_order = a.sg_order;
    params.sg_fraction = a.sg_frac;
    params.abscissa = a.abscissa == "physical" ? Abscissa::physical : Abscissa::ordinal;
    params.separable_2d = a.separable;
    if (!a.spec.empty())
        params.map = load_config(a.spec).subcarrier_map(csi.subcarriers());

    const ProcessResult result = process(csi, *method, params);
    for (const auto &[s, k] : result.zero_cells)
        err << "warning: zero-magnitude cell (" << s + 1 << "," << k + 1 << "); phase set to 0\n";

    const io::ParamList described{{"method", std::string(to_string(*method))},
                                  {"sg_order", std::to_string(a.sg_order)},
                                  {"sg_fraction", text::format_double(a.sg_frac)},
                                  {"abscissa", a.abscissa},
                                  {"separable_2d", a.separable ? "true" : "false"},
                                  {"input", fs::path(a.input).filename().string()}};

    if (a.verify_amplitude)
    {
        const AmplitudeMatrix reference = decompose(csi).amplitude;
        if (!(reference == result.amplitude))
        {
            err << "amplitude check failed: passthrough amplitude differs from the input\n";
            return exit_data;
        }
        const double ulps = max_ulp_deviation(result.csi, reference);
        if (ulps > 4.0)
        {
            err << "amplitude check failed: recomposed modulus off by " << ulps << " ulp\n";
            return exit_data;
        }
        out << "amplitude check: passthrough bit-identical, recomposed modulus within " << ulps << " ulp\n";
    }

    io::write_csif(a.output, result.csi.values());
    if (!a.phase_out.empty())
        io::write_csif(a.phase_out, result.phase.values());
    if (!a.features.empty())
        io::export_features(a.features, result.phase.values(), described);
    if (!a.report.empty())
        io::write_text(a.report, io::format_report(*result.report, described));

    out << "process: method=" << to_string(*method) << " S=" << csi.symbols() << " K=" << csi.subcarriers();
    if (result.report)
    {
        std::size_t flagged = 0;
        for (std::size_t s = 0; s < result.report->symbols(); ++s)
            flagged += result.report->flagged(s);
        out << " flagged=" << flagged;
    }
    out << " output=" << a.output << "\n";
    return exit_ok;
}

// ---------------------------------------------------------------------------
// stats

struct StatsArgs
{
    std::string kind;
    std::string input;
    std::string output;
    int bins = default_hist_bins;
    std::string labels;
    bool no_calibrate = false;
    int sg_order = default_sg_order;
    double sg_frac = default_sg_fraction;
};

/// Complex inputs are decomposed and LRR-calibrated (unless disabled); real
/// inputs are taken as calibrated phases.
PhaseMatrix calibrated_phase(const io::AnyMatrix &any, bool no_calibrate)
{
    if (const auto *real = std::get_if<RealMatrix>(&any))
        return PhaseMatrix(*real, PhaseStage::calibrated);
    const CsiMatrix csi(std::get<ComplexMatrix>(any));
    PhaseMatrix raw = decompose(csi).phase;
    if (no_calibrate)
        return raw.advance(unwrap_rows(raw.values()), PhaseStage::calibrated);
    return lrr_calibrate(raw);
}

std::vector<std::string> read_labels(const std::string &path)
{
    const std::string content = read_text(path);
    std::vector<std::string> labels;
    for (auto line : text::split(content, '\n'))
        labels.emplace_back(text::trim(line));
    while (!labels.empty() && labels.back().empty())
        labels.pop_back();
    return labels;
}

int cmd_stats(const StatsArgs &a, std::ostream &out)
{
    require_distinct(a.input, a.output);
    const io::Bytes bytes = io::read_file(a.input);
    using text::format_double;

    if (a.kind == "diffhist")
    {
        const PhaseMatrix phase = calibrated_phase(io::decode_csif(bytes), a.no_calibrate);
        const Histogram h = diff_histogram(phase, a.bins);
        std::string csv = "bin,lower,upper,count,gaussian\n";
        for (std::size_t i = 0; i < h.counts.size(); ++i)
            csv += std::to_string(i + 1) + "," + format_double(h.edges[i]) + "," + format_double(h.edges[i + 1]) +
                   "," + std::to_string(h.counts[i]) + "," + format_double(h.gaussian_count(i)) + "\n";
        io::write_text(a.output, csv);
        out << "diffhist: samples=" << h.total() << " mean=" << format_double(h.mean)
            << " std=" << format_double(h.stddev) << " output=" << a.output << "\n";
        return exit_ok;
    }

    if (a.kind == "ds")
    {
        const PhaseMatrix phase = calibrated_phase(io::decode_csif(bytes), a.no_calibrate);
        std::optional<std::vector<std::string>> labels;
        if (!a.labels.empty())
            labels = read_labels(a.labels);
        const DsSeries series = ds_series(phase, labels ? &*labels : nullptr);

        std::string csv = labels ? "s,d,mu,sigma,label\n" : "s,d,mu,sigma\n";
        for (std::size_t s = 0; s < series.thresholds.size(); ++s)
        {
            const GapThreshold &g = series.thresholds[s];
            csv += std::to_string(s + 1) + "," + format_double(g.d) + "," + format_double(g.mu) + "," +
                   format_double(g.sigma);
            if (labels)
                csv += "," + (*labels)[s];
            csv += "\n";
        }
        io::write_text(a.output, csv);
        out << "ds: symbols=" << series.thresholds.size() << " output=" << a.output;
        if (labels)
        {
            std::string groups = "label,count,mean_d\n";
            for (const auto &g : series.groups)
                groups += g.label + "," + std::to_string(g.count) + "," + format_double(g.mean_d) + "\n";
            const fs::path groups_path = fs::path(a.output).replace_extension(".groups.csv");
            io::write_text(groups_path, groups);
            out << " groups=" << groups_path.string();
        }
        out << "\n";
        return exit_ok;
    }

    // exceed: a TSFR report, or a CSIF file that is run through TSFR first.
    TsfrReport report;
    if (io::looks_like_csif(bytes))
    {
        const io::AnyMatrix any = io::decode_csif(bytes);
        PhaseMatrix raw = std::holds_alternative<RealMatrix>(any)
                              ? PhaseMatrix(std::get<RealMatrix>(any), PhaseStage::raw)
                              : decompose(CsiMatrix(std::get<ComplexMatrix>(any))).phase;
        report = tsfr(raw, {a.sg_order, a.sg_frac, Abscissa::ordinal}).report;
    }
    else
    {
        report = io::parse_report({reinterpret_cast<const char *>(bytes.data()), bytes.size()});
    }
    const auto profile = exceedance_profile(report);
    std::string csv = "k,count\n";
    std::size_t total = 0;
    for (std::size_t k = 1; k < profile.size(); ++k)
    {
        csv += std::to_string(k + 1) + "," + std::to_string(profile[k]) + "\n";
        total += profile[k];
    }
    io::write_text(a.output, csv);
    out << "exceed: symbols=" << report.symbols() << " flagged=" << total << " output=" << a.output << "\n";
    return exit_ok;
}

} // namespace

int run(const std::vector<std::string> &args, std::ostream &out, std::ostream &err)
{
    CLI::App app{"csikit: phase sanitization for OFDM channel state information", "csikit"};
    app.require_subcommand(1);

    SynthArgs synth;
    auto *synth_cmd = app.add_subcommand("synth", "Generate true and impaired synthetic CSI");
    synth_cmd->add_option("--spec", synth.spec, "Generator spec file (key = value)")->check(CLI::ExistingFile);
    synth_cmd->add_option("--symbols", synth.symbols, "Number of OFDM symbols S");
    synth_cmd->add_option("--subcarriers", synth.subcarriers, "Number of subcarriers K");
    synth_cmd->add_option("--seed", synth.seed, "RNG seed");
    synth_cmd->add_option("-o,--output", synth.output, "Output base; writes OUT.true.csif and OUT.meas.csif");
    synth_cmd->add_flag("--dump-spec", synth.dump_spec, "Print the effective spec and exit");

    ProcessArgs proc;
    auto *proc_cmd = app.add_subcommand("process", "Sanitize the phase of a CSI matrix");
    proc_cmd->add_option("-i,--input", proc.input, "Input CSIF (complex)")->required();
    proc_cmd->add_option("-o,--output", proc.output, "Output CSIF (complex)")->required();
    proc_cmd->add_option("--method", proc.method, method_names())->required();
    proc_cmd->add_option("--sg-order", proc.sg_order, "Savitzky-Golay polynomial order")
        ->check(CLI::NonNegativeNumber);
    proc_cmd->add_option("--sg-frac", proc.sg_frac, "Savitzky-Golay window as a fraction of the length")
        ->check(CLI::PositiveNumber);
    proc_cmd->add_option("--abscissa", proc.abscissa, "Regression abscissa")
        ->check(CLI::IsMember({"ordinal", "physical"}));
    proc_cmd->add_option("--report", proc.report, "TSFR report (key = value text)");
    proc_cmd->add_option("--spec", proc.spec, "Spec file providing the subcarrier map")->check(CLI::ExistingFile);
    proc_cmd->add_option("--phase-out", proc.phase_out, "Also write the processed phase as real CSIF");
    proc_cmd->add_option("--features", proc.features, "Export the processed phase as raw f64 + .meta sidecar");
    proc_cmd->add_flag("--verify-amplitude", proc.verify_amplitude, "Check amplitude passthrough");
    proc_cmd->add_flag("--separable", proc.separable, "Use time-then-frequency passes for lrr+sg2d");

    StatsArgs st;
    auto *stats_cmd = app.add_subcommand("stats", "Diagnostic tables as CSV");
    stats_cmd->add_option("kind", st.kind, "diffhist | ds | exceed")
        ->required()
        ->check(CLI::IsMember({"diffhist", "ds", "exceed"}));
    stats_cmd->add_option("-i,--input", st.input, "Input CSIF (or TSFR report for exceed)")->required();
    stats_cmd->add_option("-o,--output", st.output, "Output CSV")->required();
    stats_cmd->add_option("--bins", st.bins, "Histogram bins")->check(CLI::PositiveNumber);
    stats_cmd->add_option("--labels", st.labels, "One label per symbol")->check(CLI::ExistingFile);
    stats_cmd->add_flag("--no-calibrate", st.no_calibrate, "Use unwrapped raw phases instead of LRR output");
    stats_cmd->add_option("--sg-order", st.sg_order, "Savitzky-Golay order (exceed)")->check(CLI::NonNegativeNumber);
    stats_cmd->add_option("--sg-frac", st.sg_frac, "Savitzky-Golay window fraction (exceed)")
        ->check(CLI::PositiveNumber);

    try
    {
        std::vector<std::string> reversed(args.rbegin(), args.rend());
        app.parse(reversed);
    }
    catch (const CLI::ParseError &e)
    {
        const int code = app.exit(e, out, err);
        return code == 0 ? exit_ok : exit_usage;
    }

    try
    {
        if (synth_cmd->parsed())
            return cmd_synth(synth, out);
        if (proc_cmd->parsed())
            return cmd_process(proc, out, err);
        return cmd_stats(st, out);
    }
    catch (const UsageError &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_usage;
    }
    catch (const IoError &e)
    {
        err << "I/O error: " << e.what() << "\n";
        return exit_io;
    }
    catch (const Error &e)
    {
        err << "error: " << e.what() << "\n";
        return exit_data;
    }
}

} // namespace csikit::cli
