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

#include "csikit/io.hpp"

#include "text_util.hpp"

#include <bit>
#include <cmath>
#include <cstring>
#include <fstream>
#include <iterator>
#include <limits>
#include <optional>
#include <string>

namespace csikit::io
{

namespace
{

void put_u16(Bytes &out, std::uint16_t v)
{
    out.push_back(static_cast<std::uint8_t>(v & 0xFF));
    out.push_back(static_cast<std::uint8_t>(v >> 8));
}

void put_u32(Bytes &out, std::uint32_t v)
{
    for (int i = 0; i < 4; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_u64(Bytes &out, std::uint64_t v)
{
    for (int i = 0; i < 8; ++i)
        out.push_back(static_cast<std::uint8_t>(v >> (8 * i)));
}

void put_f64(Bytes &out, double v) { put_u64(out, std::bit_cast<std::uint64_t>(v)); }

std::uint64_t get_le(std::span<const std::uint8_t> bytes, std::size_t offset, int width)
{
    std::uint64_t v = 0;
    for (int i = 0; i < width; ++i)
        v |= static_cast<std::uint64_t>(bytes[offset + static_cast<std::size_t>(i)]) << (8 * i);
    return v;
}

double get_f64(std::span<const std::uint8_t> bytes, std::size_t offset)
{
    return std::bit_cast<double>(get_le(bytes, offset, 8));
}

std::uint32_t checked_dim(std::size_t n, const char *what)
{
    if (n == 0 || n > std::numeric_limits<std::uint32_t>::max())
        throw DataError(std::string("cannot encode ") + what + " of " + std::to_string(n));
    return static_cast<std::uint32_t>(n);
}

Bytes header(std::uint16_t flags, std::size_t rows, std::size_t cols, std::size_t payload)
{
    Bytes out;
    out.reserve(csif_header_size + payload);
    for (char c : {'C', 'S', 'I', 'F'})
        out.push_back(static_cast<std::uint8_t>(c));
    put_u16(out, csif_version);
    put_u16(out, flags);
    put_u32(out, checked_dim(rows, "row count"));
    put_u32(out, checked_dim(cols, "column count"));
    return out;
}

} // namespace

Bytes encode_csif(const ComplexMatrix &m)
{
    Bytes out = header(csif_flag_complex, m.rows(), m.cols(), m.size() * 16);
    for (const cdouble &v : m.data())
    {
        put_f64(out, v.real());
        put_f64(out, v.imag());
    }
    return out;
}

Bytes encode_csif(const RealMatrix &m)
{
    Bytes out = header(csif_flag_real, m.rows(), m.cols(), m.size() * 8);
    for (double v : m.data())
        put_f64(out, v);
    return out;
}

bool looks_like_csif(std::span<const std::uint8_t> bytes)
{
    return bytes.size() >= 4 && std::memcmp(bytes.data(), "CSIF", 4) == 0;
}

AnyMatrix decode_csif(std::span<const std::uint8_t> bytes)
{
    if (bytes.size() < csif_header_size)
    {
        if (bytes.size() >= 4 && !looks_like_csif(bytes))
            throw FormatError(FormatErrc::bad_magic, "expected \"CSIF\" at offset 0", 0);
        throw FormatError(FormatErrc::truncated,
                          "header needs 16 bytes, got " + std::to_string(bytes.size()), bytes.size());
    }
    if (!looks_like_csif(bytes))
        throw FormatError(FormatErrc::bad_magic, "expected \"CSIF\" at offset 0", 0);
    const auto version = static_cast<std::uint16_t>(get_le(bytes, 4, 2));
    if (version != csif_version)
        throw FormatError(FormatErrc::bad_version,
                          "version " + std::to_string(version) + " at offset 4, expected 1", 4);
    const auto flags = static_cast<std::uint16_t>(get_le(bytes, 6, 2));
    if (flags != csif_flag_complex && flags != csif_flag_real)
        throw FormatError(FormatErrc::bad_flags, "flags value " + std::to_string(flags) + " at offset 6", 6);
    const auto rows = static_cast<std::size_t>(get_le(bytes, 8, 4));
    const auto cols = static_cast<std::size_t>(get_le(bytes, 12, 4));
    if (rows == 0)
        throw FormatError(FormatErrc::bad_header, "zero rows at offset 8", 8);
    if (cols == 0)
        throw FormatError(FormatErrc::bad_header, "zero columns at offset 12", 12);

    const bool complex = flags == csif_flag_complex;
    const std::size_t expected = rows * cols * (complex ? 16 : 8);
    const std::size_t actual = bytes.size() - csif_header_size;
    if (actual < expected)
        throw FormatError(FormatErrc::truncated,
                          "payload expected " + std::to_string(expected) + " bytes, got " + std::to_string(actual),
                          bytes.size());
    if (actual > expected)
        throw FormatError(FormatErrc::trailing_bytes,
                          "payload expected " + std::to_string(expected) + " bytes, got " + std::to_string(actual),
                          csif_header_size + expected);

    std::size_t off = csif_header_size;
    if (complex)
    {
        ComplexMatrix m(rows, cols);
        for (auto &v : m.data())
        {
            v = cdouble(get_f64(bytes, off), get_f64(bytes, off + 8));
            off += 16;
        }
        return m;
    }
    RealMatrix m(rows, cols);
    for (auto &v : m.data())
    {
        v = get_f64(bytes, off);
        off += 8;
    }
    return m;
}

Bytes read_file(const std::filesystem::path &path)
{
    std::ifstream in(path, std::ios::binary);
    if (!in)
        throw IoError("cannot open " + path.string() + " for reading");
    Bytes bytes((std::istreambuf_iterator<char>(in)), std::istreambuf_iterator<char>());
    if (in.bad())
        throw IoError("error while reading " + path.string());
    return bytes;
}

void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes)
{
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out)
        throw IoError("cannot open " + path.string() + " for writing");
    out.write(reinterpret_cast<const char *>(bytes.data()), static_cast<std::streamsize>(bytes.size()));
    if (!out)
        throw IoError("error while writing " + path.string());
}

void write_text(const std::filesystem::path &path, std::string_view text)
{
    write_file(path, {reinterpret_cast<const std::uint8_t *>(text.data()), text.size()});
}

void write_csif(const std::filesystem::path &path, const ComplexMatrix &m) { write_file(path, encode_csif(m)); }
void write_csif(const std::filesystem::path &path, const RealMatrix &m) { write_file(path, encode_csif(m)); }
AnyMatrix read_csif(const std::filesystem::path &path) { return decode_csif(read_file(path)); }

CsiMatrix read_csi(const std::filesystem::path &path)
{
    AnyMatrix any = read_csif(path);
    if (!std::holds_alternative<ComplexMatrix>(any))
        throw DataError(path.string() + " holds a real matrix, expected complex CSI");
    return CsiMatrix(std::move(std::get<ComplexMatrix>(any)));
}

// ---------------------------------------------------------------------------
// CSV

std::string encode_csv(const ComplexMatrix &m)
{
    std::string out = "s,k,re,im\n";
    for (std::size_t s = 0; s < m.rows(); ++s)
        for (std::size_t k = 0; k < m.cols(); ++k)
            out += std::to_string(s + 1) + "," + std::to_string(k + 1) + "," + text::format_double(m(s, k).real()) +
                   "," + text::format_double(m(s, k).imag()) + "\n";
    return out;
}

std::string encode_csv(const RealMatrix &m)
{
    std::string out = "s,k,value\n";
    for (std::size_t s = 0; s < m.rows(); ++s)
        for (std::size_t k = 0; k < m.cols(); ++k)
            out += std::to_string(s + 1) + "," + std::to_string(k + 1) + "," + text::format_double(m(s, k)) + "\n";
    return out;
}

namespace
{

struct CsvCell
{
    std::size_t s;
    std::size_t k;
    double re;
    double im;
    std::size_t line;
};

} // namespace

AnyMatrix decode_csv(std::string_view source)
{
    auto lines = text::split(source, '\n');
    if (!lines.empty() && text::trim(lines.back()).empty())
        lines.pop_back();
    if (lines.empty())
        throw FormatError(FormatErrc::csv_header, "empty input", 1);

    const std::string_view head = text::trim(lines[0]);
    bool complex = false;
    if (head == "s,k,re,im")
        complex = true;
    else if (head != "s,k,value")
        throw FormatError(FormatErrc::csv_header, "line 1: expected 's,k,re,im' or 's,k,value'", 1);
    const std::size_t fields = complex ? 4 : 3;

    std::vector<CsvCell> cells;
    std::size_t rows = 0;
    std::size_t cols = 0;
    for (std::size_t i = 1; i < lines.size(); ++i)
    {
        const std::size_t line_no = i + 1;
        const std::string where = "line " + std::to_string(line_no);
        const auto parts = text::split(text::trim(lines[i]), ',');
        if (parts.size() != fields)
            throw FormatError(FormatErrc::csv_ragged,
                              where + ": expected " + std::to_string(fields) + " fields, got " +
                                  std::to_string(parts.size()),
                              line_no);
        const auto s = text::parse_int<std::size_t>(parts[0]);
        const auto k = text::parse_int<std::size_t>(parts[1]);
        if (!s || !k)
            throw FormatError(FormatErrc::csv_non_numeric, where + ": non-integer index", line_no);
        if (*s == 0 || *k == 0)
            throw FormatError(FormatErrc::csv_index, where + ": indices are 1-based", line_no);
        const auto re = text::parse_double(parts[2]);
        const auto im = complex ? text::parse_double(parts[3]) : std::optional<double>(0.0);
        if (!re || !im)
            throw FormatError(FormatErrc::csv_non_numeric, where + ": non-numeric value", line_no);
        cells.push_back({*s, *k, *re, *im, line_no});
        rows = std::max(rows, *s);
        cols = std::max(cols, *k);
    }
    if (cells.empty())
        throw FormatError(FormatErrc::csv_missing_cell, "no data rows", 2);
    std::vector<std::size_t> seen(rows * cols, 0);
    for (const auto &c : cells)
    {
        std::size_t &slot = seen[(c.s - 1) * cols + (c.k - 1)];
        if (slot != 0)
            throw FormatError(FormatErrc::csv_duplicate,
                              "line " + std::to_string(c.line) + ": duplicate cell (" + std::to_string(c.s) + "," +
                                  std::to_string(c.k) + "), first seen on line " + std::to_string(slot),
                              c.line);
        slot = c.line;
    }
    for (std::size_t idx = 0; idx < seen.size(); ++idx)
        if (seen[idx] == 0)
            throw FormatError(FormatErrc::csv_missing_cell,
                              "cell (" + std::to_string(idx / cols + 1) + "," + std::to_string(idx % cols + 1) +
                                  ") is missing",
                              lines.size());

    if (complex)
    {
        ComplexMatrix m(rows, cols);
        for (const auto &c : cells)
            m(c.s - 1, c.k - 1) = cdouble(c.re, c.im);
        return m;
    }
    RealMatrix m(rows, cols);
    for (const auto &c : cells)
        m(c.s - 1, c.k - 1) = c.re;
    return m;
}

// ---------------------------------------------------------------------------
// Feature export

FeatureExport encode_features(const RealMatrix &m, const ParamList &params, ElementType type)
{
    FeatureExport out;
    const bool f32 = type == ElementType::float32;
    out.payload.reserve(m.size() * (f32 ? 4 : 8));
    for (double v : m.data())
    {
        if (f32)
            put_u32(out.payload, std::bit_cast<std::uint32_t>(static_cast<float>(v)));
        else
            put_f64(out.payload, v);
    }

    out.sidecar = "# csikit feature sidecar v1\n";
    out.sidecar += "rows = " + std::to_string(m.rows()) + "\n";
    out.sidecar += "cols = " + std::to_string(m.cols()) + "\n";
    out.sidecar += std::string("element_type = ") + (f32 ? "float32" : "float64") + "\n";
    out.sidecar += "byte_order = little\n";
    out.sidecar += "layout = row-major\n";
    for (const auto &[key, value] : params)
        out.sidecar += "param." + key + " = " + value + "\n";
    return out;
}

RealMatrix decode_features(std::span<const std::uint8_t> payload, std::string_view sidecar)
{
    std::optional<std::size_t> rows;
    std::optional<std::size_t> cols;
    std::optional<ElementType> type;
    std::size_t line_no = 0;
    for (auto raw : text::split(sidecar, '\n'))
    {
        ++line_no;
        const auto line = text::trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            throw FormatError(FormatErrc::sidecar, "line " + std::to_string(line_no) + ": expected key = value",
                              line_no);
        const auto key = text::trim(line.substr(0, eq));
        const auto value = text::trim(line.substr(eq + 1));
        if (key == "rows")
            rows = text::parse_int<std::size_t>(value);
        else if (key == "cols")
            cols = text::parse_int<std::size_t>(value);
        else if (key == "element_type")
        {
            if (value == "float64")
                type = ElementType::float64;
            else if (value == "float32")
                type = ElementType::float32;
            else
                throw FormatError(FormatErrc::sidecar, "unknown element type", line_no);
        }
        else if (key == "byte_order" && value != "little")
            throw FormatError(FormatErrc::sidecar, "only little-endian payloads are supported", line_no);
        else if (key == "layout" && value != "row-major")
            throw FormatError(FormatErrc::sidecar, "only row-major payloads are supported", line_no);
    }
    if (!rows || !cols || !type)
        throw FormatError(FormatErrc::sidecar, "sidecar must state rows, cols and element_type");

    const std::size_t width = *type == ElementType::float32 ? 4 : 8;
    const std::size_t expected = *rows * *cols * width;
    if (payload.size() < expected)
        throw FormatError(FormatErrc::truncated,
                          "payload expected " + std::to_string(expected) + " bytes, got " +
                              std::to_string(payload.size()),
                          payload.size());
    if (payload.size() > expected)
        throw FormatError(FormatErrc::trailing_bytes,
                          "payload expected " + std::to_string(expected) + " bytes, got " +
                              std::to_string(payload.size()),
                          expected);

    RealMatrix m(*rows, *cols);
    std::size_t off = 0;
    for (auto &v : m.data())
    {
        if (width == 4)
            v = std::bit_cast<float>(static_cast<std::uint32_t>(get_le(payload, off, 4)));
        else
            v = get_f64(payload, off);
        off += width;
    }
    return m;
}

void export_features(const std::filesystem::path &path, const RealMatrix &m, const ParamList &params,
                     ElementType type)
{
    const FeatureExport fx = encode_features(m, params, type);
    write_file(path, fx.payload);
    write_text(path.string() + ".meta", fx.sidecar);
}

RealMatrix import_features(const std::filesystem::path &path)
{
    const Bytes payload = read_file(path);
    const Bytes meta = read_file(path.string() + ".meta");
    return decode_features(payload, {reinterpret_cast<const char *>(meta.data()), meta.size()});
}

// ---------------------------------------------------------------------------
// TSFR report

std::string format_report(const TsfrReport &report, const ParamList &params)
{
    using text::format_double;
    std::string out = "# csikit tsfr report v1\n";
    out += "# symbol = s d mu sigma clamped_up clamped_down modified_fraction\n";
    out += "# flags = s k...   (flagged subcarriers, 1-based)\n";
    for (const auto &[key, value] : params)
        out += key + " = " + value + "\n";
    out += "symbols = " + std::to_string(report.symbols()) + "\n";
    out += "subcarriers = " + std::to_string(report.subcarriers) + "\n";
    for (std::size_t s = 0; s < report.symbols(); ++s)
    {
        const GapThreshold &g = report.thresholds[s];
        out += "symbol = " + std::to_string(s + 1) + " " + format_double(g.d) + " " + format_double(g.mu) + " " +
               format_double(g.sigma) + " " + std::to_string(report.clamped_up[s]) + " " +
               std::to_string(report.clamped_down[s]) + " " + format_double(report.modified_fraction[s]) + "\n";
    }
    for (std::size_t s = 0; s < report.symbols(); ++s)
    {
        if (report.flagged(s) == 0)
            continue;
        out += "flags = " + std::to_string(s + 1);
        for (std::size_t k = 1; k < report.subcarriers; ++k)
            if (report.exceedance(s, k))
                out += " " + std::to_string(k + 1);
        out += "\n";
    }
    return out;
}

TsfrReport parse_report(std::string_view source)
{
    std::optional<std::size_t> symbols;
    std::optional<std::size_t> subcarriers;
    TsfrReport r;
    std::size_t line_no = 0;

    auto fail = [&](const std::string &what) -> void {
        throw FormatError(FormatErrc::spec_syntax, "report line " + std::to_string(line_no) + ": " + what, line_no);
    };
    auto ready = [&] {
        if (!symbols || !subcarriers)
            fail("symbols and subcarriers must precede per-symbol lines");
        if (r.thresholds.empty())
        {
            r.subcarriers = *subcarriers;
            r.thresholds.resize(*symbols);
            r.exceedance = Matrix<std::uint8_t>(*symbols, *subcarriers, 0);
            r.clamped_up.assign(*symbols, 0);
            r.clamped_down.assign(*symbols, 0);
            r.modified_fraction.assign(*symbols, 0.0);
        }
    };

    for (auto raw : text::split(source, '\n'))
    {
        ++line_no;
        const auto line = text::trim(raw);
        if (line.empty() || line.front() == '#')
            continue;
        const auto eq = line.find('=');
        if (eq == std::string_view::npos)
            fail("expected key = value");
        const auto key = text::trim(line.substr(0, eq));
        const auto value = text::trim(line.substr(eq + 1));
        if (key == "symbols")
            symbols = text::parse_int<std::size_t>(value);
        else if (key == "subcarriers")
            subcarriers = text::parse_int<std::size_t>(value);
        else if (key == "symbol")
        {
            ready();
            const auto w = text::words(value);
            if (w.size() != 7)
                fail("symbol lines carry 7 fields");
            const auto s = text::parse_int<std::size_t>(w[0]);
            if (!s || *s == 0 || *s > r.symbols())
                fail("symbol index out of range");
            const auto d = text::parse_double(w[1]);
            const auto mu = text::parse_double(w[2]);
            const auto sigma = text::parse_double(w[3]);
            const auto up = text::parse_int<std::size_t>(w[4]);
            const auto down = text::parse_int<std::size_t>(w[5]);
            const auto frac = text::parse_double(w[6]);
            if (!d || !mu || !sigma || !up || !down || !frac)
                fail("non-numeric field");
            r.thresholds[*s - 1] = {*mu, *sigma, *d};
            r.clamped_up[*s - 1] = *up;
            r.clamped_down[*s - 1] = *down;
            r.modified_fraction[*s - 1] = *frac;
        }
        else if (key == "flags")
        {
            ready();
            const auto w = text::words(value);
            const auto s = w.empty() ? std::nullopt : text::parse_int<std::size_t>(w[0]);
            if (!s || *s == 0 || *s > r.symbols())
                fail("symbol index out of range");
            for (std::size_t i = 1; i < w.size(); ++i)
            {
                const auto k = text::parse_int<std::size_t>(w[i]);
                if (!k || *k < 2 || *k > r.subcarriers)
                    fail("subcarrier index out of range");
                r.exceedance(*s - 1, *k - 1) = 1;
            }
        }
    }
    if (!symbols || !subcarriers)
        throw FormatError(FormatErrc::spec_syntax, "report lacks symbols/subcarriers");
    ready();
    return r;
}

} // namespace csikit::io
