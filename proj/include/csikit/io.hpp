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
#include "csikit/tsfr.hpp"

#include <cstdint>
#include <filesystem>
#include <span>
#include <string>
#include <string_view>
#include <utility>
#include <variant>
#include <vector>

namespace csikit::io
{

// CSIF binary layout (all little-endian):
//   offset 0  magic "CSIF"
//   offset 4  u16 version = 1
//   offset 6  u16 flags: bit0 complex payload, bit1 real payload (exactly one)
//   offset 8  u32 S (rows)
//   offset 12 u32 K (columns)
//   offset 16 payload: row-major f64, (re, im) interleaved when complex
inline constexpr std::size_t csif_header_size = 16;
inline constexpr std::uint16_t csif_version = 1;
inline constexpr std::uint16_t csif_flag_complex = 0x1;
inline constexpr std::uint16_t csif_flag_real = 0x2;

using Bytes = std::vector<std::uint8_t>;
using AnyMatrix = std::variant<ComplexMatrix, RealMatrix>;

Bytes encode_csif(const ComplexMatrix &m);
Bytes encode_csif(const RealMatrix &m);
AnyMatrix decode_csif(std::span<const std::uint8_t> bytes);

/// True when the buffer starts with the CSIF magic.
bool looks_like_csif(std::span<const std::uint8_t> bytes);

Bytes read_file(const std::filesystem::path &path);
void write_file(const std::filesystem::path &path, std::span<const std::uint8_t> bytes);
void write_text(const std::filesystem::path &path, std::string_view text);

void write_csif(const std::filesystem::path &path, const ComplexMatrix &m);
void write_csif(const std::filesystem::path &path, const RealMatrix &m);
AnyMatrix read_csif(const std::filesystem::path &path);

/// Reads a complex CSIF file as a validated CSI matrix.
CsiMatrix read_csi(const std::filesystem::path &path);

// CSV: header `s,k,re,im` (complex) or `s,k,value` (real); s and k are
// 1-based; one line per cell in row-major order; shortest round-trip decimals.
// Phase and amplitude matrices both use the real form.
std::string encode_csv(const ComplexMatrix &m);
std::string encode_csv(const RealMatrix &m);
AnyMatrix decode_csv(std::string_view text);

/// Raw row-major payload plus a text sidecar (`<path>.meta`) describing it.
enum class ElementType
{
    float64,
    float32
};

struct FeatureExport
{
    Bytes payload;
    std::string sidecar;
};

using ParamList = std::vector<std::pair<std::string, std::string>>;

FeatureExport encode_features(const RealMatrix &m, const ParamList &params,
                              ElementType type = ElementType::float64);
RealMatrix decode_features(std::span<const std::uint8_t> payload, std::string_view sidecar);

void export_features(const std::filesystem::path &path, const RealMatrix &m, const ParamList &params,
                     ElementType type = ElementType::float64);
RealMatrix import_features(const std::filesystem::path &path);

/// Plain-text key/value TSFR report:
///   `key = value` header lines (params first, then symbols/subcarriers),
///   one `symbol = s d mu sigma clamped_up clamped_down modified_fraction`
///   line per symbol, and one `flags = s k1 k2 ...` line per symbol with
///   flagged subcarriers (all indices 1-based).
std::string format_report(const TsfrReport &report, const ParamList &params);
TsfrReport parse_report(std::string_view text);

} // namespace csikit::io
