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

#include <cstddef>
#include <stdexcept>
#include <string>

namespace csikit
{

/// Base class of every error raised by the library.
class Error : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

/// Invalid matrix contents or incompatible dimensions.
class DataError : public Error
{
public:
    using Error::Error;
};

/// A file could not be opened, read or written.
class IoError : public Error
{
public:
    using Error::Error;
};

enum class FormatErrc
{
    bad_magic,
    bad_version,
    bad_flags,
    bad_header,
    truncated,
    trailing_bytes,
    csv_header,
    csv_ragged,
    csv_non_numeric,
    csv_duplicate,
    csv_missing_cell,
    csv_index,
    sidecar,
    spec_syntax
};

const char *to_string(FormatErrc code);

/// Malformed serialized input. Carries the byte offset (binary formats) or
/// 1-based line number (text formats) where the problem was detected.
class FormatError : public Error
{
public:
    FormatError(FormatErrc code, const std::string &message, std::size_t location = 0);

    FormatErrc code() const noexcept { return code_; }
    std::size_t location() const noexcept { return location_; }

private:
    FormatErrc code_;
    std::size_t location_;
};

} // namespace csikit
