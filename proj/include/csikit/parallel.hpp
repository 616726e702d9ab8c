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
#include <functional>

namespace csikit
{

/// Worker cap from CSIKIT_THREADS (0 or unset = hardware concurrency).
unsigned thread_count();

/// Overrides the environment for the current process; 0 restores auto.
void set_thread_count(unsigned n);

/// Runs body(i) for i in [0, count). Each index is handled by exactly one
/// worker, so per-index outputs never depend on scheduling.
void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body);

} // namespace csikit
