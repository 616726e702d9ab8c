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

#include <algorithm>
#include <atomic>
#include <cstdlib>
#include <exception>
#include <mutex>
#include <string>
#include <thread>
#include <vector>

namespace csikit
{

namespace
{

std::atomic<unsigned> g_override{0};

unsigned env_threads()
{
    const char *raw = std::getenv("CSIKIT_THREADS");
    if (raw == nullptr || *raw == '\0')
        return 0;
    try
    {
        const long v = std::stol(raw);
        return v > 0 ? static_cast<unsigned>(v) : 0u;
    }
    catch (const std::exception &)
    {
        return 0;
    }
}

} // namespace

unsigned thread_count()
{
    unsigned n = g_override.load();
    if (n == 0)
        n = env_threads();
    if (n == 0)
        n = std::max(1u, std::thread::hardware_concurrency());
    return n;
}

void set_thread_count(unsigned n) { g_override.store(n); }

void parallel_for(std::size_t count, const std::function<void(std::size_t)> &body)
{
    const std::size_t workers = std::min<std::size_t>(thread_count(), count);
    if (workers <= 1 || count < 64)
    {
        for (std::size_t i = 0; i < count; ++i)
            body(i);
        return;
    }

    std::atomic<std::size_t> next{0};
    std::exception_ptr failure;
    std::mutex failure_mutex;
    auto run = [&] {
        try
        {
            for (std::size_t i = next.fetch_add(1); i < count; i = next.fetch_add(1))
                body(i);
        }
        catch (...)
        {
            std::lock_guard lock(failure_mutex);
            if (!failure)
                failure = std::current_exception();
        }
    };

    std::vector<std::jthread> pool;
    pool.reserve(workers - 1);
    for (std::size_t w = 1; w < workers; ++w)
        pool.emplace_back(run);
    run();
    pool.clear();
    if (failure)
        std::rethrow_exception(failure);
}

} // namespace csikit
