// SPDX-License-Identifier: Apache-2.0
//
// mmimou: massive MIMO / Wi-Fi coexistence system-level simulator
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

#include "mmimou/spatial.hpp"

namespace mmimou::spatial
{

std::vector<std::size_t> schedule_ues(std::span<const std::size_t> associated, Index users, Rng &rng)
{
    if (users < 1)
        throw ConfigError("scheduled user count must be >= 1");
    std::vector<std::size_t> pool(associated.begin(), associated.end());
    const std::size_t take = std::min(pool.size(), static_cast<std::size_t>(users));
    // partial Fisher-Yates
    for (std::size_t i = 0; i < take; ++i)
    {
        std::uniform_int_distribution<std::size_t> pick(i, pool.size() - 1);
        std::swap(pool[i], pool[pick(rng)]);
    }
    pool.resize(take);
    std::sort(pool.begin(), pool.end());
    return pool;
}

} // namespace mmimou::spatial
