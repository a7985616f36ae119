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

#include "mmimou/experiment.hpp"

#include "mmimou/random.hpp"

#include <atomic>
#include <chrono>
#include <exception>
#include <mutex>
#include <numeric>
#include <thread>

namespace mmimou::harness
{

namespace
{

constexpr std::uint64_t kDropStream = 2;

double total(const std::vector<double> &v)
{
    return std::accumulate(v.begin(), v.end(), 0.0);
}

void append(std::vector<double> &to, const std::vector<double> &from)
{
    to.insert(to.end(), from.begin(), from.end());
}

} // namespace

std::uint64_t drop_seed(std::uint64_t master, std::size_t drop)
{
    return derive_seed(master, kDropStream, drop);
}

void accumulate(AntennaResult &acc, const DropMetrics &d)
{
    acc.drop_seeds.push_back(d.seed);
    acc.resamples.push_back(d.resamples);
    append(acc.wifi_interference_mmimo_w, d.mmimo_u.wifi_interference_w);
    append(acc.wifi_interference_lbt_w, d.lbt.wifi_interference_w);
    append(acc.bs_sensed_enhanced_w, d.mmimo_u.bs_sensed_w);
    append(acc.bs_sensed_conventional_w, d.lbt.bs_sensed_w);
    append(acc.ue_sinr_mmimo_db, d.mmimo_u.ue_sinr_db);
    append(acc.ue_sinr_lbt_db, d.lbt.ue_sinr_db);
    acc.mmimo_cellular_bps += total(d.mmimo_u_rates.cellular_bps);
    acc.mmimo_wifi_bps += total(d.mmimo_u_rates.wifi_bps);
    acc.lbt_case1_cellular_bps += total(d.lbt_case1_rates.cellular_bps);
    acc.lbt_case1_wifi_bps += total(d.lbt_case1_rates.wifi_bps);
    acc.lbt_case2_cellular_bps += total(d.lbt_case2_rates.cellular_bps);
    acc.lbt_case2_wifi_bps += total(d.lbt_case2_rates.wifi_bps);
    acc.loaded += d.mmimo_u.loaded;
    acc.enhanced_granted += d.mmimo_u.granted;
    acc.conventional_granted += d.lbt.granted;
    acc.regularized_mmimo += d.mmimo_u.regularized;
    acc.regularized_lbt += d.lbt.regularized;
}

void finalize(AntennaResult &acc, std::size_t drops, std::size_t sectors)
{
    const double n = static_cast<double>(drops * sectors);
    if (n <= 0.0)
        return;
    for (double *v : {&acc.mmimo_cellular_bps, &acc.mmimo_wifi_bps, &acc.lbt_case1_cellular_bps,
                      &acc.lbt_case1_wifi_bps, &acc.lbt_case2_cellular_bps, &acc.lbt_case2_wifi_bps})
        *v /= n;
}

ExperimentResult run_experiment(const SimConfig &cfg, const ProgressFn &progress)
{
    validate(cfg);
    const auto start = std::chrono::steady_clock::now();
    const std::size_t drops = static_cast<std::size_t>(cfg.drops);
    const std::size_t sweeps = cfg.antennas.size();

    std::vector<DropContext> contexts;
    contexts.reserve(sweeps);
    for (int n : cfg.antennas)
        contexts.emplace_back(cfg, n);

    // Results are stored by task index and folded in order afterwards, so the outcome is
    // independent of scheduling.
    const std::size_t tasks = sweeps * drops;
    std::vector<DropMetrics> results(tasks);
    std::atomic<std::size_t> next{0};
    std::atomic<std::size_t> done{0};
    std::exception_ptr failure;
    std::mutex guard;

    auto worker = [&] {
        for (;;)
        {
            const std::size_t t = next.fetch_add(1);
            if (t >= tasks)
                return;
            {
                std::lock_guard lock(guard);
                if (failure)
                    return;
            }
            const std::size_t sweep = t / drops;
            const std::size_t drop = t % drops;
            try
            {
                results[t] = evaluate_drop(contexts[sweep], drop, drop_seed(cfg.seed, drop));
            }
            catch (...)
            {
                std::lock_guard lock(guard);
                if (!failure)
                    failure = std::current_exception();
                return;
            }
            const std::size_t finished = ++done;
            if (progress)
            {
                std::lock_guard lock(guard);
                progress(finished, tasks);
            }
        }
    };

    const int workers = std::max(1, std::min<int>(cfg.workers, static_cast<int>(tasks)));
    if (workers == 1)
        worker();
    else
    {
        std::vector<std::jthread> pool;
        for (int w = 0; w < workers; ++w)
            pool.emplace_back(worker);
    }
    if (failure)
        std::rethrow_exception(failure);

    ExperimentResult out;
    for (std::size_t s = 0; s < sweeps; ++s)
    {
        AntennaResult acc;
        acc.antennas = cfg.antennas[s];
        for (std::size_t d = 0; d < drops; ++d)
        {
            accumulate(acc, results[s * drops + d]);
            results[s * drops + d] = DropMetrics{};
        }
        finalize(acc, drops, contexts[s].grid.sector_count());
        out.per_antennas.push_back(std::move(acc));
    }

    out.manifest.config_hash = config_hash(cfg);
    out.manifest.master_seed = cfg.seed;
    out.manifest.workers = workers;
    out.manifest.config_text = serialize_config(cfg);
    out.manifest.wall_clock_s =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return out;
}

} // namespace mmimou::harness
