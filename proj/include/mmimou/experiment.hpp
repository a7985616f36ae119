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

#ifndef MMIMOU_EXPERIMENT_HPP
#define MMIMOU_EXPERIMENT_HPP

// Monte-Carlo sweep over antenna counts and drops, with a worker pool whose output does
// not depend on the number of workers.

#include "mmimou/metrics.hpp"
#include "mmimou/simulation.hpp"

#include <functional>
#include <string>
#include <vector>

namespace mmimou::harness
{

inline constexpr const char *kVersion = "1.0.0";

// Pooled observables of one antenna count, in drop order.
struct AntennaResult
{
    int antennas = 0;
    std::vector<std::uint64_t> drop_seeds;
    std::vector<int> resamples;

    std::vector<double> wifi_interference_mmimo_w;
    std::vector<double> wifi_interference_lbt_w;
    std::vector<double> bs_sensed_enhanced_w;
    std::vector<double> bs_sensed_conventional_w;
    std::vector<double> ue_sinr_mmimo_db;
    std::vector<double> ue_sinr_lbt_db;

    // Mean per-sector rates (bps) over all sectors and drops.
    double mmimo_cellular_bps = 0.0;
    double mmimo_wifi_bps = 0.0;
    double lbt_case1_cellular_bps = 0.0;
    double lbt_case1_wifi_bps = 0.0;
    double lbt_case2_cellular_bps = 0.0;
    double lbt_case2_wifi_bps = 0.0;

    int loaded = 0;
    int enhanced_granted = 0;
    int conventional_granted = 0;
    int regularized_mmimo = 0;
    int regularized_lbt = 0;
};

struct RunManifest
{
    std::string config_hash;
    std::string version = kVersion;
    std::uint64_t master_seed = 0;
    int workers = 1;
    double wall_clock_s = 0.0;
    std::vector<std::string> flags;
    std::string config_text;
};

struct ExperimentResult
{
    std::vector<AntennaResult> per_antennas; // in cfg.antennas order
    RunManifest manifest;
};

// Seed of drop d. Shared by every antenna count so the sweep compares the same layouts.
std::uint64_t drop_seed(std::uint64_t master, std::size_t drop);

using ProgressFn = std::function<void(std::size_t done, std::size_t total)>;

ExperimentResult run_experiment(const SimConfig &cfg, const ProgressFn &progress = {});

// Folds one drop into the pooled result; drops must be added in index order.
void accumulate(AntennaResult &acc, const DropMetrics &drop);

// Turns the per-sector rate sums into means once every drop has been added.
void finalize(AntennaResult &acc, std::size_t drops, std::size_t sectors);

} // namespace mmimou::harness

#endif
