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

#ifndef MMIMOU_SIMULATION_HPP
#define MMIMOU_SIMULATION_HPP

// One Monte-Carlo drop: placement, channels, both access schemes, and every
// per-drop observable.

#include "mmimou/config.hpp"

#include <cstdint>
#include <vector>

namespace mmimou::harness
{

struct SectorRates
{
    std::vector<double> cellular_bps; // per sector
    std::vector<double> wifi_bps;     // per sector
};

struct SchemeMetrics
{
    std::vector<double> wifi_interference_w; // per Wi-Fi device, every loaded BS transmitting
    std::vector<double> bs_sensed_w;         // per loaded BS over the sensing window
    std::vector<double> ue_sinr_db;          // per scheduled UE of a transmitting BS
    int granted = 0;                         // BSs whose LBT passed
    int loaded = 0;                          // BSs with at least one UE
    int regularized = 0;                     // precoders that needed diagonal loading
};

struct DropMetrics
{
    int antennas = 0;
    std::size_t drop_index = 0;
    std::uint64_t seed = 0;
    int resamples = 0;

    SchemeMetrics mmimo_u;
    SchemeMetrics lbt;
    SectorRates mmimo_u_rates;
    SectorRates lbt_case1_rates; // BS time-shares with the APs (downlink-only Wi-Fi)
    SectorRates lbt_case2_rates; // BS time-shares with every Wi-Fi device
};

// Pre-computed per antenna count and shared read-only across workers.
struct DropContext
{
    DropContext(const SimConfig &cfg, int antennas);

    const SimConfig &cfg;
    int antennas;
    topology::SiteGrid grid;
    channel::FadingSynthesizer fading;
};

DropMetrics evaluate_drop(const DropContext &ctx, std::size_t drop_index, std::uint64_t seed);

// Layout only, for --dump-layout.
topology::NodeSet draw_layout(const DropContext &ctx, std::uint64_t seed, int *resamples = nullptr);

} // namespace mmimou::harness

#endif
