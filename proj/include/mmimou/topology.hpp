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

#ifndef MMIMOU_TOPOLOGY_HPP
#define MMIMOU_TOPOLOGY_HPP

#include "mmimou/common.hpp"

#include <array>
#include <cstdint>
#include <functional>
#include <vector>

namespace mmimou::topology
{

// Hexagonal site layout with toroidal wrap-around.
struct SiteGrid
{
    std::vector<Position> site_positions;
    int sectors_per_site = 3;
    double inter_site_distance = 500.0;
    std::vector<Eigen::Vector2d> wrap_vectors; // identity first, then the 6 cluster translations
    std::array<double, 3> sector_azimuths_rad{};

    std::size_t site_count() const { return site_positions.size(); }
    std::size_t sector_count() const { return site_positions.size() * sectors_per_site; }
    std::size_t site_of(std::size_t sector) const { return sector / sectors_per_site; }
    double azimuth_of(std::size_t sector) const { return sector_azimuths_rad[sector % sectors_per_site]; }
    Position sector_position(std::size_t sector) const { return site_positions[site_of(sector)]; }
};

// Only rings = 0 (single site) and rings = 2 (19 sites) have a wrap-around tiling here.
SiteGrid build_grid(double inter_site_distance, int rings);

// Vector from a to the nearest wrapped image of b.
Eigen::Vector2d wrap_displacement(const Position &a, const Position &b, const SiteGrid &grid);

double wrap_distance(const Position &a, const Position &b, const SiteGrid &grid);

// Site whose Voronoi cell (under wrap-around) contains p; ties to the lowest index.
std::size_t nearest_site(const Position &p, const SiteGrid &grid);

// Average received power (dB, no fast fading) from a sector to a ground point. The link seed
// fixes the node's large-scale draws (LOS state, shadowing) so the channel stage sees the
// same values the association did.
using MeanGainModel = std::function<double(std::size_t sector, const Position &point, std::uint64_t link_seed)>;

std::size_t associate(const Position &node, const SiteGrid &grid, const MeanGainModel &mean_gain_db,
                      std::uint64_t link_seed = 0);

enum class WifiRole
{
    AccessPoint,
    Station
};

struct BaseStation
{
    Position position;
    double azimuth_rad = 0.0;
    int antennas = 1;
    std::size_t site = 0;
};

struct UserEquipment
{
    Position position;
    std::size_t sector = 0;
    std::uint64_t link_seed = 0;
};

struct Hotspot
{
    Position center;
    double radius = 20.0;
    std::size_t sector = 0;
};

struct WifiDevice
{
    Position position;
    WifiRole role = WifiRole::Station;
    std::size_t hotspot = 0;
    std::size_t serving_ap = 0; // device index of the AP (itself for an AP)
};

struct NodeSet
{
    std::vector<BaseStation> bs_list; // one per sector, indexed by sector id
    std::vector<UserEquipment> ue_list;
    std::vector<Hotspot> hotspot_list;
    std::vector<WifiDevice> wifi_list;

    std::vector<std::size_t> ues_of_sector(std::size_t sector) const;
    std::vector<std::size_t> devices_of_hotspot(std::size_t hotspot) const;
};

struct DensityConfig
{
    double ues_per_sector = 8.0; // Poisson mean
    int hotspots_per_sector = 2;
    double hotspot_radius = 20.0;
    int devices_per_hotspot = 8; // 1 AP + the rest STAs
    double ue_min_bs_distance = 25.0;
    double ue_max_bs_distance = 150.0;
    double ue_min_hotspot_distance = 60.0;
    double hotspot_min_separation = 40.0;
    int max_attempts = 10000;
    int antennas = 64;

    bool operator==(const DensityConfig &) const = default;
};

// One Monte-Carlo placement. Throws ResampleDrop when a node exhausts max_attempts.
NodeSet drop_nodes(const SiteGrid &grid, Rng &rng, const DensityConfig &params, const MeanGainModel &mean_gain_db);

} // namespace mmimou::topology

#endif
