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

#include "mmimou/topology.hpp"

#include <limits>

namespace mmimou::topology
{

namespace
{

// Axial hex coordinates (q, r) -> plane, unit spacing. Neighbors sit at 0, 60, ... degrees.
Eigen::Vector2d axial_to_plane(int q, int r)
{
    return {q + 0.5 * r, r * std::numbers::sqrt3 / 2.0};
}

double uniform(Rng &rng, double lo, double hi)
{
    return std::uniform_real_distribution<double>(lo, hi)(rng);
}

} // namespace

SiteGrid build_grid(double inter_site_distance, int rings)
{
    if (!(inter_site_distance > 0.0))
        throw ConfigError("inter_site_distance must be positive");
    if (rings != 0 && rings != 2)
        throw ConfigError("rings must be 0 or 2 (19-site wrap-around layout), got " + std::to_string(rings));

    SiteGrid grid;
    grid.inter_site_distance = inter_site_distance;
    grid.sector_azimuths_rad = {deg_to_rad(30.0), deg_to_rad(150.0), deg_to_rad(270.0)};

    // Ring order: centre first, then ring 1, ring 2, each walked by axial coordinates.
    for (int ring = 0; ring <= rings; ++ring)
        for (int q = -rings; q <= rings; ++q)
            for (int r = -rings; r <= rings; ++r)
            {
                const int s = -q - r;
                if (std::max({std::abs(q), std::abs(r), std::abs(s)}) == ring)
                    grid.site_positions.push_back(inter_site_distance * axial_to_plane(q, r));
            }

    grid.wrap_vectors.push_back(Eigen::Vector2d::Zero());
    if (rings == 2)
    {
        // The 19-site cluster tiles the plane under the lattice generated by axial (3, 2)
        // and its 60-degree rotations (q, r) -> (-r, q + r).
        int q = 3, r = 2;
        for (int k = 0; k < 6; ++k)
        {
            grid.wrap_vectors.push_back(inter_site_distance * axial_to_plane(q, r));
            const int nq = -r, nr = q + r;
            q = nq;
            r = nr;
        }
    }
    return grid;
}

Eigen::Vector2d wrap_displacement(const Position &a, const Position &b, const SiteGrid &grid)
{
    const Eigen::Vector2d direct = b - a;
    Eigen::Vector2d best = direct;
    double best_sq = direct.squaredNorm();
    for (std::size_t t = 1; t < grid.wrap_vectors.size(); ++t)
    {
        const Eigen::Vector2d cand = direct + grid.wrap_vectors[t];
        const double sq = cand.squaredNorm();
        if (sq < best_sq)
        {
            best_sq = sq;
            best = cand;
        }
    }
    return best;
}

double wrap_distance(const Position &a, const Position &b, const SiteGrid &grid)
{
    return wrap_displacement(a, b, grid).norm();
}

std::size_t nearest_site(const Position &p, const SiteGrid &grid)
{
    std::size_t best = 0;
    double best_d = std::numeric_limits<double>::infinity();
    for (std::size_t s = 0; s < grid.site_count(); ++s)
    {
        const double d = wrap_distance(p, grid.site_positions[s], grid);
        if (d < best_d)
        {
            best_d = d;
            best = s;
        }
    }
    return best;
}

std::size_t associate(const Position &node, const SiteGrid &grid, const MeanGainModel &mean_gain_db,
                      std::uint64_t link_seed)
{
    std::size_t best = 0;
    double best_gain = -std::numeric_limits<double>::infinity();
    for (std::size_t sector = 0; sector < grid.sector_count(); ++sector)
    {
        const double g = mean_gain_db(sector, node, link_seed);
        if (g > best_gain) // strict: ties keep the lowest id
        {
            best_gain = g;
            best = sector;
        }
    }
    return best;
}

std::vector<std::size_t> NodeSet::ues_of_sector(std::size_t sector) const
{
    std::vector<std::size_t> out;
    for (std::size_t u = 0; u < ue_list.size(); ++u)
        if (ue_list[u].sector == sector)
            out.push_back(u);
    return out;
}

std::vector<std::size_t> NodeSet::devices_of_hotspot(std::size_t hotspot) const
{
    std::vector<std::size_t> out;
    for (std::size_t d = 0; d < wifi_list.size(); ++d)
        if (wifi_list[d].hotspot == hotspot)
            out.push_back(d);
    return out;
}

NodeSet drop_nodes(const SiteGrid &grid, Rng &rng, const DensityConfig &params, const MeanGainModel &mean_gain_db)
{
    if (params.ues_per_sector < 0.0 || params.hotspots_per_sector < 0 || params.devices_per_hotspot < 1 ||
        params.max_attempts < 1 || params.antennas < 1)
        throw ConfigError("invalid density configuration");
    if (params.ue_min_bs_distance < 0.0 || params.ue_max_bs_distance <= params.ue_min_bs_distance)
        throw ConfigError("UE distance ring must satisfy 0 <= min < max");

    NodeSet nodes;
    const double half_span = std::numbers::pi / grid.sectors_per_site;
    const double circumradius = grid.inter_site_distance / std::numbers::sqrt3;

    for (std::size_t sector = 0; sector < grid.sector_count(); ++sector)
        nodes.bs_list.push_back(
            {grid.sector_position(sector), grid.azimuth_of(sector), params.antennas, grid.site_of(sector)});

    // Hotspot centres: uniform over the sector's rhombus (site, and the three Voronoi
    // vertices at boresight and boresight +- 60 degrees), kept apart from each other.
    for (std::size_t sector = 0; sector < grid.sector_count(); ++sector)
    {
        const Position site = grid.sector_position(sector);
        const double az = grid.azimuth_of(sector);
        const Eigen::Vector2d edge_a =
            circumradius * Eigen::Vector2d(std::cos(az - half_span), std::sin(az - half_span));
        const Eigen::Vector2d edge_b =
            circumradius * Eigen::Vector2d(std::cos(az + half_span), std::sin(az + half_span));
        for (int h = 0; h < params.hotspots_per_sector; ++h)
        {
            int attempt = 0;
            for (;; ++attempt)
            {
                if (attempt >= params.max_attempts)
                    throw ResampleDrop("hotspot placement exceeded retry cap");
                const Position c = site + uniform(rng, 0.0, 1.0) * edge_a + uniform(rng, 0.0, 1.0) * edge_b;
                bool clear = true;
                for (const auto &other : nodes.hotspot_list)
                    if (wrap_distance(c, other.center, grid) < params.hotspot_min_separation)
                    {
                        clear = false;
                        break;
                    }
                if (clear)
                {
                    nodes.hotspot_list.push_back({c, params.hotspot_radius, sector});
                    break;
                }
            }
        }
    }

    // Wi-Fi devices: uniform over each hotspot disk, AP first.
    for (std::size_t h = 0; h < nodes.hotspot_list.size(); ++h)
    {
        const auto &spot = nodes.hotspot_list[h];
        const std::size_t ap_index = nodes.wifi_list.size();
        for (int d = 0; d < params.devices_per_hotspot; ++d)
        {
            const double r = spot.radius * std::sqrt(uniform(rng, 0.0, 1.0));
            const double phi = uniform(rng, 0.0, 2.0 * std::numbers::pi);
            WifiDevice dev;
            dev.position = spot.center + r * Eigen::Vector2d(std::cos(phi), std::sin(phi));
            dev.role = d == 0 ? WifiRole::AccessPoint : WifiRole::Station;
            dev.hotspot = h;
            dev.serving_ap = ap_index;
            nodes.wifi_list.push_back(dev);
        }
    }

    // UEs: Poisson count per sector, area-uniform over the sector's annular wedge, then
    // rejection on hotspot clearance and on the association rule.
    std::poisson_distribution<int> ue_count(params.ues_per_sector);
    const double r2_lo = params.ue_min_bs_distance * params.ue_min_bs_distance;
    const double r2_hi = params.ue_max_bs_distance * params.ue_max_bs_distance;
    for (std::size_t sector = 0; sector < grid.sector_count(); ++sector)
    {
        const int count = params.ues_per_sector > 0.0 ? ue_count(rng) : 0;
        const Position site = grid.sector_position(sector);
        const double az = grid.azimuth_of(sector);
        for (int u = 0; u < count; ++u)
        {
            int attempt = 0;
            for (;; ++attempt)
            {
                if (attempt >= params.max_attempts)
                    throw ResampleDrop("UE placement exceeded retry cap");
                const double r = std::sqrt(uniform(rng, r2_lo, r2_hi));
                const double phi = az + uniform(rng, -half_span, half_span);
                const Position p = site + r * Eigen::Vector2d(std::cos(phi), std::sin(phi));
                bool clear = true;
                for (const auto &spot : nodes.hotspot_list)
                    if (wrap_distance(p, spot.center, grid) < params.ue_min_hotspot_distance)
                    {
                        clear = false;
                        break;
                    }
                if (!clear)
                    continue;
                const std::uint64_t link_seed = rng();
                if (associate(p, grid, mean_gain_db, link_seed) != sector)
                    continue;
                nodes.ue_list.push_back({p, sector, link_seed});
                break;
            }
        }
    }
    return nodes;
}

} // namespace mmimou::topology
