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

#ifndef MMIMOU_CONFIG_HPP
#define MMIMOU_CONFIG_HPP

#include "mmimou/channel.hpp"
#include "mmimou/spatial.hpp"
#include "mmimou/topology.hpp"

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

namespace mmimou::harness
{

enum class Scheme
{
    MassiveMimoU,
    ConventionalLbt,
    Both
};

std::string to_string(Scheme s);
Scheme parse_scheme(const std::string &text);

struct RadioParams
{
    double bs_power_dbm = 30.0;
    double ap_power_dbm = 24.0;
    double sta_power_dbm = 18.0;
    double noise_density_dbm_hz = -174.0;
    double bandwidth_mhz = 20.0;
    double ue_noise_figure_db = 9.0;
    double bs_noise_figure_db = 5.0;
    double ue_sensitivity_dbm = -94.0;
    double lbt_threshold_dbm = -62.0;
    double wifi_cluster_rate_mbps = 65.0;

    bool operator==(const RadioParams &) const = default;

    double bandwidth_hz() const { return bandwidth_mhz * 1e6; }
    double ue_noise_w() const { return dbm_to_watts(noise_density_dbm_hz + ue_noise_figure_db) * bandwidth_hz(); }
    double bs_noise_w() const { return dbm_to_watts(noise_density_dbm_hz + bs_noise_figure_db) * bandwidth_hz(); }
};

// Unit in which the unit-variance CSI error is expressed: the UE's thermal noise referred to
// the BS transmit power, or the link's own mean element power.
enum class CsiErrorReference
{
    Noise,
    Link
};

struct SpatialParams
{
    spatial::Criterion criterion = spatial::Criterion::FixedUsers;
    double c1 = 0.5;
    double c2 = 0.5;
    double gamma_dbm = -85.0;  // eigenvalue threshold for the interference-cap criterion
    int samples = 200;         // M
    int max_users = 0;         // 0: serve every associated UE (up to N)
    bool cluster_access = true; // one device per Wi-Fi cluster on air in each sensing sample
    double condition_cap = 1e12;
    double regularization = 1e-10;

    bool operator==(const SpatialParams &) const = default;
};

struct SimConfig
{
    Scheme scheme = Scheme::Both;
    std::vector<int> antennas{32, 64, 128};
    int drops = 1000;
    std::uint64_t seed = 42;
    int workers = 1;
    std::filesystem::path output_dir = "results";
    bool dump_layout = false;
    int max_resamples = 16;

    double inter_site_distance = 500.0;
    int rings = 2;
    topology::DensityConfig density;
    channel::ModelConstants channel;
    double csi_tau2 = 0.1;
    CsiErrorReference csi_reference = CsiErrorReference::Noise;
    RadioParams radio;
    SpatialParams spatial;

    bool operator==(const SimConfig &) const = default;
};

// Throws ConfigError naming the offending key and its bound.
void validate(const SimConfig &cfg);

// INI-style "key = value" under [sections]; absent keys keep their defaults.
SimConfig load_config(const std::filesystem::path &path);
SimConfig parse_config(const std::string &text);
std::string serialize_config(const SimConfig &cfg);
void save_config(const SimConfig &cfg, const std::filesystem::path &path);

// Stable over semantically identical configs (hash of the canonical serialisation).
std::string config_hash(const SimConfig &cfg);

// Every key accepted by the config file, "section.key".
std::vector<std::string> config_keys();

} // namespace mmimou::harness

#endif
