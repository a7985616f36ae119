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

#include "mmimou/config.hpp"

#include <boost/property_tree/ini_parser.hpp>
#include <boost/property_tree/ptree.hpp>

#include <charconv>
#include <fstream>
#include <functional>
#include <map>
#include <sstream>

namespace mmimou::harness
{

std::string to_string(Scheme s)
{
    switch (s)
    {
    case Scheme::MassiveMimoU:
        return "mmimo-u";
    case Scheme::ConventionalLbt:
        return "lbt";
    case Scheme::Both:
        return "both";
    }
    return "both";
}

Scheme parse_scheme(const std::string &text)
{
    if (text == "mmimo-u" || text == "mMIMO-U")
        return Scheme::MassiveMimoU;
    if (text == "lbt" || text == "conventional-LBT" || text == "conventional-lbt")
        return Scheme::ConventionalLbt;
    if (text == "both")
        return Scheme::Both;
    throw ConfigError("unknown scheme '" + text + "' (expected mmimo-u, lbt or both)");
}

namespace
{

std::string format_double(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double parse_double(const std::string &key, const std::string &text)
{
    double v = 0.0;
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError(key + ": expected a number, got '" + text + "'");
    return v;
}

template <typename Int>
Int parse_int(const std::string &key, const std::string &text)
{
    Int v{};
    const auto res = std::from_chars(text.data(), text.data() + text.size(), v);
    if (res.ec != std::errc() || res.ptr != text.data() + text.size())
        throw ConfigError(key + ": expected an integer, got '" + text + "'");
    return v;
}

bool parse_bool(const std::string &key, const std::string &text)
{
    if (text == "true" || text == "1" || text == "yes")
        return true;
    if (text == "false" || text == "0" || text == "no")
        return false;
    throw ConfigError(key + ": expected true/false, got '" + text + "'");
}

std::vector<int> parse_int_list(const std::string &key, const std::string &text)
{
    std::vector<int> out;
    std::stringstream ss(text);
    std::string item;
    while (std::getline(ss, item, ','))
    {
        const auto b = item.find_first_not_of(" \t");
        const auto e = item.find_last_not_of(" \t");
        if (b == std::string::npos)
            throw ConfigError(key + ": empty list element");
        out.push_back(parse_int<int>(key, item.substr(b, e - b + 1)));
    }
    return out;
}

std::string join(const std::vector<int> &v)
{
    std::string s;
    for (std::size_t i = 0; i < v.size(); ++i)
        s += (i ? "," : "") + std::to_string(v[i]);
    return s;
}

struct Field
{
    std::string key; // section.name
    std::function<std::string(const SimConfig &)> get;
    std::function<void(SimConfig &, const std::string &)> set;
};

template <typename Access>
Field real_field(std::string key, Access access)
{
    return {key, [access](const SimConfig &c) { return format_double(access(const_cast<SimConfig &>(c))); },
            [access, key](SimConfig &c, const std::string &t) { access(c) = parse_double(key, t); }};
}

template <typename Access>
Field int_field(std::string key, Access access)
{
    return {key, [access](const SimConfig &c) { return std::to_string(access(const_cast<SimConfig &>(c))); },
            [access, key](SimConfig &c, const std::string &t) {
                access(c) = parse_int<std::remove_reference_t<decltype(access(c))>>(key, t);
            }};
}

const std::vector<Field> &fields()
{
    static const std::vector<Field> table = [] {
        std::vector<Field> f;
        f.push_back({"run.scheme", [](const SimConfig &c) { return to_string(c.scheme); },
                     [](SimConfig &c, const std::string &t) { c.scheme = parse_scheme(t); }});
        f.push_back({"run.antennas", [](const SimConfig &c) { return join(c.antennas); },
                     [](SimConfig &c, const std::string &t) { c.antennas = parse_int_list("run.antennas", t); }});
        f.push_back(int_field("run.drops", [](SimConfig &c) -> int & { return c.drops; }));
        f.push_back(int_field("run.seed", [](SimConfig &c) -> std::uint64_t & { return c.seed; }));
        f.push_back(int_field("run.workers", [](SimConfig &c) -> int & { return c.workers; }));
        f.push_back({"run.output_dir", [](const SimConfig &c) { return c.output_dir.string(); },
                     [](SimConfig &c, const std::string &t) { c.output_dir = t; }});
        f.push_back({"run.dump_layout", [](const SimConfig &c) { return std::string(c.dump_layout ? "true" : "false"); },
                     [](SimConfig &c, const std::string &t) { c.dump_layout = parse_bool("run.dump_layout", t); }});
        f.push_back(int_field("run.max_resamples", [](SimConfig &c) -> int & { return c.max_resamples; }));

        f.push_back(real_field("topology.inter_site_distance", [](SimConfig &c) -> double & { return c.inter_site_distance; }));
        f.push_back(int_field("topology.rings", [](SimConfig &c) -> int & { return c.rings; }));
        f.push_back(real_field("topology.ues_per_sector", [](SimConfig &c) -> double & { return c.density.ues_per_sector; }));
        f.push_back(int_field("topology.hotspots_per_sector", [](SimConfig &c) -> int & { return c.density.hotspots_per_sector; }));
        f.push_back(real_field("topology.hotspot_radius", [](SimConfig &c) -> double & { return c.density.hotspot_radius; }));
        f.push_back(int_field("topology.devices_per_hotspot", [](SimConfig &c) -> int & { return c.density.devices_per_hotspot; }));
        f.push_back(real_field("topology.ue_min_bs_distance", [](SimConfig &c) -> double & { return c.density.ue_min_bs_distance; }));
        f.push_back(real_field("topology.ue_max_bs_distance", [](SimConfig &c) -> double & { return c.density.ue_max_bs_distance; }));
        f.push_back(real_field("topology.ue_min_hotspot_distance", [](SimConfig &c) -> double & { return c.density.ue_min_hotspot_distance; }));
        f.push_back(real_field("topology.hotspot_min_separation", [](SimConfig &c) -> double & { return c.density.hotspot_min_separation; }));
        f.push_back(int_field("topology.max_attempts", [](SimConfig &c) -> int & { return c.density.max_attempts; }));

        f.push_back(real_field("channel.carrier_ghz", [](SimConfig &c) -> double & { return c.channel.carrier_ghz; }));
        f.push_back(real_field("channel.bs_height", [](SimConfig &c) -> double & { return c.channel.bs_height_m; }));
        f.push_back(real_field("channel.device_height", [](SimConfig &c) -> double & { return c.channel.device_height_m; }));
        f.push_back(real_field("channel.building_height", [](SimConfig &c) -> double & { return c.channel.building_height_m; }));
        f.push_back(real_field("channel.street_width", [](SimConfig &c) -> double & { return c.channel.street_width_m; }));
        f.push_back(real_field("channel.uma_shadowing_los_db", [](SimConfig &c) -> double & { return c.channel.uma_shadowing_los_db; }));
        f.push_back(real_field("channel.uma_shadowing_nlos_db", [](SimConfig &c) -> double & { return c.channel.uma_shadowing_nlos_db; }));
        f.push_back(real_field("channel.d2d_shadowing_db", [](SimConfig &c) -> double & { return c.channel.d2d_shadowing_db; }));
        f.push_back(real_field("channel.element_gain_dbi", [](SimConfig &c) -> double & { return c.channel.element_gain_dbi; }));
        f.push_back(real_field("channel.downtilt_deg", [](SimConfig &c) -> double & { return c.channel.downtilt_deg; }));
        f.push_back(real_field("channel.azimuth_beamwidth_deg", [](SimConfig &c) -> double & { return c.channel.azimuth_beamwidth_deg; }));
        f.push_back(real_field("channel.elevation_beamwidth_deg", [](SimConfig &c) -> double & { return c.channel.elevation_beamwidth_deg; }));
        f.push_back(real_field("channel.front_to_back_db", [](SimConfig &c) -> double & { return c.channel.front_to_back_db; }));
        f.push_back(real_field("channel.elevation_sidelobe_db", [](SimConfig &c) -> double & { return c.channel.elevation_sidelobe_db; }));
        f.push_back(real_field("channel.k_factor_intercept_db", [](SimConfig &c) -> double & { return c.channel.k_factor_intercept_db; }));
        f.push_back(real_field("channel.k_factor_slope_db_per_m", [](SimConfig &c) -> double & { return c.channel.k_factor_slope_db_per_m; }));
        f.push_back(real_field("channel.element_spacing_wavelengths", [](SimConfig &c) -> double & { return c.channel.element_spacing_wavelengths; }));
        f.push_back(real_field("channel.min_coupling_db", [](SimConfig &c) -> double & { return c.channel.min_coupling_db; }));
        f.push_back(real_field("channel.csi_tau2", [](SimConfig &c) -> double & { return c.csi_tau2; }));
        f.push_back({"channel.csi_reference",
                     [](const SimConfig &c) {
                         return std::string(c.csi_reference == CsiErrorReference::Noise ? "noise" : "link");
                     },
                     [](SimConfig &c, const std::string &t) {
                         if (t == "noise")
                             c.csi_reference = CsiErrorReference::Noise;
                         else if (t == "link")
                             c.csi_reference = CsiErrorReference::Link;
                         else
                             throw ConfigError("channel.csi_reference: expected noise or link, got '" + t + "'");
                     }});

        f.push_back(real_field("radio.bs_power_dbm", [](SimConfig &c) -> double & { return c.radio.bs_power_dbm; }));
        f.push_back(real_field("radio.ap_power_dbm", [](SimConfig &c) -> double & { return c.radio.ap_power_dbm; }));
        f.push_back(real_field("radio.sta_power_dbm", [](SimConfig &c) -> double & { return c.radio.sta_power_dbm; }));
        f.push_back(real_field("radio.noise_density_dbm_hz", [](SimConfig &c) -> double & { return c.radio.noise_density_dbm_hz; }));
        f.push_back(real_field("radio.bandwidth_mhz", [](SimConfig &c) -> double & { return c.radio.bandwidth_mhz; }));
        f.push_back(real_field("radio.ue_noise_figure_db", [](SimConfig &c) -> double & { return c.radio.ue_noise_figure_db; }));
        f.push_back(real_field("radio.bs_noise_figure_db", [](SimConfig &c) -> double & { return c.radio.bs_noise_figure_db; }));
        f.push_back(real_field("radio.ue_sensitivity_dbm", [](SimConfig &c) -> double & { return c.radio.ue_sensitivity_dbm; }));
        f.push_back(real_field("radio.lbt_threshold_dbm", [](SimConfig &c) -> double & { return c.radio.lbt_threshold_dbm; }));
        f.push_back(real_field("radio.wifi_cluster_rate_mbps", [](SimConfig &c) -> double & { return c.radio.wifi_cluster_rate_mbps; }));

        f.push_back({"spatial.criterion",
                     [](const SimConfig &c) {
                         return std::string(c.spatial.criterion == spatial::Criterion::FixedUsers ? "fixed-k" : "threshold");
                     },
                     [](SimConfig &c, const std::string &t) {
                         if (t == "fixed-k")
                             c.spatial.criterion = spatial::Criterion::FixedUsers;
                         else if (t == "threshold")
                             c.spatial.criterion = spatial::Criterion::InterferenceCap;
                         else
                             throw ConfigError("spatial.criterion: expected fixed-k or threshold, got '" + t + "'");
                     }});
        f.push_back(real_field("spatial.c1", [](SimConfig &c) -> double & { return c.spatial.c1; }));
        f.push_back(real_field("spatial.c2", [](SimConfig &c) -> double & { return c.spatial.c2; }));
        f.push_back(real_field("spatial.gamma_dbm", [](SimConfig &c) -> double & { return c.spatial.gamma_dbm; }));
        f.push_back(int_field("spatial.samples", [](SimConfig &c) -> int & { return c.spatial.samples; }));
        f.push_back(int_field("spatial.max_users", [](SimConfig &c) -> int & { return c.spatial.max_users; }));
        f.push_back({"spatial.cluster_access",
                     [](const SimConfig &c) { return std::string(c.spatial.cluster_access ? "true" : "false"); },
                     [](SimConfig &c, const std::string &t) {
                         c.spatial.cluster_access = parse_bool("spatial.cluster_access", t);
                     }});
        f.push_back(real_field("spatial.condition_cap", [](SimConfig &c) -> double & { return c.spatial.condition_cap; }));
        f.push_back(real_field("spatial.regularization", [](SimConfig &c) -> double & { return c.spatial.regularization; }));
        return f;
    }();
    return table;
}

void require(bool ok, const std::string &key, const std::string &bound)
{
    if (!ok)
        throw ConfigError(key + " out of range: must be " + bound);
}

} // namespace

std::vector<std::string> config_keys()
{
    std::vector<std::string> keys;
    for (const auto &f : fields())
        keys.push_back(f.key);
    return keys;
}

void validate(const SimConfig &c)
{
    require(!c.antennas.empty(), "run.antennas", "a nonempty list");
    for (int n : c.antennas)
        require(n >= 1 && n <= 1024, "run.antennas", "within [1, 1024]");
    require(c.drops >= 1, "run.drops", ">= 1");
    require(c.workers >= 1, "run.workers", ">= 1");
    require(c.max_resamples >= 0, "run.max_resamples", ">= 0");
    require(c.inter_site_distance > 0.0, "topology.inter_site_distance", "> 0");
    require(c.rings == 0 || c.rings == 2, "topology.rings", "0 or 2");
    require(c.density.ues_per_sector >= 0.0, "topology.ues_per_sector", ">= 0");
    require(c.density.hotspots_per_sector >= 0, "topology.hotspots_per_sector", ">= 0");
    require(c.density.hotspot_radius > 0.0, "topology.hotspot_radius", "> 0");
    require(c.density.devices_per_hotspot >= 1, "topology.devices_per_hotspot", ">= 1");
    require(c.density.ue_min_bs_distance >= 0.0, "topology.ue_min_bs_distance", ">= 0");
    require(c.density.ue_max_bs_distance > c.density.ue_min_bs_distance, "topology.ue_max_bs_distance",
            "> topology.ue_min_bs_distance");
    require(c.density.ue_min_hotspot_distance >= 0.0, "topology.ue_min_hotspot_distance", ">= 0");
    require(c.density.hotspot_min_separation >= 0.0, "topology.hotspot_min_separation", ">= 0");
    require(c.density.max_attempts >= 1, "topology.max_attempts", ">= 1");
    require(c.channel.carrier_ghz > 0.0, "channel.carrier_ghz", "> 0");
    require(c.channel.bs_height_m > c.channel.device_height_m, "channel.bs_height", "> channel.device_height");
    require(c.channel.device_height_m > 1.0, "channel.device_height", "> 1 m (effective antenna height)");
    require(c.channel.element_spacing_wavelengths > 0.0, "channel.element_spacing_wavelengths", "> 0");
    require(c.channel.azimuth_beamwidth_deg > 0.0, "channel.azimuth_beamwidth_deg", "> 0");
    require(c.channel.elevation_beamwidth_deg > 0.0, "channel.elevation_beamwidth_deg", "> 0");
    require(c.channel.uma_shadowing_los_db >= 0.0 && c.channel.uma_shadowing_nlos_db >= 0.0 &&
                c.channel.d2d_shadowing_db >= 0.0,
            "channel.*_shadowing_db", ">= 0");
    require(c.csi_tau2 >= 0.0 && c.csi_tau2 <= 1.0, "channel.csi_tau2", "within [0, 1]");
    require(c.radio.bandwidth_mhz > 0.0, "radio.bandwidth_mhz", "> 0");
    require(c.radio.wifi_cluster_rate_mbps >= 0.0, "radio.wifi_cluster_rate_mbps", ">= 0");
    for (double dbm : {c.radio.bs_power_dbm, c.radio.ap_power_dbm, c.radio.sta_power_dbm, c.radio.lbt_threshold_dbm,
                       c.radio.ue_sensitivity_dbm, c.spatial.gamma_dbm})
        require(std::isfinite(dbm) && dbm_to_watts(dbm) > 0.0, "radio.*_dbm", "finite (positive watts)");
    require(c.spatial.c1 > 0.0 && c.spatial.c1 < 1.0, "spatial.c1", "within (0, 1)");
    require(c.spatial.c2 > 0.0 && c.spatial.c2 < 1.0, "spatial.c2", "within (0, 1)");
    require(c.spatial.samples >= 1, "spatial.samples", ">= 1");
    require(c.spatial.max_users >= 0, "spatial.max_users", ">= 0");
    require(c.spatial.condition_cap > 1.0, "spatial.condition_cap", "> 1");
    require(c.spatial.regularization > 0.0, "spatial.regularization", "> 0");
}

SimConfig parse_config(const std::string &text)
{
    namespace pt = boost::property_tree;
    pt::ptree tree;
    std::istringstream in(text);
    try
    {
        pt::ini_parser::read_ini(in, tree);
    }
    catch (const pt::ini_parser_error &e)
    {
        throw ConfigError(std::string("config parse error: ") + e.what());
    }

    std::map<std::string, const Field *> by_key;
    for (const auto &f : fields())
        by_key[f.key] = &f;

    SimConfig cfg;
    for (const auto &[section, body] : tree)
    {
        if (body.empty() && !body.data().empty())
            throw ConfigError("key '" + section + "' must live inside a [section]");
        for (const auto &[name, value] : body)
        {
            const std::string key = section + "." + name;
            const auto it = by_key.find(key);
            if (it == by_key.end())
            {
                std::string valid;
                for (const auto &k : config_keys())
                    valid += "\n  " + k;
                throw ConfigError("unknown config key '" + key + "'; valid keys:" + valid);
            }
            it->second->set(cfg, value.data());
        }
    }
    validate(cfg);
    return cfg;
}

SimConfig load_config(const std::filesystem::path &path)
{
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot read config file " + path.string());
    std::stringstream buf;
    buf << in.rdbuf();
    return parse_config(buf.str());
}

std::string serialize_config(const SimConfig &cfg)
{
    std::string out;
    std::string current;
    for (const auto &f : fields())
    {
        const auto dot = f.key.find('.');
        const std::string section = f.key.substr(0, dot);
        if (section != current)
        {
            out += (current.empty() ? "[" : "\n[") + section + "]\n";
            current = section;
        }
        out += f.key.substr(dot + 1) + " = " + f.get(cfg) + "\n";
    }
    return out;
}

void save_config(const SimConfig &cfg, const std::filesystem::path &path)
{
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write config file " + path.string());
    out << serialize_config(cfg);
}

std::string config_hash(const SimConfig &cfg)
{
    // FNV-1a over the canonical text; the output directory and worker count do not
    // change results and are left out.
    SimConfig canonical = cfg;
    canonical.output_dir = "";
    canonical.workers = 1;
    canonical.dump_layout = false;
    std::uint64_t h = 0xcbf29ce484222325ULL;
    for (unsigned char ch : serialize_config(canonical))
    {
        h ^= ch;
        h *= 0x100000001b3ULL;
    }
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

} // namespace mmimou::harness
