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

#include "mmimou/output.hpp"

#include <json.hpp>

#include <charconv>
#include <fstream>
#include <random>

namespace mmimou::harness
{

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace
{

constexpr double kFloorWatts = 1e-30;

std::string num(double v)
{
    char buf[64];
    const auto res = std::to_chars(buf, buf + sizeof(buf), v);
    return std::string(buf, res.ptr);
}

double to_dbm(double w)
{
    return watts_to_dbm(std::max(w, kFloorWatts));
}

bool wants_mmimo(Scheme s)
{
    return s != Scheme::ConventionalLbt;
}

bool wants_lbt(Scheme s)
{
    return s != Scheme::MassiveMimoU;
}

void cdf_rows(std::string &out, const char *scheme, int antennas, const std::vector<double> &watts)
{
    if (watts.empty())
        return;
    const auto cdf = metrics::build_cdf(watts);
    for (int j = 1; j <= kCdfPoints; ++j)
    {
        const double p = static_cast<double>(j) / kCdfPoints;
        out += std::string(scheme) + "," + std::to_string(antennas) + "," + num(p) + "," +
               num(to_dbm(cdf.quantile(p))) + "\n";
    }
}

ordered_json power_stats(const std::vector<double> &watts, double threshold_w)
{
    ordered_json j;
    if (watts.empty())
        return j;
    const auto cdf = metrics::build_cdf(watts);
    j["samples"] = watts.size();
    j["fraction_below_threshold"] = cdf.fraction_below(threshold_w);
    j["fraction_at_or_above_threshold"] = 1.0 - cdf.fraction_below(threshold_w);
    j["median_dbm"] = to_dbm(cdf.median());
    j["p05_dbm"] = to_dbm(cdf.quantile(0.05));
    j["p95_dbm"] = to_dbm(cdf.quantile(0.95));
    return j;
}

ordered_json rate_entry(double cellular_bps, double wifi_bps)
{
    return {{"cellular_mbps", cellular_bps / 1e6},
            {"wifi_mbps", wifi_bps / 1e6},
            {"aggregate_mbps", (cellular_bps + wifi_bps) / 1e6}};
}

double median_or_nan(std::vector<double> v)
{
    if (v.empty())
        return std::numeric_limits<double>::quiet_NaN();
    return metrics::build_cdf(v).median();
}

} // namespace

void check_writable(const fs::path &dir)
{
    std::error_code ec;
    fs::create_directories(dir, ec);
    if (ec)
        throw IoError("cannot create output directory " + dir.string() + ": " + ec.message());
    if (!fs::is_directory(dir))
        throw IoError("output path is not a directory: " + dir.string());
    const fs::path probe = dir / (".write-probe-" + std::to_string(std::random_device{}()));
    {
        std::ofstream f(probe);
        if (!f || !(f << "ok") || !f.flush())
            throw IoError("output directory is not writable: " + dir.string());
    }
    fs::remove(probe, ec);
}

void write_atomic(const fs::path &path, const std::string &content)
{
    const fs::path tmp = path.string() + ".tmp";
    {
        std::ofstream f(tmp, std::ios::binary | std::ios::trunc);
        if (!f)
            throw IoError("cannot open " + tmp.string() + " for writing");
        f << content;
        f.flush();
        if (!f)
            throw IoError("write failed for " + tmp.string());
    }
    std::error_code ec;
    fs::rename(tmp, path, ec);
    if (ec)
    {
        fs::remove(tmp, ec);
        throw IoError("cannot move " + tmp.string() + " to " + path.string());
    }
}

std::string fig2_csv(const ExperimentResult &result, Scheme scheme)
{
    std::string out = "scheme,antennas,probability,value_dbm\n";
    for (const auto &r : result.per_antennas)
    {
        if (wants_mmimo(scheme))
            cdf_rows(out, "mmimo-u", r.antennas, r.wifi_interference_mmimo_w);
        if (wants_lbt(scheme))
            cdf_rows(out, "lbt", r.antennas, r.wifi_interference_lbt_w);
    }
    return out;
}

std::string fig3_csv(const ExperimentResult &result, Scheme scheme)
{
    std::string out = "scheme,antennas,probability,value_dbm\n";
    for (const auto &r : result.per_antennas)
    {
        if (wants_mmimo(scheme))
            cdf_rows(out, "mmimo-u", r.antennas, r.bs_sensed_enhanced_w);
        if (wants_lbt(scheme))
            cdf_rows(out, "lbt", r.antennas, r.bs_sensed_conventional_w);
    }
    return out;
}

std::string fig4_csv(const ExperimentResult &result, Scheme scheme)
{
    std::string out = "scheme,antennas,cellular_mbps,wifi_mbps,aggregate_mbps\n";
    auto row = [&](const char *name, int n, double cell, double wifi) {
        out += std::string(name) + "," + std::to_string(n) + "," + num(cell / 1e6) + "," + num(wifi / 1e6) + "," +
               num((cell + wifi) / 1e6) + "\n";
    };
    for (const auto &r : result.per_antennas)
    {
        if (wants_mmimo(scheme))
            row("mmimo-u", r.antennas, r.mmimo_cellular_bps, r.mmimo_wifi_bps);
        if (wants_lbt(scheme))
        {
            row("lbt-case1", r.antennas, r.lbt_case1_cellular_bps, r.lbt_case1_wifi_bps);
            row("lbt-case2", r.antennas, r.lbt_case2_cellular_bps, r.lbt_case2_wifi_bps);
        }
    }
    return out;
}

std::string summary_json(const ExperimentResult &result, const SimConfig &cfg)
{
    const double threshold = dbm_to_watts(cfg.radio.lbt_threshold_dbm);
    ordered_json j;
    j["version"] = result.manifest.version;
    j["config_hash"] = result.manifest.config_hash;
    j["scheme"] = to_string(cfg.scheme);
    j["drops"] = cfg.drops;
    j["lbt_threshold_dbm"] = cfg.radio.lbt_threshold_dbm;

    ordered_json sweep = ordered_json::array();
    double best_lbt_aggregate = 0.0;
    for (const auto &r : result.per_antennas)
    {
        ordered_json e;
        e["antennas"] = r.antennas;
        if (wants_mmimo(cfg.scheme))
        {
            e["wifi_interference"]["mmimo_u"] = power_stats(r.wifi_interference_mmimo_w, threshold);
            e["bs_sensed_power"]["enhanced"] = power_stats(r.bs_sensed_enhanced_w, threshold);
            e["rates"]["mmimo_u"] = rate_entry(r.mmimo_cellular_bps, r.mmimo_wifi_bps);
            e["ue_sinr_median_db"]["mmimo_u"] = median_or_nan(r.ue_sinr_mmimo_db);
            e["enhanced_lbt_grant_fraction"] = r.loaded ? static_cast<double>(r.enhanced_granted) / r.loaded : 0.0;
            e["regularized_precoders"]["mmimo_u"] = r.regularized_mmimo;
        }
        if (wants_lbt(cfg.scheme))
        {
            e["wifi_interference"]["lbt"] = power_stats(r.wifi_interference_lbt_w, threshold);
            e["bs_sensed_power"]["conventional"] = power_stats(r.bs_sensed_conventional_w, threshold);
            e["rates"]["lbt_case1"] = rate_entry(r.lbt_case1_cellular_bps, r.lbt_case1_wifi_bps);
            e["rates"]["lbt_case2"] = rate_entry(r.lbt_case2_cellular_bps, r.lbt_case2_wifi_bps);
            e["ue_sinr_median_db"]["lbt"] = median_or_nan(r.ue_sinr_lbt_db);
            e["conventional_lbt_grant_fraction"] =
                r.loaded ? static_cast<double>(r.conventional_granted) / r.loaded : 0.0;
            e["regularized_precoders"]["lbt"] = r.regularized_lbt;
            best_lbt_aggregate =
                std::max({best_lbt_aggregate, (r.lbt_case1_cellular_bps + r.lbt_case1_wifi_bps) / 1e6,
                          (r.lbt_case2_cellular_bps + r.lbt_case2_wifi_bps) / 1e6});
        }
        int resampled = 0;
        for (int x : r.resamples)
            resampled += x > 0 ? 1 : 0;
        e["resampled_drops"] = resampled;
        e["loaded_sectors"] = r.loaded;
        sweep.push_back(std::move(e));
    }
    j["per_antennas"] = std::move(sweep);
    if (wants_lbt(cfg.scheme))
        j["best_lbt_aggregate_mbps"] = best_lbt_aggregate;

    ordered_json ref;
    ref["wifi_defer_fraction_lbt"] = 0.21;
    ref["wifi_interference_median_dbm_lbt"] = -72.0;
    ref["wifi_interference_fraction_below_threshold_mmimo_u"] = 1.0;
    ref["bs_sensed_fraction_below_threshold_enhanced_n32"] = 1.0;
    ref["bs_sensed_fraction_above_threshold_conventional"] = 0.96;
    ref["mmimo_u_wifi_mbps"] = 130.0;
    ref["mmimo_u_cellular_mbps"] = {{"32", 275.0}, {"64", 400.0}, {"112", 500.0}};
    ref["lbt_best_aggregate_mbps"] = 314.0;
    ref["mmimo_u_aggregate_mbps_n128"] = 660.0;
    j["published_reference"] = std::move(ref);

    for (const auto &r : result.per_antennas)
        if (r.antennas == 128 && wants_mmimo(cfg.scheme))
        {
            j["mmimo_u_aggregate_mbps_n128"] = (r.mmimo_cellular_bps + r.mmimo_wifi_bps) / 1e6;
            if (wants_lbt(cfg.scheme) && best_lbt_aggregate > 0.0)
                j["aggregate_gain_over_best_lbt_n128"] =
                    (r.mmimo_cellular_bps + r.mmimo_wifi_bps) / 1e6 / best_lbt_aggregate;
        }
    return j.dump(2) + "\n";
}

std::string manifest_json(const ExperimentResult &result)
{
    const auto &m = result.manifest;
    ordered_json j;
    j["version"] = m.version;
    j["config_hash"] = m.config_hash;
    j["master_seed"] = m.master_seed;
    j["workers"] = m.workers;
    j["wall_clock_s"] = m.wall_clock_s;
    j["flags"] = m.flags;
    ordered_json seeds = ordered_json::object();
    for (const auto &r : result.per_antennas)
    {
        ordered_json list = ordered_json::array();
        for (std::size_t d = 0; d < r.drop_seeds.size(); ++d)
            list.push_back({{"drop", d}, {"seed", r.drop_seeds[d]}, {"resamples", r.resamples[d]}});
        seeds[std::to_string(r.antennas)] = std::move(list);
    }
    j["drop_seeds"] = std::move(seeds);
    j["config"] = m.config_text;
    return j.dump(2) + "\n";
}

std::string layout_json(const topology::NodeSet &nodes, const topology::SiteGrid &grid)
{
    ordered_json j;
    j["inter_site_distance_m"] = grid.inter_site_distance;
    ordered_json bs = ordered_json::array();
    for (std::size_t i = 0; i < nodes.bs_list.size(); ++i)
    {
        const auto &b = nodes.bs_list[i];
        bs.push_back({{"sector", i}, {"site", b.site}, {"x", b.position.x()}, {"y", b.position.y()},
                      {"azimuth_deg", rad_to_deg(b.azimuth_rad)}});
    }
    ordered_json ues = ordered_json::array();
    for (const auto &u : nodes.ue_list)
        ues.push_back({{"x", u.position.x()}, {"y", u.position.y()}, {"sector", u.sector}});
    ordered_json spots = ordered_json::array();
    for (const auto &h : nodes.hotspot_list)
        spots.push_back({{"x", h.center.x()}, {"y", h.center.y()}, {"radius_m", h.radius}, {"sector", h.sector}});
    ordered_json wifi = ordered_json::array();
    for (const auto &w : nodes.wifi_list)
        wifi.push_back({{"x", w.position.x()},
                        {"y", w.position.y()},
                        {"role", w.role == topology::WifiRole::AccessPoint ? "ap" : "sta"},
                        {"hotspot", w.hotspot},
                        {"serving_ap", w.serving_ap}});
    j["base_stations"] = std::move(bs);
    j["ues"] = std::move(ues);
    j["hotspots"] = std::move(spots);
    j["wifi_devices"] = std::move(wifi);
    return j.dump(1) + "\n";
}

void emit_results(const ExperimentResult &result, const SimConfig &cfg, const fs::path &dir)
{
    check_writable(dir);
    write_atomic(dir / "fig2_wifi_interference_cdf.csv", fig2_csv(result, cfg.scheme));
    write_atomic(dir / "fig3_bs_interference_cdf.csv", fig3_csv(result, cfg.scheme));
    write_atomic(dir / "fig4_rates.csv", fig4_csv(result, cfg.scheme));
    write_atomic(dir / "summary.json", summary_json(result, cfg));
    write_atomic(dir / "manifest.json", manifest_json(result));
}

} // namespace mmimou::harness
