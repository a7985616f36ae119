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

#include "mmimou/simulation.hpp"

#include "mmimou/lbt.hpp"
#include "mmimou/metrics.hpp"
#include "mmimou/random.hpp"

#include <map>

namespace mmimou::harness
{

using Eigen::Index;
using topology::WifiRole;

DropContext::DropContext(const SimConfig &c, int n)
    : cfg(c), antennas(n), grid(topology::build_grid(c.inter_site_distance, c.rings)),
      fading(n, c.channel.element_spacing_wavelengths)
{
}

namespace
{

// Stream ids used with derive_seed for resampled layouts.
constexpr std::uint64_t kResampleStream = 0xfffe;

struct BsState
{
    bool loaded = false;
    std::vector<std::size_t> scheduled; // UE ids, aligned with precoder columns
    CMatrixXd mmimo_weights;
    CMatrixXd zf_weights;
    Index nulls = 0;
    bool mmimo_idle = false; // threshold criterion left no room for users
    lbt::LbtDecision conventional;
    lbt::LbtDecision enhanced;
};

double device_power(const topology::WifiDevice &dev, const RadioParams &radio)
{
    return dbm_to_watts(dev.role == WifiRole::AccessPoint ? radio.ap_power_dbm : radio.sta_power_dbm);
}

// Interference at every device from the BSs with nonzero activity.
std::vector<double> device_interference(const topology::NodeSet &nodes, const channel::ChannelSet &ch,
                                        const std::vector<BsState> &bs, const std::vector<double> &activity,
                                        bool mmimo, double bs_power_w)
{
    std::vector<double> out(nodes.wifi_list.size(), 0.0);
    std::vector<metrics::InterferingBs> sources;
    for (std::size_t l = 0; l < nodes.wifi_list.size(); ++l)
    {
        sources.clear();
        for (std::size_t i = 0; i < bs.size(); ++i)
        {
            if (activity[i] <= 0.0)
                continue;
            metrics::InterferingBs s;
            s.channels = &ch.bs[i].wifi;
            s.column = ch.wifi_column(static_cast<Index>(i), static_cast<Index>(l));
            s.precoders = mmimo ? &bs[i].mmimo_weights : &bs[i].zf_weights;
            s.activity = activity[i];
            s.mean_coupling = ch.wifi_coupling(static_cast<Index>(i), static_cast<Index>(l));
            sources.push_back(s);
        }
        out[l] = metrics::wifi_interference(sources, bs_power_w);
    }
    return out;
}

struct WifiActivity
{
    std::vector<double> device_activity; // fraction of time each device transmits
};

// Per-UE SINR of every scheduled user of the transmitting BSs, and the sector rate.
void cellular_rates(const topology::NodeSet &nodes, const channel::ChannelSet &ch, const std::vector<BsState> &bs,
                    const std::vector<double> &bs_activity, const std::vector<double> &interferer_activity,
                    const std::vector<std::vector<double>> &wifi_activity, bool mmimo, const SimConfig &cfg,
                    std::vector<double> &sector_rate, std::vector<double> *sinr_db)
{
    const RadioParams &radio = cfg.radio;
    const double p_b = dbm_to_watts(radio.bs_power_dbm);
    const double noise = radio.ue_noise_w();
    const double sensitivity = dbm_to_watts(radio.ue_sensitivity_dbm);
    sector_rate.assign(bs.size(), 0.0);

    std::vector<metrics::InterferingBs> others;
    std::vector<metrics::InterferingWifi> wifi;
    for (std::size_t i = 0; i < bs.size(); ++i)
    {
        if (bs_activity[i] <= 0.0)
            continue;
        const CMatrixXd &w = mmimo ? bs[i].mmimo_weights : bs[i].zf_weights;
        double rate = 0.0;
        for (std::size_t k = 0; k < bs[i].scheduled.size(); ++k)
        {
            const std::size_t ue = bs[i].scheduled[k];
            const Index u = static_cast<Index>(ue);
            others.clear();
            for (std::size_t j = 0; j < bs.size(); ++j)
            {
                if (j == i || interferer_activity[j] <= 0.0)
                    continue;
                metrics::InterferingBs s;
                s.channels = &ch.bs[j].ue;
                s.column = ch.ue_column(static_cast<Index>(j), u);
                s.precoders = mmimo ? &bs[j].mmimo_weights : &bs[j].zf_weights;
                s.activity = interferer_activity[j];
                s.mean_coupling = ch.ue_coupling(static_cast<Index>(j), u);
                others.push_back(s);
            }
            wifi.clear();
            const auto &act = wifi_activity[i];
            for (std::size_t l = 0; l < nodes.wifi_list.size(); ++l)
                if (act[l] > 0.0)
                    wifi.push_back({ch.wifi_to_ue(static_cast<Index>(l), u), device_power(nodes.wifi_list[l], radio),
                                    act[l]});
            const auto terms = metrics::ue_sinr(ch.bs[i].ue.col(ch.ue_column(static_cast<Index>(i), u)), w,
                                                static_cast<Index>(k), others, wifi, p_b, noise);
            const double sinr = terms.sinr();
            if (sinr_db)
                sinr_db->push_back(linear_to_db(std::max(sinr, 1e-30)));
            rate += metrics::cell_rate(sinr, radio.bandwidth_hz(), terms.signal_w, sensitivity);
        }
        sector_rate[i] = bs_activity[i] * rate;
    }
}

} // namespace

topology::NodeSet draw_layout(const DropContext &ctx, std::uint64_t seed, int *resamples_out)
{
    topology::DensityConfig density = ctx.cfg.density;
    density.antennas = ctx.antennas;
    const auto gain = channel::mean_gain_model(ctx.grid, ctx.cfg.channel);
    Rng rng(seed);
    for (int resamples = 0;; ++resamples)
    {
        try
        {
            auto nodes = topology::drop_nodes(ctx.grid, rng, density, gain);
            if (resamples_out)
                *resamples_out = resamples;
            return nodes;
        }
        catch (const ResampleDrop &)
        {
            if (resamples >= ctx.cfg.max_resamples)
                throw DataError("layout could not satisfy placement constraints after " +
                                std::to_string(resamples + 1) + " attempts");
            rng.seed(derive_seed(seed, kResampleStream, static_cast<std::uint64_t>(resamples)));
        }
    }
}

DropMetrics evaluate_drop(const DropContext &ctx, std::size_t drop_index, std::uint64_t seed)
{
    const SimConfig &cfg = ctx.cfg;
    const RadioParams &radio = cfg.radio;
    const Index n = ctx.antennas;
    const double gamma_lbt = dbm_to_watts(radio.lbt_threshold_dbm);
    const double p_b = dbm_to_watts(radio.bs_power_dbm);
    const bool run_mmimo = cfg.scheme != Scheme::ConventionalLbt;
    const bool run_lbt = cfg.scheme != Scheme::MassiveMimoU;

    DropMetrics out;
    out.antennas = ctx.antennas;
    out.drop_index = drop_index;
    out.seed = seed;

    const topology::NodeSet nodes = draw_layout(ctx, seed, &out.resamples);
    // Channels and everything after draw from a stream independent of the layout retries.
    Rng rng(derive_seed(seed, 1, 0));
    const double csi_variance = cfg.csi_reference == CsiErrorReference::Noise ? radio.ue_noise_w() / p_b : 0.0;
    const channel::ChannelSet ch =
        channel::draw_channels(nodes, ctx.grid, cfg.channel, ctx.fading, cfg.csi_tau2, rng, csi_variance);

    const std::size_t sectors = nodes.bs_list.size();
    std::vector<BsState> bs(sectors);
    spatial::PrecoderOptions popt{cfg.spatial.condition_cap, cfg.spatial.regularization};

    for (std::size_t i = 0; i < sectors; ++i)
    {
        const auto &links = ch.bs[i];
        auto &state = bs[i];

        std::vector<double> powers;
        powers.reserve(links.wifi_ids.size());
        std::vector<std::size_t> clusters;
        for (std::size_t l : links.wifi_ids)
        {
            powers.push_back(device_power(nodes.wifi_list[l], radio));
            clusters.push_back(nodes.wifi_list[l].hotspot);
        }
        const auto snap = spatial::simulate_silence<double>(
            links.wifi, powers, cfg.spatial.samples, radio.bs_noise_w(), rng,
            cfg.spatial.cluster_access ? std::span<const std::size_t>(clusters) : std::span<const std::size_t>());
        state.conventional = lbt::conventional_lbt(snap.samples, gamma_lbt);

        if (links.own_ues.empty())
            continue;
        state.loaded = true;
        const auto est = run_mmimo ? spatial::estimate_covariance(snap) : spatial::CovarianceEstimate<double>{};

        Index users = std::min<Index>(static_cast<Index>(links.own_ues.size()), n);
        if (cfg.spatial.max_users > 0)
            users = std::min<Index>(users, cfg.spatial.max_users);
        if (!run_mmimo || cfg.spatial.criterion == spatial::Criterion::FixedUsers)
        {
            state.nulls = spatial::allocate_dof_fixed_k(n, users, cfg.spatial.c1);
        }
        else
        {
            const auto alloc = spatial::allocate_dof_threshold<double>(
                est.eigenvalues, dbm_to_watts(cfg.spatial.gamma_dbm), cfg.spatial.c2, n);
            state.nulls = alloc.nulls;
            if (!alloc.transmission_opportunity())
                state.mmimo_idle = true;
            else
                users = std::min(users, alloc.users);
        }

        state.scheduled = spatial::schedule_ues(links.own_ues, users, rng);
        CMatrixXd estimates(n, static_cast<Index>(state.scheduled.size()));
        for (std::size_t k = 0; k < state.scheduled.size(); ++k)
        {
            const auto pos = std::find(links.own_ues.begin(), links.own_ues.end(), state.scheduled[k]) -
                             links.own_ues.begin();
            estimates.col(static_cast<Index>(k)) = links.own_estimates.col(pos);
        }

        if (run_lbt)
        {
            auto zf = spatial::baseline_zf_precoders<double>(estimates, popt);
            state.zf_weights = std::move(zf.weights);
            out.lbt.regularized += zf.regularized ? 1 : 0;
            out.lbt.loaded += 1;
            out.lbt.granted += state.conventional.granted ? 1 : 0;
            out.lbt.bs_sensed_w.push_back(state.conventional.sensed_power_w);
        }
        if (run_mmimo)
        {
            if (!state.mmimo_idle)
            {
                auto pre = spatial::compute_precoders<double>(estimates, est.eigenbasis, state.nulls, popt);
                state.mmimo_weights = std::move(pre.weights);
                out.mmimo_u.regularized += pre.regularized ? 1 : 0;
            }
            state.enhanced = lbt::enhanced_lbt(snap.samples, est.eigenbasis, state.nulls, gamma_lbt);
            out.mmimo_u.loaded += 1;
            out.mmimo_u.granted += (state.enhanced.granted && !state.mmimo_idle) ? 1 : 0;
            out.mmimo_u.bs_sensed_w.push_back(state.enhanced.sensed_power_w);
        }
    }

    // Wi-Fi-side view with every loaded BS on air.
    std::vector<double> all_on(sectors), mmimo_on(sectors);
    for (std::size_t i = 0; i < sectors; ++i)
    {
        all_on[i] = bs[i].loaded ? 1.0 : 0.0;
        mmimo_on[i] = bs[i].loaded && !bs[i].mmimo_idle ? 1.0 : 0.0;
    }
    if (run_mmimo)
        out.mmimo_u.wifi_interference_w = device_interference(nodes, ch, bs, mmimo_on, true, p_b);
    if (run_lbt)
        out.lbt.wifi_interference_w = device_interference(nodes, ch, bs, all_on, false, p_b);

    const std::size_t hotspots = nodes.hotspot_list.size();
    std::vector<std::vector<std::size_t>> members(hotspots);
    for (std::size_t l = 0; l < nodes.wifi_list.size(); ++l)
        members[nodes.wifi_list[l].hotspot].push_back(l);
    const double cluster_rate = radio.wifi_cluster_rate_mbps * 1e6;

    auto cluster_clear = [&](std::size_t h, const std::vector<double> &interference) {
        for (std::size_t l : members[h])
            if (lbt::wifi_defer(interference[l], gamma_lbt))
                return false;
        return true;
    };

    // ---- mMIMO-U: BSs on air iff enhanced LBT passed; clusters on air iff no member defers ----
    if (run_mmimo)
    {
        std::vector<double> on(sectors, 0.0);
        for (std::size_t i = 0; i < sectors; ++i)
            on[i] = bs[i].loaded && !bs[i].mmimo_idle && bs[i].enhanced.granted ? 1.0 : 0.0;
        const auto interference = device_interference(nodes, ch, bs, on, true, p_b);

        std::vector<double> cluster_share(hotspots);
        for (std::size_t h = 0; h < hotspots; ++h)
            cluster_share[h] = cluster_clear(h, interference) ? 1.0 : 0.0;

        // One device of a cluster transmits at a time.
        std::vector<double> dev_activity(nodes.wifi_list.size());
        for (std::size_t l = 0; l < nodes.wifi_list.size(); ++l)
        {
            const auto h = nodes.wifi_list[l].hotspot;
            dev_activity[l] = cluster_share[h] / static_cast<double>(members[h].size());
        }
        const std::vector<std::vector<double>> per_sector(sectors, dev_activity);
        cellular_rates(nodes, ch, bs, on, on, per_sector, true, cfg, out.mmimo_u_rates.cellular_bps,
                       &out.mmimo_u.ue_sinr_db);

        out.mmimo_u_rates.wifi_bps.assign(sectors, 0.0);
        for (std::size_t h = 0; h < hotspots; ++h)
            out.mmimo_u_rates.wifi_bps[nodes.hotspot_list[h].sector] += cluster_share[h] * cluster_rate;
    }

    // ---- conventional LBT: denied BSs time-share with their sector's Wi-Fi contenders ----
    for (int wifi_case = 1; run_lbt && wifi_case <= 2; ++wifi_case)
    {
        SectorRates &rates = wifi_case == 1 ? out.lbt_case1_rates : out.lbt_case2_rates;
        std::vector<int> contenders(sectors, 0);
        for (std::size_t h = 0; h < hotspots; ++h)
            contenders[nodes.hotspot_list[h].sector] +=
                wifi_case == 1 ? 1 : static_cast<int>(members[h].size());

        std::vector<double> bs_share(sectors, 0.0);
        for (std::size_t i = 0; i < sectors; ++i)
            if (bs[i].loaded)
                bs_share[i] = bs[i].conventional.granted ? 1.0 : metrics::lbt_airtime_split(contenders[i]);

        std::vector<double> cluster_share(hotspots);
        for (std::size_t h = 0; h < hotspots; ++h)
        {
            const auto s = nodes.hotspot_list[h].sector;
            const double own_contenders = wifi_case == 1 ? 1.0 : static_cast<double>(members[h].size());
            if (!bs[s].loaded)
                cluster_share[h] = cluster_clear(h, out.lbt.wifi_interference_w) ? 1.0 : 0.0;
            else if (bs[s].conventional.granted)
                cluster_share[h] = cluster_clear(h, out.lbt.wifi_interference_w) ? 1.0 : 0.0;
            else
                cluster_share[h] = own_contenders * metrics::lbt_airtime_split(contenders[s]);
        }

        std::vector<double> dev_activity(nodes.wifi_list.size(), 0.0);
        for (std::size_t l = 0; l < nodes.wifi_list.size(); ++l)
        {
            const auto &dev = nodes.wifi_list[l];
            const auto h = dev.hotspot;
            if (wifi_case == 1)
                dev_activity[l] = dev.role == WifiRole::AccessPoint ? cluster_share[h] : 0.0;
            else
                dev_activity[l] = cluster_share[h] / static_cast<double>(members[h].size());
        }
        // Denied BSs share one frame timing: within their common window every loaded BS is
        // on air and the clusters of denied sectors are silent.
        std::vector<double> window_wifi = dev_activity;
        for (std::size_t l = 0; l < nodes.wifi_list.size(); ++l)
        {
            const auto s = nodes.hotspot_list[nodes.wifi_list[l].hotspot].sector;
            if (bs[s].loaded && !bs[s].conventional.granted)
                window_wifi[l] = 0.0;
        }
        const std::vector<std::vector<double>> per_sector(sectors, window_wifi);

        cellular_rates(nodes, ch, bs, bs_share, all_on, per_sector, false, cfg, rates.cellular_bps,
                       wifi_case == 1 ? &out.lbt.ue_sinr_db : nullptr);
        rates.wifi_bps.assign(sectors, 0.0);
        for (std::size_t h = 0; h < hotspots; ++h)
            rates.wifi_bps[nodes.hotspot_list[h].sector] += cluster_share[h] * cluster_rate;
    }
    return out;
}

} // namespace mmimou::harness
