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

#include "mmimou/channel.hpp"
#include "mmimou/random.hpp"

#include <boost/random/taus88.hpp>

#include <atomic>
#include <iostream>

namespace mmimou::channel
{

namespace
{

double clamp_distance(double d)
{
    static std::atomic<bool> warned{false};
    if (d < kMinModelDistance)
    {
        if (!warned.exchange(true))
            std::cerr << "warning: link distance " << d << " m below path-loss model validity, clamped to "
                      << kMinModelDistance << " m\n";
        return kMinModelDistance;
    }
    return d;
}

double wrap_angle(double a)
{
    return std::remainder(a, 2.0 * std::numbers::pi);
}

} // namespace

double los_probability_uma(double d)
{
    if (d <= 0.0)
        return 1.0;
    return std::min(18.0 / d, 1.0) * (1.0 - std::exp(-d / 63.0)) + std::exp(-d / 63.0);
}

double los_probability_d2d(double d)
{
    if (d <= 0.0)
        return 1.0;
    return std::min(18.0 / d, 1.0) * (1.0 - std::exp(-d / 36.0)) + std::exp(-d / 36.0);
}

double pathloss_uma(double distance_m, double carrier_ghz, Propagation state, const ModelConstants &k)
{
    const double d = clamp_distance(distance_m);
    const double fc = carrier_ghz;
    if (state == Propagation::LineOfSight)
    {
        const double h_bs = k.bs_height_m - 1.0;
        const double h_ut = k.device_height_m - 1.0;
        const double breakpoint = 4.0 * h_bs * h_ut * fc * 1e9 / 299792458.0;
        if (d < breakpoint)
            return 22.0 * std::log10(d) + 28.0 + 20.0 * std::log10(fc);
        return 40.0 * std::log10(d) + 7.8 - 18.0 * std::log10(h_bs) - 18.0 * std::log10(h_ut) + 2.0 * std::log10(fc);
    }
    const double w = k.street_width_m;
    const double h = k.building_height_m;
    const double h_bs = k.bs_height_m;
    const double h_ut = k.device_height_m;
    const double ut_term = 3.2 * std::pow(std::log10(11.75 * h_ut), 2) - 4.97;
    return 161.04 - 7.1 * std::log10(w) + 7.5 * std::log10(h) -
           (24.37 - 3.7 * (h / h_bs) * (h / h_bs)) * std::log10(h_bs) +
           (43.42 - 3.1 * std::log10(h_bs)) * (std::log10(d) - 3.0) + 20.0 * std::log10(fc) - ut_term;
}

double pathloss_d2d(double distance_m, double carrier_ghz, Propagation state, const ModelConstants &k)
{
    const double d = clamp_distance(distance_m);
    const double fc = carrier_ghz;
    if (state == Propagation::LineOfSight)
    {
        const double h_eff = k.device_height_m - 1.0;
        const double breakpoint = 4.0 * h_eff * h_eff * fc * 1e9 / 299792458.0;
        if (d < breakpoint)
            return 22.7 * std::log10(d) + 27.0 + 20.0 * std::log10(fc);
        return 40.0 * std::log10(d) + 7.56 - 2.0 * 17.3 * std::log10(h_eff) + 2.7 * std::log10(fc);
    }
    return 36.7 * std::log10(d) + 22.7 + 26.0 * std::log10(fc);
}

double element_pattern(double azimuth_rad, double elevation_rad, const ModelConstants &k)
{
    const double az = rad_to_deg(wrap_angle(azimuth_rad));
    const double el = rad_to_deg(elevation_rad);
    const double horizontal = -std::min(12.0 * std::pow(az / k.azimuth_beamwidth_deg, 2), k.front_to_back_db);
    const double vertical =
        -std::min(12.0 * std::pow((el - k.downtilt_deg) / k.elevation_beamwidth_deg, 2), k.elevation_sidelobe_db);
    return k.element_gain_dbi - std::min(-(horizontal + vertical), k.front_to_back_db);
}

double ricean_k_factor(double distance_m, const ModelConstants &k)
{
    return db_to_linear(k.k_factor_intercept_db - k.k_factor_slope_db_per_m * std::max(distance_m, 0.0));
}

CVectorXd steering_vector(int antennas, const Angles &angles, double spacing_wavelengths)
{
    CVectorXd a(antennas);
    const double step =
        2.0 * std::numbers::pi * spacing_wavelengths * std::sin(angles.azimuth_rad) * std::cos(angles.elevation_rad);
    for (int n = 0; n < antennas; ++n)
        a(n) = std::polar(1.0, step * n);
    return a;
}

Eigen::MatrixXd jakes_correlation(int antennas, double spacing_wavelengths)
{
    Eigen::MatrixXd r(antennas, antennas);
    for (int m = 0; m < antennas; ++m)
        for (int n = 0; n < antennas; ++n)
            r(m, n) = std::cyl_bessel_j(0.0, 2.0 * std::numbers::pi * spacing_wavelengths * std::abs(m - n));
    return r;
}

FadingSynthesizer::FadingSynthesizer(int antennas, double spacing_wavelengths)
    : antennas_(antennas), correlation_(jakes_correlation(antennas, spacing_wavelengths))
{
    if (antennas < 1)
        throw ConfigError("antenna count must be >= 1");
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(correlation_);
    const Eigen::VectorXd roots = eig.eigenvalues().cwiseMax(0.0).cwiseSqrt();
    root_ = eig.eigenvectors() * roots.asDiagonal() * eig.eigenvectors().transpose();
}

CMatrixXd FadingSynthesizer::draw(Eigen::Index count, Rng &rng) const
{
    const CMatrixXd white = complex_gaussian(antennas_, count, rng);
    return root_.cast<std::complex<double>>() * white;
}

CVectorXd draw_channel_vector(const LinkBudget &link, const Angles &angles, double k_factor,
                              const FadingSynthesizer &fading, Rng &rng, double los_phase_rad)
{
    const CVectorXd diffuse = fading.draw(1, rng).col(0);
    const double amplitude = std::sqrt(link.mean_power());
    if (!std::isfinite(k_factor))
        return amplitude * std::polar(1.0, los_phase_rad) * steering_vector(fading.antennas(), angles);
    const CVectorXd los = steering_vector(fading.antennas(), angles);
    return amplitude * (std::sqrt(k_factor / (k_factor + 1.0)) * std::polar(1.0, los_phase_rad) * los +
                        std::sqrt(1.0 / (k_factor + 1.0)) * diffuse);
}

CVectorXd corrupt_csi(const CVectorXd &h, double tau2, Rng &rng, double entry_variance)
{
    if (!(tau2 >= 0.0 && tau2 <= 1.0))
        throw ConfigError("CSI error variance tau2 must lie in [0, 1], got " + std::to_string(tau2));
    if (tau2 == 0.0)
        return h;
    const CVectorXd e = complex_gaussian(h.size(), 1, rng, entry_variance).col(0);
    return std::sqrt(1.0 - tau2) * h + std::sqrt(tau2) * e;
}

LinkGeometry bs_geometry(const topology::BaseStation &bs, const Position &point, const topology::SiteGrid &grid,
                         const ModelConstants &k)
{
    const Eigen::Vector2d disp = topology::wrap_displacement(bs.position, point, grid);
    LinkGeometry g;
    g.distance_2d_m = disp.norm();
    const double dh = k.bs_height_m - k.device_height_m;
    g.distance_3d_m = std::hypot(g.distance_2d_m, dh);
    g.angles.azimuth_rad = wrap_angle(std::atan2(disp.y(), disp.x()) - bs.azimuth_rad);
    g.angles.elevation_rad = std::atan2(dh, g.distance_2d_m);
    return g;
}

namespace
{

template <typename Engine>
bool bernoulli(Engine &rng, double p)
{
    return std::uniform_real_distribution<double>(0.0, 1.0)(rng) < p;
}

template <typename Engine>
double normal_db(Engine &rng, double sigma)
{
    return boost::random::normal_distribution<double>(0.0, sigma)(rng);
}

struct ScheduledLink
{
    std::size_t target;
    LinkBudget budget;
    Angles angles;
    double k_factor;
    double los_phase;
};


// Fills columns for the retained links in one batched product.
CMatrixXd realise(const std::vector<ScheduledLink> &links, const FadingSynthesizer &fading, Rng &rng,
                  const ModelConstants &k)
{
    const int n = fading.antennas();
    CMatrixXd out = fading.draw(static_cast<Eigen::Index>(links.size()), rng);
    for (std::size_t c = 0; c < links.size(); ++c)
    {
        const auto &l = links[c];
        const double amplitude = std::sqrt(l.budget.mean_power());
        const double kf = l.k_factor;
        auto col = out.col(static_cast<Eigen::Index>(c));
        col *= amplitude * std::sqrt(1.0 / (kf + 1.0));
        if (kf > 0.0)
            col += (amplitude * std::sqrt(kf / (kf + 1.0))) * std::polar(1.0, l.los_phase) *
                   steering_vector(n, l.angles, k.element_spacing_wavelengths);
    }
    return out;
}

} // namespace

namespace
{

// Stream id for a UE's per-sector large-scale draws.
constexpr std::uint64_t kUeLinkStream = 3;

template <typename Engine>
LinkBudget bs_budget(const LinkGeometry &g, const ModelConstants &k, Engine &rng)
{
    LinkBudget b;
    b.distance_m = g.distance_3d_m;
    b.state = bernoulli(rng, los_probability_uma(g.distance_2d_m)) ? Propagation::LineOfSight
                                                                    : Propagation::NonLineOfSight;
    b.path_loss_db = pathloss_uma(g.distance_3d_m, k.carrier_ghz, b.state, k);
    b.shadowing_db =
        normal_db(rng, b.state == Propagation::LineOfSight ? k.uma_shadowing_los_db : k.uma_shadowing_nlos_db);
    b.antenna_gain_db = element_pattern(g.angles.azimuth_rad, g.angles.elevation_rad, k);
    return b;
}

} // namespace

LinkBudget ue_budget(const LinkGeometry &g, const ModelConstants &k, std::uint64_t link_seed, std::size_t sector)
{
    // Small-state engine: this runs once per (UE candidate, sector) pair.
    boost::random::taus88 rng(static_cast<std::uint32_t>(derive_seed(link_seed, kUeLinkStream, sector)));
    return bs_budget(g, k, rng);
}

topology::MeanGainModel mean_gain_model(const topology::SiteGrid &grid, const ModelConstants &k)
{
    return [&grid, k](std::size_t sector, const Position &point, std::uint64_t link_seed) {
        topology::BaseStation bs{grid.sector_position(sector), grid.azimuth_of(sector), 1, grid.site_of(sector)};
        return ue_budget(bs_geometry(bs, point, grid, k), k, link_seed, sector).coupling_db();
    };
}

ChannelSet draw_channels(const topology::NodeSet &nodes, const topology::SiteGrid &grid, const ModelConstants &k,
                         const FadingSynthesizer &fading, double csi_tau2, Rng &rng, double csi_error_variance)
{
    if (!(csi_tau2 >= 0.0 && csi_tau2 <= 1.0))
        throw ConfigError("CSI error variance tau2 must lie in [0, 1]");
    const auto sectors = static_cast<Eigen::Index>(nodes.bs_list.size());
    const auto devices = static_cast<Eigen::Index>(nodes.wifi_list.size());
    const auto ues = static_cast<Eigen::Index>(nodes.ue_list.size());
    const double wavenumber = 2.0 * std::numbers::pi / k.wavelength_m();
    const double floor = db_to_linear(k.min_coupling_db);

    ChannelSet set;
    set.antennas = fading.antennas();
    set.bs.resize(nodes.bs_list.size());
    set.wifi_coupling.resize(sectors, devices);
    set.ue_coupling.resize(sectors, ues);
    set.wifi_column = Eigen::MatrixXi::Constant(sectors, devices, -1);
    set.ue_column = Eigen::MatrixXi::Constant(sectors, ues, -1);

    // Large-scale UE budgets first: a UE is served in this band only by the sector it was
    // dropped in, and only if that sector also gives it the strongest mean power.
    std::vector<LinkBudget> ue_budgets;
    std::vector<LinkGeometry> ue_geometry;
    ue_budgets.reserve(static_cast<std::size_t>(sectors * ues));
    ue_geometry.reserve(static_cast<std::size_t>(sectors * ues));
    for (Eigen::Index i = 0; i < sectors; ++i)
        for (Eigen::Index u = 0; u < ues; ++u)
        {
            ue_geometry.push_back(bs_geometry(nodes.bs_list[i], nodes.ue_list[u].position, grid, k));
            ue_budgets.push_back(
                ue_budget(ue_geometry.back(), k, nodes.ue_list[u].link_seed, static_cast<std::size_t>(i)));
            set.ue_coupling(i, u) = ue_budgets.back().mean_power();
        }
    set.ue_served.assign(static_cast<std::size_t>(ues), -1);
    std::vector<Eigen::Index> &serving = set.ue_served;
    for (Eigen::Index u = 0; u < ues; ++u)
    {
        Eigen::Index best = 0;
        set.ue_coupling.col(u).maxCoeff(&best);
        if (static_cast<Eigen::Index>(nodes.ue_list[u].sector) == best)
            serving[static_cast<std::size_t>(u)] = best;
    }

    for (Eigen::Index i = 0; i < sectors; ++i)
    {
        const auto &bs = nodes.bs_list[i];
        auto &links = set.bs[i];

        std::vector<ScheduledLink> wifi_links;
        for (Eigen::Index l = 0; l < devices; ++l)
        {
            const LinkGeometry g = bs_geometry(bs, nodes.wifi_list[l].position, grid, k);
            const LinkBudget b = bs_budget(g, k, rng);
            const double phase = std::fmod(wavenumber * g.distance_3d_m, 2.0 * std::numbers::pi);
            set.wifi_coupling(i, l) = b.mean_power();
            if (b.mean_power() < floor)
                continue;
            const double kf = b.state == Propagation::LineOfSight ? ricean_k_factor(g.distance_3d_m, k) : 0.0;
            set.wifi_column(i, l) = static_cast<int>(wifi_links.size());
            links.wifi_ids.push_back(static_cast<std::size_t>(l));
            wifi_links.push_back({static_cast<std::size_t>(l), b, g.angles, kf, -phase});
        }
        links.wifi = realise(wifi_links, fading, rng, k);

        std::vector<ScheduledLink> ue_links;
        for (Eigen::Index u = 0; u < ues; ++u)
        {
            const LinkBudget &b = ue_budgets[static_cast<std::size_t>(i * ues + u)];
            const LinkGeometry &g = ue_geometry[static_cast<std::size_t>(i * ues + u)];
            const double phase = std::fmod(wavenumber * g.distance_3d_m, 2.0 * std::numbers::pi);
            const bool own = serving[static_cast<std::size_t>(u)] == i;
            if (own)
                links.own_ues.push_back(static_cast<std::size_t>(u));
            if (!own && b.mean_power() < floor)
                continue;
            const double kf = b.state == Propagation::LineOfSight ? ricean_k_factor(g.distance_3d_m, k) : 0.0;
            set.ue_column(i, u) = static_cast<int>(ue_links.size());
            links.ue_ids.push_back(static_cast<std::size_t>(u));
            ue_links.push_back({static_cast<std::size_t>(u), b, g.angles, kf, -phase});
        }
        links.ue = realise(ue_links, fading, rng, k);

        // A zero csi_error_variance makes the error relative to each link's mean element power.
        links.own_estimates.resize(set.antennas, static_cast<Eigen::Index>(links.own_ues.size()));
        for (std::size_t j = 0; j < links.own_ues.size(); ++j)
        {
            const auto u = static_cast<Eigen::Index>(links.own_ues[j]);
            links.own_estimates.col(static_cast<Eigen::Index>(j)) =
                corrupt_csi(links.ue.col(set.ue_column(i, u)), csi_tau2, rng,
                            csi_error_variance > 0.0 ? csi_error_variance : set.ue_coupling(i, u));
        }
    }

    // Device-to-UE scalars.
    set.wifi_to_ue.resize(devices, ues);
    set.wifi_to_ue_coupling.resize(devices, ues);
    for (Eigen::Index l = 0; l < devices; ++l)
        for (Eigen::Index u = 0; u < ues; ++u)
        {
            const double d2 = topology::wrap_distance(nodes.wifi_list[l].position, nodes.ue_list[u].position, grid);
            const bool los = bernoulli(rng, los_probability_d2d(d2));
            const double pl =
                pathloss_d2d(d2, k.carrier_ghz, los ? Propagation::LineOfSight : Propagation::NonLineOfSight, k);
            const double power = db_to_linear(-pl + normal_db(rng, k.d2d_shadowing_db));
            const double kf = los ? ricean_k_factor(d2, k) : 0.0;
            const std::complex<double> los_part = std::polar(1.0, -std::fmod(wavenumber * d2, 2.0 * std::numbers::pi));
            const std::complex<double> diffuse = complex_gaussian_scalar(rng);
            set.wifi_to_ue(l, u) =
                std::sqrt(power) * (std::sqrt(kf / (kf + 1.0)) * los_part + std::sqrt(1.0 / (kf + 1.0)) * diffuse);
            set.wifi_to_ue_coupling(l, u) = power;
        }
    return set;
}

} // namespace mmimou::channel
