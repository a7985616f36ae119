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

#ifndef MMIMOU_CHANNEL_HPP
#define MMIMOU_CHANNEL_HPP

#include "mmimou/common.hpp"
#include "mmimou/topology.hpp"

#include <vector>

namespace mmimou::channel
{

enum class Propagation
{
    LineOfSight,
    NonLineOfSight
};

// Every propagation constant lives here so alternate model readings can be swapped
// in one place. Defaults: 3GPP UMa for BS links, WINNER+ B1 at device heights for
// device-to-device links, 3GPP macro element pattern.
struct ModelConstants
{
    double carrier_ghz = 5.15;
    double bs_height_m = 25.0;
    double device_height_m = 1.5;

    // UMa NLOS street geometry
    double building_height_m = 20.0;
    double street_width_m = 20.0;

    double uma_shadowing_los_db = 4.0;
    double uma_shadowing_nlos_db = 6.0;
    double d2d_shadowing_db = 7.0;

    double element_gain_dbi = 6.0;
    double downtilt_deg = 12.0;
    double azimuth_beamwidth_deg = 70.0;
    double elevation_beamwidth_deg = 10.0;
    double front_to_back_db = 25.0;
    double elevation_sidelobe_db = 20.0;

    // K[dB] = intercept - slope * d, applied to line-of-sight links
    double k_factor_intercept_db = 13.0;
    double k_factor_slope_db_per_m = 0.03;

    double element_spacing_wavelengths = 0.5;

    // Links weaker than this carry no fading vector; their interference enters by its mean.
    double min_coupling_db = -150.0;

    double wavelength_m() const { return 299792458.0 / (carrier_ghz * 1e9); }

    bool operator==(const ModelConstants &) const = default;
};

inline constexpr double kMinModelDistance = 10.0;

double los_probability_uma(double distance_2d_m);
double los_probability_d2d(double distance_2d_m);

// Distances below 10 m are clamped (one warning per process).
double pathloss_uma(double distance_m, double carrier_ghz, Propagation state = Propagation::NonLineOfSight,
                    const ModelConstants &k = {});
double pathloss_d2d(double distance_m, double carrier_ghz, Propagation state = Propagation::NonLineOfSight,
                    const ModelConstants &k = {});

// Element gain in dBi. azimuth is relative to boresight, elevation is the depression
// angle below the horizon (positive towards the ground).
double element_pattern(double azimuth_rad, double elevation_rad, const ModelConstants &k = {});

double ricean_k_factor(double distance_m, const ModelConstants &k = {});

struct LinkBudget
{
    double path_loss_db = 0.0;
    double shadowing_db = 0.0;
    double antenna_gain_db = 0.0;
    double distance_m = 0.0;
    Propagation state = Propagation::NonLineOfSight;

    double coupling_db() const { return antenna_gain_db - path_loss_db + shadowing_db; }
    // Mean power per array element (linear, relative to the transmit power).
    double mean_power() const { return db_to_linear(coupling_db()); }
};

struct Angles
{
    double azimuth_rad = 0.0;   // sector-local
    double elevation_rad = 0.0; // depression
};

// Uniform linear array along the sector's horizontal axis; a(0, .) is all ones.
CVectorXd steering_vector(int antennas, const Angles &angles, double spacing_wavelengths = 0.5);

// Isotropic-scattering (Jakes) spatial correlation, R[m][n] = J0(2 pi |m-n| d / lambda).
Eigen::MatrixXd jakes_correlation(int antennas, double spacing_wavelengths = 0.5);

// Draws zero-mean complex Gaussian vectors with the Jakes spatial correlation.
class FadingSynthesizer
{
  public:
    FadingSynthesizer(int antennas, double spacing_wavelengths);

    int antennas() const { return antennas_; }
    const Eigen::MatrixXd &correlation() const { return correlation_; }

    // count columns, each ~ CN(0, R)
    CMatrixXd draw(Eigen::Index count, Rng &rng) const;

  private:
    int antennas_;
    Eigen::MatrixXd correlation_;
    Eigen::MatrixXd root_; // R^{1/2}, symmetric
};

// sqrt(P) (sqrt(K/(K+1)) e^{j psi} a + sqrt(1/(K+1)) w), w ~ CN(0, R).
CVectorXd draw_channel_vector(const LinkBudget &link, const Angles &angles, double k_factor,
                              const FadingSynthesizer &fading, Rng &rng, double los_phase_rad = 0.0);

// sqrt(1 - tau2) h + tau e, e ~ CN(0, entry_variance I). tau2 outside [0, 1] is a ConfigError.
CVectorXd corrupt_csi(const CVectorXd &h, double tau2, Rng &rng, double entry_variance = 1.0);

// ---- per-drop channel realisation ----

struct BsLinks
{
    CMatrixXd wifi;                   // N x L, g for every retained device
    std::vector<std::size_t> wifi_ids;
    CMatrixXd ue;                     // N x U, h for every retained UE
    std::vector<std::size_t> ue_ids;
    std::vector<std::size_t> own_ues; // UEs associated with this sector
    CMatrixXd own_estimates;          // N x |own_ues|, noisy CSI
};

struct ChannelSet
{
    int antennas = 0;
    std::vector<BsLinks> bs;          // indexed by sector
    Eigen::MatrixXd wifi_coupling;    // sector x device, mean power per element (linear)
    Eigen::MatrixXd ue_coupling;      // sector x UE
    Eigen::MatrixXi wifi_column;      // sector x device -> column in bs[i].wifi, -1 if not retained
    Eigen::MatrixXi ue_column;        // sector x UE -> column in bs[i].ue, -1 if not retained
    std::vector<Eigen::Index> ue_served; // serving sector per UE, -1 if its strongest sector is another one
    CMatrixXd wifi_to_ue;             // device x UE, q
    Eigen::MatrixXd wifi_to_ue_coupling;
};

// Mean received power (dB) including the link's LOS state and shadowing, no fast fading:
// the association metric.
topology::MeanGainModel mean_gain_model(const topology::SiteGrid &grid, const ModelConstants &k);

// BS-to-point geometry through the wrap-around.
struct LinkGeometry
{
    double distance_2d_m = 0.0;
    double distance_3d_m = 0.0;
    Angles angles;
};
LinkGeometry bs_geometry(const topology::BaseStation &bs, const Position &point, const topology::SiteGrid &grid,
                         const ModelConstants &k);

// Large-scale budget of a UE link, reproducible from the UE's link seed.
LinkBudget ue_budget(const LinkGeometry &g, const ModelConstants &k, std::uint64_t link_seed, std::size_t sector);

// CSI error entries have variance csi_error_variance (channel-gain units), or the link's mean
// element power when it is zero.
ChannelSet draw_channels(const topology::NodeSet &nodes, const topology::SiteGrid &grid, const ModelConstants &k,
                         const FadingSynthesizer &fading, double csi_tau2, Rng &rng, double csi_error_variance = 0.0);

} // namespace mmimou::channel

#endif
