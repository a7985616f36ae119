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

#ifndef MMIMOU_METRICS_HPP
#define MMIMOU_METRICS_HPP

#include "mmimou/common.hpp"
#include "mmimou/lbt.hpp"
#include "mmimou/spatial.hpp"

#include <span>
#include <vector>

namespace mmimou::metrics
{

using Eigen::Index;

// A transmitting BS as seen by one receiver: column `column` of `channels` holds h
// (or g) from this BS. A weak link that was never realised (column < 0) contributes
// its mean, P_b * mean_coupling.
struct InterferingBs
{
    const CMatrixXd *channels = nullptr;
    Index column = -1;
    const CMatrixXd *precoders = nullptr; // W of this BS, sum of column energies = 1
    double activity = 1.0;                // fraction of time the BS transmits
    double mean_coupling = 0.0;           // per-element mean power gain
};

struct InterferingWifi
{
    std::complex<double> coefficient; // q
    double tx_power_w = 0.0;
    double activity = 1.0;
};

struct SinrTerms
{
    double signal_w = 0.0;
    double intra_cell_w = 0.0;
    double inter_cell_w = 0.0;
    double wifi_w = 0.0;
    double noise_w = 0.0;

    double interference_w() const { return intra_cell_w + inter_cell_w + wifi_w; }
    double total_w() const { return signal_w + interference_w() + noise_w; }
    double sinr() const;
};

// Upper clamp for a vanishing denominator.
inline constexpr double kMaxSinr = 1e9;

// SINR of user `user` served through column `user` of serving_precoders.
SinrTerms ue_sinr(const Eigen::Ref<const CVectorXd> &serving_channel, const CMatrixXd &serving_precoders, Index user,
                  std::span<const InterferingBs> other_bs, std::span<const InterferingWifi> wifi, double bs_power_w,
                  double noise_w);

// P_b sum_i activity_i sum_k |g_i^H w_ik|^2 (expectation over unit-power symbols).
double wifi_interference(std::span<const InterferingBs> bs, double bs_power_w);

// Worst-sample sensed power; conventional ignores the basis.
double bs_sensed_power(const spatial::SilenceSnapshot<double> &snap, const CMatrixXd &basis, Index nulls,
                       lbt::Mode mode);

// B log2(1 + SINR), zero below the receiver sensitivity.
double cell_rate(double sinr, double bandwidth_hz, double rx_power_w, double sensitivity_w);

// Sum of per-cluster airtime shares times the cluster rate.
double wifi_rate(std::span<const double> cluster_airtime, double per_cluster_rate_bps);

// BS airtime when it time-shares the medium with n contenders: 1 / (1 + n).
double lbt_airtime_split(int contenders);

struct CdfSeries
{
    std::vector<double> values;        // ascending
    std::vector<double> probabilities; // i / n

    std::size_t size() const { return values.size(); }
    double quantile(double p) const;
    double median() const { return quantile(0.5); }
    double fraction_below(double x) const;
};

CdfSeries build_cdf(std::span<const double> samples);

} // namespace mmimou::metrics

#endif
