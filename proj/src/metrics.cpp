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

#include "mmimou/metrics.hpp"

#include <algorithm>

namespace mmimou::metrics
{

double SinrTerms::sinr() const
{
    const double den = std::max(interference_w() + noise_w, noise_w);
    if (!(den > 0.0))
        return signal_w > 0.0 ? kMaxSinr : 0.0;
    return std::min(signal_w / den, kMaxSinr);
}

namespace
{

double leaked_power(const InterferingBs &bs)
{
    if (bs.channels == nullptr || bs.column < 0)
        return bs.mean_coupling;
    return (bs.precoders->adjoint() * bs.channels->col(bs.column)).squaredNorm();
}

} // namespace

SinrTerms ue_sinr(const Eigen::Ref<const CVectorXd> &serving_channel, const CMatrixXd &serving_precoders, Index user,
                  std::span<const InterferingBs> other_bs, std::span<const InterferingWifi> wifi, double bs_power_w,
                  double noise_w)
{
    if (user < 0 || user >= serving_precoders.cols())
        throw ConfigError("user index outside the serving precoder set");
    SinrTerms t;
    t.noise_w = noise_w;
    const Eigen::VectorXd gains = (serving_precoders.adjoint() * serving_channel).cwiseAbs2();
    t.signal_w = bs_power_w * gains(user);
    t.intra_cell_w = bs_power_w * (gains.sum() - gains(user));
    for (const auto &bs : other_bs)
        t.inter_cell_w += bs_power_w * bs.activity * leaked_power(bs);
    for (const auto &dev : wifi)
        t.wifi_w += dev.tx_power_w * dev.activity * std::norm(dev.coefficient);
    return t;
}

double wifi_interference(std::span<const InterferingBs> bs, double bs_power_w)
{
    double total = 0.0;
    for (const auto &b : bs)
        total += b.activity * leaked_power(b);
    return bs_power_w * total;
}

double bs_sensed_power(const spatial::SilenceSnapshot<double> &snap, const CMatrixXd &basis, Index nulls,
                       lbt::Mode mode)
{
    if (mode == lbt::Mode::Conventional)
        return lbt::sample_energy(snap.samples).maxCoeff();
    return lbt::filtered_energy(snap.samples, basis, nulls).maxCoeff();
}

double cell_rate(double sinr, double bandwidth_hz, double rx_power_w, double sensitivity_w)
{
    if (rx_power_w < sensitivity_w || !(sinr > 0.0))
        return 0.0;
    return bandwidth_hz * std::log2(1.0 + sinr);
}

double wifi_rate(std::span<const double> cluster_airtime, double per_cluster_rate_bps)
{
    double rate = 0.0;
    for (double share : cluster_airtime)
        rate += std::clamp(share, 0.0, 1.0) * per_cluster_rate_bps;
    return rate;
}

double lbt_airtime_split(int contenders)
{
    if (contenders < 0)
        throw ConfigError("contender count cannot be negative");
    return 1.0 / (1.0 + contenders);
}

CdfSeries build_cdf(std::span<const double> samples)
{
    if (samples.empty())
        throw DataError("CDF of an empty sample set");
    CdfSeries cdf;
    cdf.values.assign(samples.begin(), samples.end());
    for (double v : cdf.values)
        if (!std::isfinite(v))
            throw DataError("non-finite CDF sample");
    std::sort(cdf.values.begin(), cdf.values.end());
    const double n = static_cast<double>(cdf.values.size());
    cdf.probabilities.resize(cdf.values.size());
    for (std::size_t i = 0; i < cdf.values.size(); ++i)
        cdf.probabilities[i] = static_cast<double>(i + 1) / n;
    return cdf;
}

double CdfSeries::quantile(double p) const
{
    if (values.empty())
        throw DataError("quantile of an empty CDF");
    const auto it = std::lower_bound(probabilities.begin(), probabilities.end(), std::clamp(p, 0.0, 1.0) - 1e-12);
    const auto idx = std::min<std::size_t>(static_cast<std::size_t>(it - probabilities.begin()), values.size() - 1);
    return values[idx];
}

double CdfSeries::fraction_below(double x) const
{
    const auto it = std::lower_bound(values.begin(), values.end(), x);
    return values.empty() ? 0.0 : static_cast<double>(it - values.begin()) / static_cast<double>(values.size());
}

} // namespace mmimou::metrics
