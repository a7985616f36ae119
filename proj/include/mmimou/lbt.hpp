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

#ifndef MMIMOU_LBT_HPP
#define MMIMOU_LBT_HPP

#include "mmimou/common.hpp"

namespace mmimou::lbt
{

enum class Mode
{
    Conventional,
    Enhanced
};

struct LbtDecision
{
    bool granted = false;
    double sensed_power_w = 0.0; // worst sample over the sensing window
    double threshold_w = 0.0;
    Mode mode = Mode::Conventional;
};

// Per-sample received energy ||z[m]||^2.
template <typename Real>
RVector<Real> sample_energy(const CMatrix<Real> &samples)
{
    return samples.colwise().squaredNorm().transpose();
}

// Per-sample energy left after projecting out the first `nulls` basis vectors:
// sum_{n > D} |u_n^H z[m]|^2.
template <typename Real>
RVector<Real> filtered_energy(const CMatrix<Real> &samples, const CMatrix<Real> &basis, Eigen::Index nulls)
{
    const Eigen::Index n = basis.cols();
    if (nulls < 0 || nulls > n)
        throw ConfigError("null count must lie in [0, N]");
    if (nulls == n)
        return RVector<Real>::Zero(samples.cols());
    const CMatrix<Real> projected = basis.rightCols(n - nulls).adjoint() * samples;
    return projected.colwise().squaredNorm().transpose();
}

// Energy detection: granted iff ||z[m]||^2 < threshold for every sample in the window.
template <typename Real>
LbtDecision conventional_lbt(const CMatrix<Real> &samples, double threshold_w)
{
    if (samples.cols() < 1)
        throw ConfigError("LBT needs at least one sample");
    LbtDecision d;
    d.mode = Mode::Conventional;
    d.threshold_w = threshold_w;
    d.sensed_power_w = static_cast<double>(sample_energy(samples).maxCoeff());
    d.granted = d.sensed_power_w < threshold_w;
    return d;
}

// Subspace-filtered detection with the D strongest Wi-Fi directions nulled.
template <typename Real>
LbtDecision enhanced_lbt(const CMatrix<Real> &samples, const CMatrix<Real> &basis, Eigen::Index nulls,
                         double threshold_w)
{
    if (samples.cols() < 1)
        throw ConfigError("LBT needs at least one sample");
    LbtDecision d;
    d.mode = Mode::Enhanced;
    d.threshold_w = threshold_w;
    d.sensed_power_w = static_cast<double>(filtered_energy(samples, basis, nulls).maxCoeff());
    d.granted = d.sensed_power_w < threshold_w;
    return d;
}

// A Wi-Fi device deems the medium busy once its received power reaches the threshold.
inline bool wifi_defer(double received_power_w, double threshold_w)
{
    if (received_power_w < 0.0)
        throw ConfigError("received power cannot be negative");
    return received_power_w >= threshold_w;
}

} // namespace mmimou::lbt

#endif
