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

#ifndef MMIMOU_SPATIAL_HPP
#define MMIMOU_SPATIAL_HPP

// Covariance-based Wi-Fi subspace estimation, spatial degree-of-freedom split
// between users and nulls, and null-constrained zero-forcing precoding.

#include "mmimou/common.hpp"
#include "mmimou/random.hpp"

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <numeric>
#include <random>
#include <span>
#include <vector>

namespace mmimou::spatial
{

using Eigen::Index;

// Received array snapshots while the BS is silent; column m is z[m].
template <typename Real>
struct SilenceSnapshot
{
    CMatrix<Real> samples;       // N x M
    Real noise_var = Real(0);    // per-antenna thermal noise power (W)
    std::vector<Real> tx_powers; // per active Wi-Fi device (W)

    Index antennas() const { return samples.rows(); }
    Index sample_count() const { return samples.cols(); }
};

// z[m] = sum_l sqrt(P_l) g_l s_l[m] + eta[m], s ~ CN(0, 1), eta ~ CN(0, noise_var I).
// wifi_channels holds g_l as columns. With a nonempty `groups` (one label per column),
// a single uniformly chosen member of each group is on air in every sample.
template <typename Real>
SilenceSnapshot<Real> simulate_silence(const CMatrix<Real> &wifi_channels, std::span<const Real> tx_powers,
                                       Index samples, Real noise_var, Rng &rng,
                                       std::span<const std::size_t> groups = {})
{
    if (samples < 1)
        throw ConfigError("silent period needs at least one sample");
    if (static_cast<std::size_t>(wifi_channels.cols()) != tx_powers.size())
        throw ConfigError("one transmit power per Wi-Fi channel is required");
    if (!groups.empty() && groups.size() != tx_powers.size())
        throw ConfigError("one group label per Wi-Fi channel is required");
    const Index n = wifi_channels.rows();

    SilenceSnapshot<Real> snap;
    snap.noise_var = noise_var;
    snap.tx_powers.assign(tx_powers.begin(), tx_powers.end());
    snap.samples = CMatrix<Real>::Zero(n, samples);

    if (wifi_channels.cols() > 0 && groups.empty())
    {
        CMatrix<Real> symbols = complex_gaussian<Real>(wifi_channels.cols(), samples, rng);
        for (Index l = 0; l < symbols.rows(); ++l)
            symbols.row(l) *= std::sqrt(tx_powers[static_cast<std::size_t>(l)]);
        snap.samples.noalias() = wifi_channels * symbols;
    }
    else if (wifi_channels.cols() > 0)
    {
        std::vector<std::size_t> labels(groups.begin(), groups.end());
        std::sort(labels.begin(), labels.end());
        labels.erase(std::unique(labels.begin(), labels.end()), labels.end());
        std::vector<std::vector<Index>> members(labels.size());
        for (std::size_t l = 0; l < groups.size(); ++l)
            members[static_cast<std::size_t>(std::lower_bound(labels.begin(), labels.end(), groups[l]) -
                                             labels.begin())]
                .push_back(static_cast<Index>(l));
        const CMatrix<Real> symbols = complex_gaussian<Real>(static_cast<Index>(members.size()), samples, rng);
        for (Index m = 0; m < samples; ++m)
            for (std::size_t g = 0; g < members.size(); ++g)
            {
                const auto &group = members[g];
                std::uniform_int_distribution<std::size_t> pick(0, group.size() - 1);
                const Index l = group[pick(rng)];
                snap.samples.col(m) += (std::sqrt(tx_powers[static_cast<std::size_t>(l)]) *
                                        symbols(static_cast<Index>(g), m)) *
                                       wifi_channels.col(l);
            }
    }
    if (noise_var > Real(0))
        snap.samples += complex_gaussian<Real>(n, samples, rng, noise_var);
    return snap;
}

// Sample covariance with its eigen-pairs sorted by descending eigenvalue.
template <typename Real>
struct CovarianceEstimate
{
    CMatrix<Real> covariance;  // Z_hat, N x N Hermitian
    CMatrix<Real> eigenbasis;  // U_hat, columns are eigenvectors
    RVector<Real> eigenvalues; // lambda_hat, descending
    Index sample_count = 0;

    Index antennas() const { return covariance.rows(); }
};

template <typename Real>
CovarianceEstimate<Real> estimate_covariance(const SilenceSnapshot<Real> &snap)
{
    const Index m = snap.sample_count();
    if (m < 1)
        throw DataError("covariance estimate needs at least one sample");
    if (!snap.samples.allFinite())
        throw DataError("non-finite received samples");

    CovarianceEstimate<Real> est;
    est.sample_count = m;
    est.covariance.noalias() = snap.samples * snap.samples.adjoint();
    est.covariance /= static_cast<Real>(m);
    // exact Hermitian symmetry
    est.covariance = (est.covariance + est.covariance.adjoint()).eval() * Real(0.5);

    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> eig(est.covariance);
    if (eig.info() != Eigen::Success)
        throw DataError("Hermitian eigen-decomposition failed");
    const Index n = est.covariance.rows();
    // Eigen sorts ascending; reversing keeps a stable order for ties.
    est.eigenvalues = eig.eigenvalues().reverse();
    est.eigenbasis = eig.eigenvectors().rowwise().reverse();
    (void)n;
    return est;
}

enum class Criterion
{
    FixedUsers,    // D = floor(c1 (N - K))
    InterferenceCap // D = #{lambda > gamma}, K = floor(c2 (N - D))
};

struct SpatialAllocation
{
    Index nulls = 0; // D_i
    Index users = 0; // K_i
    Criterion criterion = Criterion::FixedUsers;

    bool transmission_opportunity() const { return users > 0; }
};

namespace detail
{
// floor() of a product that should land on an integer, robust to the last ulp.
inline Index floor_fraction(double fraction, Index count)
{
    return static_cast<Index>(std::floor(fraction * static_cast<double>(count) + 1e-9));
}
} // namespace detail

inline Index allocate_dof_fixed_k(Index antennas, Index users, double c1)
{
    if (users < 1 || users > antennas)
        throw ConfigError("scheduled users must satisfy 1 <= K <= N (K=" + std::to_string(users) +
                          ", N=" + std::to_string(antennas) + ")");
    if (!(c1 > 0.0 && c1 < 1.0))
        throw ConfigError("c1 must lie in (0, 1)");
    return detail::floor_fraction(c1, antennas - users);
}

template <typename Real>
SpatialAllocation allocate_dof_threshold(const RVector<Real> &eigenvalues, Real gamma, double c2, Index antennas)
{
    if (!(gamma >= Real(0)))
        throw ConfigError("eigenvalue threshold gamma must be >= 0");
    if (!(c2 > 0.0 && c2 < 1.0))
        throw ConfigError("c2 must lie in (0, 1)");
    if (eigenvalues.size() != antennas)
        throw ConfigError("eigenvalue count must equal the antenna count");
    SpatialAllocation a;
    a.criterion = Criterion::InterferenceCap;
    a.nulls = static_cast<Index>((eigenvalues.array() > gamma).count());
    a.users = std::max<Index>(0, detail::floor_fraction(c2, antennas - a.nulls));
    return a;
}

// Uniform random subset of size min(K, |associated|), returned in ascending order.
std::vector<std::size_t> schedule_ues(std::span<const std::size_t> associated, Index users, Rng &rng);

struct PrecoderOptions
{
    double condition_cap = 1e12;  // on the column-equilibrated Gram matrix
    double regularization = 1e-10; // epsilon, relative to tr(S^H S)/(K + D)
};

template <typename Real>
struct PrecoderSet
{
    CMatrix<Real> weights;     // W, N x K, column k is w_k
    Real zeta = Real(1);       // normalisation so that ||W||_F = 1
    CMatrix<Real> constraints; // S = [h_1 .. h_K, u_1 .. u_D]
    Index nulls = 0;
    bool regularized = false;

    Index users() const { return weights.cols(); }
};

// w_k = S (S^H S)^{-1} v_k / sqrt(zeta), S = [estimates, first `nulls` columns of basis].
template <typename Real>
PrecoderSet<Real> compute_precoders(const CMatrix<Real> &estimates, const CMatrix<Real> &basis, Index nulls,
                                    const PrecoderOptions &opt = {})
{
    using Complex = std::complex<Real>;
    const Index n = estimates.rows();
    const Index k = estimates.cols();
    if (k < 1)
        throw AllocationError("precoding needs at least one user");
    if (nulls < 0 || nulls > basis.cols() || (nulls > 0 && basis.rows() != n))
        throw AllocationError("null count exceeds the supplied eigenbasis");
    if (k + nulls > n)
        throw AllocationError("K + D = " + std::to_string(k + nulls) + " exceeds N = " + std::to_string(n));

    PrecoderSet<Real> out;
    out.nulls = nulls;
    out.constraints.resize(n, k + nulls);
    out.constraints.leftCols(k) = estimates;
    if (nulls > 0)
        out.constraints.rightCols(nulls) = basis.leftCols(nulls);

    // Equilibrate columns: S = S_eq diag(norms). Then S (S^H S)^{-1} v_k = S_eq (S_eq^H S_eq)^{-1} v_k / norms(k),
    // which keeps the exact direction and power split while taming path-loss spread.
    const RVector<Real> norms = out.constraints.colwise().norm().transpose();
    if (!(norms.array() > Real(0)).all() || !norms.allFinite())
        throw AllocationError("constraint matrix has a zero or non-finite column");
    const CMatrix<Real> s_eq = out.constraints * norms.cwiseInverse().asDiagonal();

    CMatrix<Real> gram = s_eq.adjoint() * s_eq;
    Eigen::SelfAdjointEigenSolver<CMatrix<Real>> gram_eig(gram, Eigen::EigenvaluesOnly);
    const Real lo = gram_eig.eigenvalues().minCoeff();
    const Real hi = gram_eig.eigenvalues().maxCoeff();
    const bool ill = !(lo > Real(0)) || hi / lo > static_cast<Real>(opt.condition_cap);

    CMatrix<Real> selector = CMatrix<Real>::Zero(k + nulls, k);
    selector.topRows(k).diagonal().setOnes();

    CMatrix<Real> raw;
    if (!ill)
    {
        // S_eq = Q R  =>  S_eq (S_eq^H S_eq)^{-1} = Q R^{-H}
        Eigen::HouseholderQR<CMatrix<Real>> qr(s_eq);
        const CMatrix<Real> r = qr.matrixQR().topRows(k + nulls).template triangularView<Eigen::Upper>();
        const CMatrix<Real> coeffs =
            r.adjoint().template triangularView<Eigen::Lower>().solve(selector); // R^{-H} V
        CMatrix<Real> padded = CMatrix<Real>::Zero(n, k);
        padded.topRows(k + nulls) = coeffs;
        raw = qr.householderQ() * padded;
    }
    else
    {
        out.regularized = true;
        const Real eps = static_cast<Real>(opt.regularization) * gram.trace().real() / static_cast<Real>(k + nulls);
        gram.diagonal().array() += Complex(eps, Real(0));
        raw = s_eq * gram.ldlt().solve(selector);
    }
    raw = raw * norms.head(k).cwiseInverse().asDiagonal();

    out.zeta = raw.squaredNorm();
    if (!(out.zeta > Real(0)) || !std::isfinite(out.zeta))
        throw AllocationError("precoder normalisation is degenerate");
    out.weights = raw / std::sqrt(out.zeta);
    return out;
}

// Conventional zero forcing: no nulls.
template <typename Real>
PrecoderSet<Real> baseline_zf_precoders(const CMatrix<Real> &estimates, const PrecoderOptions &opt = {})
{
    return compute_precoders<Real>(estimates, CMatrix<Real>(estimates.rows(), 0), 0, opt);
}

} // namespace mmimou::spatial

#endif
