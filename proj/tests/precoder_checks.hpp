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

#ifndef MMIMOU_TESTS_PRECODER_CHECKS_HPP
#define MMIMOU_TESTS_PRECODER_CHECKS_HPP

// Random precoding instances and their residual measurements, shared by the unit and
// acceptance suites.

#include "test_util.hpp"

#include "mmimou/spatial.hpp"

#include <array>

namespace testutil
{

struct PrecoderResiduals
{
    int antennas = 0, users = 0, nulls = 0;
    double zf = 0.0;      // max |h_k'^H w_k| / (||h_k'|| ||w_k||), k' != k
    double null = 0.0;    // max |u_n^H w_k| / ||w_k||, n <= D
    double norm = 0.0;    // | sum ||w_k||^2 - 1 |
    double leakage = 0.0; // max_k w_k^H Z w_k - lambda_{D+1} ||w_k||^2
    bool regularized = false;
};

inline PrecoderResiduals random_precoder_instance(std::uint64_t seed)
{
    using namespace mmimou;
    Rng rng(seed);
    static constexpr std::array<int, 3> sizes{8, 16, 32};
    const int n = sizes[static_cast<std::size_t>(pick(rng, 0, 2))];
    const int k = pick(rng, 1, n);
    const int d = pick(rng, 0, n - k);
    const int devices = pick(rng, 1, n);

    const CMatrixXd g = complex_gaussian(n, devices, rng);
    const std::vector<double> powers(static_cast<std::size_t>(devices), 1.0);
    const auto snap = spatial::simulate_silence<double>(g, powers, 2 * n, 0.01, rng);
    const auto est = spatial::estimate_covariance(snap);
    const CMatrixXd h = complex_gaussian(n, k, rng);
    const auto pre = spatial::compute_precoders<double>(h, est.eigenbasis, d);

    PrecoderResiduals r;
    r.antennas = n;
    r.users = k;
    r.nulls = d;
    r.regularized = pre.regularized;
    r.norm = std::abs(pre.weights.squaredNorm() - 1.0);
    const double lambda_next = d < n ? est.eigenvalues(d) : 0.0;
    for (int c = 0; c < k; ++c)
    {
        const auto w = pre.weights.col(c);
        const double wn = w.norm();
        for (int j = 0; j < k; ++j)
            if (j != c)
                r.zf = std::max(r.zf, std::abs(h.col(j).dot(w)) / (h.col(j).norm() * wn));
        for (int m = 0; m < d; ++m)
            r.null = std::max(r.null, std::abs(est.eigenbasis.col(m).dot(w)) / wn);
        const double leak = (w.adjoint() * est.covariance * w)(0, 0).real();
        r.leakage = std::max(r.leakage, leak - lambda_next * w.squaredNorm());
    }
    return r;
}

// Covariance and eigen-pairs against the naive oracles on a small instance. Returns the
// largest deviation over: covariance entries, eigenvalues, and the top-D projectors at
// every spectral gap.
inline double covariance_oracle_deviation(std::uint64_t seed)
{
    using namespace mmimou;
    Rng rng(seed);
    const int n = pick(rng, 1, 8);
    const int m = pick(rng, 1, 16);
    const int devices = pick(rng, 0, 4);
    const CMatrixXd g = complex_gaussian(n, devices, rng);
    std::vector<double> powers;
    for (int l = 0; l < devices; ++l)
        powers.push_back(std::uniform_real_distribution<double>(0.1, 2.0)(rng));
    const auto snap = spatial::simulate_silence<double>(g, powers, m, 0.05, rng);
    const auto est = spatial::estimate_covariance(snap);

    const oracle::CMat z = to_oracle(snap.samples);
    const oracle::CMat cov = oracle::naive_covariance(z);
    double dev = max_abs_diff(est.covariance, cov);

    const auto ref = oracle::hermitian_eigen(cov);
    for (int i = 0; i < n; ++i)
        dev = std::max(dev, std::abs(est.eigenvalues(i) - ref.values[static_cast<std::size_t>(i)]));
    for (int d = 1; d < n; ++d)
    {
        // only where the split is well defined
        if (ref.values[static_cast<std::size_t>(d - 1)] - ref.values[static_cast<std::size_t>(d)] <
            1e-4 * std::max(1.0, ref.values[0]))
            continue;
        const CMatrixXd u = est.eigenbasis.leftCols(d);
        dev = std::max(dev, max_abs_diff(u * u.adjoint(), ref.top_projector(d)));
    }
    // each eigenvector satisfies Z u = lambda u
    for (int i = 0; i < n; ++i)
        dev = std::max(dev, (est.covariance * est.eigenbasis.col(i) - est.eigenvalues(i) * est.eigenbasis.col(i))
                                .cwiseAbs()
                                .maxCoeff());
    return dev;
}

} // namespace testutil

#endif
