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

#ifndef MMIMOU_RANDOM_HPP
#define MMIMOU_RANDOM_HPP

#include "mmimou/common.hpp"

#include <boost/random/normal_distribution.hpp>

namespace mmimou
{

// Circularly-symmetric complex Gaussian entries with E|x|^2 = variance.
// boost's ziggurat normal is fully defined by the header, so draws are
// reproducible across standard libraries.
template <typename Derived>
void fill_complex_gaussian(Eigen::MatrixBase<Derived> &out, Rng &rng, double variance = 1.0)
{
    using Scalar = typename Derived::Scalar;
    using Real = typename Scalar::value_type;
    boost::random::normal_distribution<Real> normal(Real(0), static_cast<Real>(std::sqrt(variance / 2.0)));
    for (Eigen::Index c = 0; c < out.cols(); ++c)
        for (Eigen::Index r = 0; r < out.rows(); ++r)
        {
            const Real re = normal(rng);
            const Real im = normal(rng);
            out(r, c) = Scalar(re, im);
        }
}

template <typename Real = double>
CMatrix<Real> complex_gaussian(Eigen::Index rows, Eigen::Index cols, Rng &rng, double variance = 1.0)
{
    CMatrix<Real> out(rows, cols);
    fill_complex_gaussian(out, rng, variance);
    return out;
}

inline std::complex<double> complex_gaussian_scalar(Rng &rng, double variance = 1.0)
{
    boost::random::normal_distribution<double> normal(0.0, std::sqrt(variance / 2.0));
    const double re = normal(rng);
    const double im = normal(rng);
    return {re, im};
}

// Seed of an independent sub-stream. splitmix64's finalizer is a bijection on
// 64-bit words, so distinct (stream, index) pairs below 2^32 never collide.
inline std::uint64_t derive_seed(std::uint64_t master, std::uint64_t stream, std::uint64_t index)
{
    std::uint64_t z = master ^ ((stream << 32) | (index & 0xffffffffULL));
    z += 0x9e3779b97f4a7c15ULL;
    z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
    z = (z ^ (z >> 27)) * 0x94d049bb133111ebULL;
    return z ^ (z >> 31);
}

} // namespace mmimou

#endif
