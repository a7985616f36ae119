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

#ifndef MMIMOU_TESTS_TEST_UTIL_HPP
#define MMIMOU_TESTS_TEST_UTIL_HPP

#include "oracles.hpp"

#include "mmimou/common.hpp"
#include "mmimou/random.hpp"

namespace testutil
{

inline oracle::CMat to_oracle(const mmimou::CMatrixXd &m)
{
    oracle::CMat o(static_cast<int>(m.rows()), static_cast<int>(m.cols()));
    for (int i = 0; i < o.rows; ++i)
        for (int j = 0; j < o.cols; ++j)
            o(i, j) = m(i, j);
    return o;
}

inline double max_abs_diff(const mmimou::CMatrixXd &m, const oracle::CMat &o)
{
    double worst = 0.0;
    for (int i = 0; i < o.rows; ++i)
        for (int j = 0; j < o.cols; ++j)
            worst = std::max(worst, std::abs(m(i, j) - o(i, j)));
    return worst;
}

// Uniform integer in [lo, hi].
inline int pick(mmimou::Rng &rng, int lo, int hi)
{
    return std::uniform_int_distribution<int>(lo, hi)(rng);
}

} // namespace testutil

#endif
