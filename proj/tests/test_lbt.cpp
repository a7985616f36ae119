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

#include "doctest.h"
#include "test_util.hpp"

#include "mmimou/lbt.hpp"
#include "mmimou/spatial.hpp"

using namespace mmimou;
using namespace mmimou::lbt;

namespace
{
const double kThreshold = dbm_to_watts(-62.0);

CMatrixXd unitary(int n, Rng &rng)
{
    const Eigen::HouseholderQR<CMatrixXd> qr(complex_gaussian(n, n, rng));
    return qr.householderQ() * CMatrixXd::Identity(n, n);
}
} // namespace

TEST_CASE("silence is granted")
{
    const CMatrixXd z = CMatrixXd::Zero(8, 5);
    CHECK(conventional_lbt(z, kThreshold).granted);
}

TEST_CASE("a sample above the threshold is denied")
{
    CMatrixXd z = CMatrixXd::Zero(4, 3);
    z(0, 1) = std::sqrt(dbm_to_watts(-60.0));
    const auto d = conventional_lbt(z, kThreshold);
    CHECK_FALSE(d.granted);
    CHECK(watts_to_dbm(d.sensed_power_w) == doctest::Approx(-60.0).epsilon(1e-12));
}

TEST_CASE("the full basis reproduces conventional sensing")
{
    Rng rng(21);
    for (int trial = 0; trial < 2000; ++trial)
    {
        const int n = testutil::pick(rng, 1, 8);
        const CMatrixXd z = complex_gaussian(n, testutil::pick(rng, 1, 6), rng, 1.2e-9);
        const CMatrixXd u = unitary(n, rng);
        const auto c = conventional_lbt(z, kThreshold);
        const auto e = enhanced_lbt(z, u, 0, kThreshold);
        CHECK(c.granted == e.granted);
        CHECK(std::abs(c.sensed_power_w - e.sensed_power_w) <= 1e-9 * c.sensed_power_w);
    }
}

TEST_CASE("nulling every direction always grants")
{
    Rng rng(22);
    const CMatrixXd z = complex_gaussian(6, 4, rng, 1.0);
    const auto e = enhanced_lbt(z, unitary(6, rng), 6, kThreshold);
    CHECK(e.granted);
    CHECK(e.sensed_power_w == 0.0);
}

TEST_CASE("a source inside the nulled span is invisible to enhanced sensing")
{
    Rng rng(23);
    const CMatrixXd u = unitary(8, rng);
    const CMatrixXd z = u.col(0) * complex_gaussian(1, 10, rng, 1e-3);
    CHECK_FALSE(conventional_lbt(z, kThreshold).granted);
    const auto e = enhanced_lbt(z, u, 1, kThreshold);
    CHECK(e.granted);
    CHECK(e.sensed_power_w <= 1e-12 * conventional_lbt(z, kThreshold).sensed_power_w);
}

TEST_CASE("filtered energy validates the null count")
{
    const CMatrixXd z = CMatrixXd::Zero(3, 2);
    const CMatrixXd u = CMatrixXd::Identity(3, 3);
    CHECK_THROWS_AS(filtered_energy(z, u, 4), ConfigError);
    CHECK_THROWS_AS(filtered_energy(z, u, -1), ConfigError);
    CHECK_THROWS_AS(conventional_lbt(CMatrixXd(3, 0), kThreshold), ConfigError);
}

TEST_CASE("Wi-Fi defer rule")
{
    CHECK_FALSE(wifi_defer(0.0, kThreshold));
    CHECK(wifi_defer(dbm_to_watts(-61.0), kThreshold));
    CHECK(wifi_defer(kThreshold, kThreshold));
    CHECK_FALSE(wifi_defer(dbm_to_watts(-63.0), kThreshold));
    CHECK_THROWS_AS(wifi_defer(-1.0, kThreshold), ConfigError);
}
