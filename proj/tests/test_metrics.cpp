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

#include "mmimou/metrics.hpp"

#include <algorithm>

using namespace mmimou;
using namespace mmimou::metrics;

TEST_CASE("noise-free single link hits the SINR cap")
{
    Rng rng(31);
    const CMatrixXd h = complex_gaussian(4, 1, rng);
    const auto pre = spatial::baseline_zf_precoders<double>(h);
    const auto t = ue_sinr(h.col(0), pre.weights, 0, {}, {}, 1.0, 0.0);
    CHECK(t.sinr() == kMaxSinr);
}

TEST_CASE("perfect-CSI zero forcing leaves no intra-cell interference")
{
    Rng rng(32);
    const CMatrixXd h = complex_gaussian(16, 6, rng);
    const auto pre = spatial::baseline_zf_precoders<double>(h);
    for (Index k = 0; k < 6; ++k)
    {
        const auto t = ue_sinr(h.col(k), pre.weights, k, {}, {}, 1.0, 1e-12);
        CHECK(t.intra_cell_w <= 1e-18 * t.signal_w);
    }
}

TEST_CASE("two-cell SINR matches a term-by-term evaluation")
{
    Rng rng(33);
    const int n = 4;
    // cell a serves users 0, 1; cell b serves users 2, 3
    const CMatrixXd ha = complex_gaussian(n, 4, rng); // BS a to all four users
    const CMatrixXd hb = complex_gaussian(n, 4, rng); // BS b to all four users
    const CMatrixXd wa = complex_gaussian(n, 2, rng).normalized();
    const CMatrixXd wb = complex_gaussian(n, 2, rng).normalized();
    const std::complex<double> q = complex_gaussian_scalar(rng);
    const double pb = 2.0, pw = 0.25, noise = 0.01, activity_b = 0.4, activity_w = 0.5;

    const InterferingBs other{&hb, 0, &wb, activity_b, 0.0};
    const InterferingWifi dev{q, pw, activity_w};
    const auto t = ue_sinr(ha.col(0), wa, 0, std::span(&other, 1), std::span(&dev, 1), pb, noise);

    auto ip = [&](const CMatrixXd &h, int user, const CMatrixXd &w, int k) {
        std::complex<double> acc = 0.0;
        for (int i = 0; i < n; ++i)
            acc += std::conj(h(i, user)) * w(i, k);
        return std::norm(acc);
    };
    const double signal = pb * ip(ha, 0, wa, 0);
    const double intra = pb * ip(ha, 0, wa, 1);
    const double inter = pb * activity_b * (ip(hb, 0, wb, 0) + ip(hb, 0, wb, 1));
    const double wifi = pw * activity_w * std::norm(q);
    CHECK(t.signal_w == doctest::Approx(signal).epsilon(1e-12));
    CHECK(t.intra_cell_w == doctest::Approx(intra).epsilon(1e-12));
    CHECK(t.inter_cell_w == doctest::Approx(inter).epsilon(1e-12));
    CHECK(t.wifi_w == doctest::Approx(wifi).epsilon(1e-12));
    CHECK(t.sinr() == doctest::Approx(signal / (intra + inter + wifi + noise)).epsilon(1e-12));
    CHECK(t.total_w() == doctest::Approx(signal + intra + inter + wifi + noise).epsilon(1e-12));
}

TEST_CASE("unrealised links contribute their mean")
{
    const InterferingBs weak{nullptr, -1, nullptr, 0.5, 1e-12};
    CHECK(wifi_interference(std::span(&weak, 1), 4.0) == doctest::Approx(2e-12));
}

TEST_CASE("Wi-Fi interference")
{
    CHECK(wifi_interference({}, 1.0) == 0.0);

    Rng rng(34);
    const CMatrixXd g = complex_gaussian(8, 1, rng);
    const CMatrixXd w = g / g.norm();
    const InterferingBs aligned{&g, 0, &w, 1.0, 0.0};
    CHECK(wifi_interference(std::span(&aligned, 1), 3.0) == doctest::Approx(3.0 * g.squaredNorm()).epsilon(1e-12));

    // expectation over unit-power symbols against a symbol-level average
    const CMatrixXd w3 = complex_gaussian(8, 3, rng).normalized();
    const InterferingBs bs{&g, 0, &w3, 1.0, 0.0};
    const double expected = wifi_interference(std::span(&bs, 1), 1.0);
    double acc = 0.0;
    const int draws = 10000;
    for (int t = 0; t < draws; ++t)
    {
        const CVectorXd s = complex_gaussian(3, 1, rng).col(0);
        acc += std::norm(g.col(0).dot(w3 * s));
    }
    CHECK(acc / draws == doctest::Approx(expected).epsilon(0.02));
}

TEST_CASE("sensed power")
{
    Rng rng(35);
    spatial::SilenceSnapshot<double> snap;
    snap.samples = complex_gaussian(4, 6, rng);
    const CMatrixXd u = CMatrixXd::Identity(4, 4);
    CHECK(bs_sensed_power(snap, u, 4, lbt::Mode::Enhanced) == 0.0);
    CHECK(bs_sensed_power(snap, u, 0, lbt::Mode::Conventional) ==
          doctest::Approx(snap.samples.colwise().squaredNorm().maxCoeff()));

    // adding a device never lowers the paired conventional reading
    const CMatrixXd g = complex_gaussian(4, 2, rng);
    int higher = 0;
    for (int t = 0; t < 200; ++t)
    {
        const CMatrixXd s = complex_gaussian(2, 50, rng);
        spatial::SilenceSnapshot<double> one, two;
        one.samples = g.col(0) * s.row(0);
        two.samples = one.samples + g.col(1) * s.row(1);
        higher += bs_sensed_power(two, u, 0, lbt::Mode::Conventional) >
                  bs_sensed_power(one, u, 0, lbt::Mode::Conventional);
    }
    CHECK(higher > 150);
}

TEST_CASE("cellular rate")
{
    const double sens = dbm_to_watts(-94.0);
    CHECK(cell_rate(10.0, 20e6, dbm_to_watts(-95.0), sens) == 0.0);
    CHECK(cell_rate(0.0, 20e6, 1.0, sens) == 0.0);
    CHECK(cell_rate(1.0, 20e6, 1.0, sens) == doctest::Approx(20e6));
}

TEST_CASE("Wi-Fi rate and airtime split")
{
    const std::vector<double> both{1.0, 1.0}, none{0.0, 0.0}, half{1.0, 0.5};
    CHECK(wifi_rate(both, 65e6) == doctest::Approx(130e6));
    CHECK(wifi_rate(none, 65e6) == 0.0);
    CHECK(wifi_rate(half, 65e6) == doctest::Approx(97.5e6));
    CHECK(lbt_airtime_split(2) == doctest::Approx(1.0 / 3.0));
    CHECK(lbt_airtime_split(16) == doctest::Approx(1.0 / 17.0));
    CHECK(lbt_airtime_split(0) == 1.0);
    CHECK_THROWS_AS(lbt_airtime_split(-1), ConfigError);
}

TEST_CASE("empirical CDF")
{
    const std::vector<double> one{5.0};
    const auto c1 = build_cdf(one);
    CHECK(c1.values == std::vector<double>{5.0});
    CHECK(c1.probabilities == std::vector<double>{1.0});

    const std::vector<double> four{3.0, 1.0, 4.0, 2.0};
    const auto c4 = build_cdf(four);
    CHECK(c4.values == std::vector<double>{1.0, 2.0, 3.0, 4.0});
    CHECK(c4.probabilities == std::vector<double>{0.25, 0.5, 0.75, 1.0});
    CHECK(c4.median() == 2.0);
    CHECK(c4.fraction_below(3.0) == 0.5);

    CHECK_THROWS_AS(build_cdf(std::vector<double>{}), DataError);
    CHECK_THROWS_AS(build_cdf(std::vector<double>{1.0, std::nan("")}), DataError);

    Rng rng(36);
    std::normal_distribution<double> normal;
    std::vector<double> draws(10000);
    for (double &x : draws)
        x = normal(rng);
    const auto cn = build_cdf(draws);
    CHECK(std::abs(cn.median()) <= 0.05);
    CHECK(std::is_sorted(cn.values.begin(), cn.values.end()));
    CHECK(cn.probabilities.back() == 1.0);

    std::shuffle(draws.begin(), draws.end(), rng);
    const auto shuffled = build_cdf(draws);
    CHECK(shuffled.values == cn.values);
}
