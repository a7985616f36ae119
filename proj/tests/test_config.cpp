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

#include "mmimou/config.hpp"

#include <filesystem>
#include <fstream>
#include <sstream>

using namespace mmimou;
using namespace mmimou::harness;

namespace
{
std::string error_of(const std::string &text)
{
    try
    {
        validate(parse_config(text));
    }
    catch (const ConfigError &e)
    {
        return e.what();
    }
    return {};
}
} // namespace

TEST_CASE("defaults are valid and survive a round trip")
{
    const SimConfig cfg;
    CHECK_NOTHROW(validate(cfg));
    CHECK(parse_config(serialize_config(cfg)) == cfg);
}

TEST_CASE("the shipped config equals the defaults")
{
    CHECK(load_config(MMIMOU_SOURCE_DIR "/configs/default.ini") == SimConfig{});
}

TEST_CASE("every key round-trips through the text form")
{
    SimConfig cfg;
    cfg.scheme = Scheme::ConventionalLbt;
    cfg.antennas = {16, 48};
    cfg.seed = 123456789012345ULL;
    cfg.csi_tau2 = 0.25;
    cfg.csi_reference = CsiErrorReference::Link;
    cfg.spatial.criterion = spatial::Criterion::InterferenceCap;
    cfg.spatial.cluster_access = false;
    cfg.radio.lbt_threshold_dbm = -72.5;
    cfg.channel.k_factor_slope_db_per_m = 0.0123456789;
    cfg.density.hotspot_radius = 17.75;
    const SimConfig back = parse_config(serialize_config(cfg));
    CHECK(back == cfg);
    CHECK(config_keys().size() >= 50);
}

TEST_CASE("an empty file yields the scenario defaults")
{
    const SimConfig cfg = parse_config("");
    CHECK(cfg == SimConfig{});
    CHECK(cfg.radio.bs_power_dbm == 30.0);
    CHECK(cfg.radio.lbt_threshold_dbm == -62.0);
    CHECK(cfg.spatial.c1 == 0.5);
    CHECK(cfg.csi_tau2 == 0.1);
    CHECK(cfg.inter_site_distance == 500.0);
}

TEST_CASE("partial files keep defaults")
{
    const SimConfig cfg = parse_config("[run]\ndrops = 7\n\n[spatial]\nc1 = 0.25\n");
    CHECK(cfg.drops == 7);
    CHECK(cfg.spatial.c1 == 0.25);
    CHECK(cfg.seed == SimConfig{}.seed);
}

TEST_CASE("unknown keys are rejected with the valid list")
{
    const std::string msg = error_of("[run]\ndropz = 3\n");
    CHECK(msg.find("dropz") != std::string::npos);
    CHECK(msg.find("run.drops") != std::string::npos);
    CHECK_THROWS_AS(parse_config("drops = 3\n"), ConfigError);
}

TEST_CASE("out-of-range values name the key and bound")
{
    for (const char *text : {"[run]\ndrops = 0\n", "[run]\nworkers = 0\n", "[topology]\nrings = 1\n",
                             "[channel]\ncsi_tau2 = 1.5\n", "[spatial]\nc1 = 1\n", "[spatial]\nc2 = 0\n",
                             "[run]\nantennas = 0\n"})
    {
        CAPTURE(text);
        const std::string msg = error_of(text);
        CHECK(msg.find("out of range") != std::string::npos);
    }
    CHECK(error_of("[run]\ndrops = 0\n").find("run.drops") != std::string::npos);
}

TEST_CASE("malformed values")
{
    CHECK_THROWS_AS(parse_config("[run]\ndrops = many\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\nscheme = tdma\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\ndump_layout = maybe\n"), ConfigError);
    CHECK_THROWS_AS(parse_config("[run]\nantennas = 32,,64\n"), ConfigError);
}

TEST_CASE("scheme names")
{
    CHECK(parse_scheme("mmimo-u") == Scheme::MassiveMimoU);
    CHECK(parse_scheme("mMIMO-U") == Scheme::MassiveMimoU);
    CHECK(parse_scheme("lbt") == Scheme::ConventionalLbt);
    CHECK(parse_scheme("conventional-LBT") == Scheme::ConventionalLbt);
    CHECK(parse_scheme("both") == Scheme::Both);
    for (Scheme s : {Scheme::MassiveMimoU, Scheme::ConventionalLbt, Scheme::Both})
        CHECK(parse_scheme(to_string(s)) == s);
}

TEST_CASE("config hash ignores run plumbing")
{
    SimConfig a, b;
    b.output_dir = "elsewhere";
    b.workers = 8;
    b.dump_layout = true;
    CHECK(config_hash(a) == config_hash(b));
    CHECK(config_hash(a).size() == 16);
    b.seed = 43;
    CHECK(config_hash(a) != config_hash(b));
}

TEST_CASE("file errors")
{
    CHECK_THROWS_AS(load_config("/nonexistent/dir/none.ini"), IoError);
    const auto path = std::filesystem::temp_directory_path() / "mmimou_cfg_roundtrip.ini";
    SimConfig cfg;
    cfg.drops = 3;
    save_config(cfg, path);
    CHECK(load_config(path) == cfg);
    std::filesystem::remove(path);
}
