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

#include "mmimou/experiment.hpp"
#include "mmimou/output.hpp"

#include "json.hpp"

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <set>
#include <sstream>
#include <sys/wait.h>

using namespace mmimou;
using namespace mmimou::harness;
namespace fs = std::filesystem;

namespace
{

SimConfig tiny()
{
    SimConfig cfg;
    cfg.rings = 0;
    cfg.antennas = {8, 16};
    cfg.drops = 4;
    cfg.seed = 9;
    return cfg;
}

fs::path scratch(const std::string &name)
{
    const fs::path p = fs::temp_directory_path() / ("mmimou_test_" + name);
    fs::remove_all(p);
    return p;
}

std::string slurp(const fs::path &p)
{
    std::ifstream in(p, std::ios::binary);
    std::ostringstream s;
    s << in.rdbuf();
    return s.str();
}

int run_cli(const std::string &args)
{
    const std::string cmd = std::string(MMIMOU_SIMULATE_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

} // namespace

TEST_CASE("drop seeds are distinct and stable")
{
    std::set<std::uint64_t> seen;
    for (std::size_t d = 0; d < 1000; ++d)
        seen.insert(drop_seed(42, d));
    CHECK(seen.size() == 1000);
    CHECK(drop_seed(42, 5) == drop_seed(42, 5));
    CHECK(drop_seed(42, 5) != drop_seed(43, 5));
}

TEST_CASE("a drop is a pure function of its seed")
{
    const SimConfig cfg = tiny();
    const DropContext ctx(cfg, 8);
    const auto a = evaluate_drop(ctx, 0, 1234);
    const auto b = evaluate_drop(ctx, 0, 1234);
    CHECK(a.mmimo_u.wifi_interference_w == b.mmimo_u.wifi_interference_w);
    CHECK(a.lbt.bs_sensed_w == b.lbt.bs_sensed_w);
    CHECK(a.mmimo_u_rates.cellular_bps == b.mmimo_u_rates.cellular_bps);
    CHECK(a.mmimo_u.wifi_interference_w.size() == 3 * 2 * 8);
    for (double r : a.mmimo_u_rates.cellular_bps)
        CHECK(r >= 0.0);
}

TEST_CASE("results do not depend on the worker count")
{
    SimConfig cfg = tiny();
    cfg.workers = 1;
    const auto one = run_experiment(cfg);
    cfg.workers = 3;
    const auto three = run_experiment(cfg);
    for (Scheme s : {Scheme::MassiveMimoU, Scheme::ConventionalLbt})
    {
        CHECK(fig2_csv(one, s) == fig2_csv(three, s));
        CHECK(fig3_csv(one, s) == fig3_csv(three, s));
        CHECK(fig4_csv(one, s) == fig4_csv(three, s));
    }
}

TEST_CASE("a single scheme reproduces its part of the joint run")
{
    SimConfig cfg = tiny();
    cfg.antennas = {8};
    const auto both = run_experiment(cfg);
    cfg.scheme = Scheme::MassiveMimoU;
    const auto mmimo = run_experiment(cfg);
    cfg.scheme = Scheme::ConventionalLbt;
    const auto lbt = run_experiment(cfg);

    const auto &b = both.per_antennas[0];
    const auto &m = mmimo.per_antennas[0];
    const auto &l = lbt.per_antennas[0];
    CHECK(m.mmimo_cellular_bps == b.mmimo_cellular_bps);
    CHECK(m.wifi_interference_mmimo_w == b.wifi_interference_mmimo_w);
    CHECK(m.lbt_case1_cellular_bps == 0.0);
    CHECK(m.bs_sensed_conventional_w.empty());
    CHECK(l.lbt_case2_cellular_bps == b.lbt_case2_cellular_bps);
    CHECK(l.bs_sensed_conventional_w == b.bs_sensed_conventional_w);
    CHECK(l.mmimo_wifi_bps == 0.0);
    CHECK(fig4_csv(mmimo, Scheme::MassiveMimoU).find("lbt") == std::string::npos);
}

TEST_CASE("result files")
{
    const SimConfig cfg = tiny();
    const auto result = run_experiment(cfg);
    const fs::path dir = scratch("emit");
    check_writable(dir);
    emit_results(result, cfg, dir);

    for (const char *name : {"fig2_wifi_interference_cdf.csv", "fig3_bs_interference_cdf.csv", "fig4_rates.csv",
                             "summary.json", "manifest.json"})
        CHECK(fs::exists(dir / name));
    for (const auto &entry : fs::directory_iterator(dir))
        CHECK(entry.path().extension() != ".tmp");

    std::istringstream fig2(slurp(dir / "fig2_wifi_interference_cdf.csv"));
    std::string line;
    std::getline(fig2, line);
    CHECK(line == "scheme,antennas,probability,value_dbm");
    int rows = 0;
    while (std::getline(fig2, line))
        ++rows;
    CHECK(rows == 2 * 2 * kCdfPoints);

    std::istringstream fig4(slurp(dir / "fig4_rates.csv"));
    std::getline(fig4, line);
    CHECK(line == "scheme,antennas,cellular_mbps,wifi_mbps,aggregate_mbps");

    // one row per (scheme, N), values parse back to the pooled rates
    int rate_rows = 0;
    while (std::getline(fig4, line))
    {
        std::istringstream row(line);
        std::string scheme, n, cell, wifi, agg;
        std::getline(row, scheme, ',');
        std::getline(row, n, ',');
        std::getline(row, cell, ',');
        std::getline(row, wifi, ',');
        std::getline(row, agg, ',');
        ++rate_rows;
        if (scheme != "mmimo-u")
            continue;
        const auto &r = result.per_antennas[std::stoi(n) == 8 ? 0 : 1];
        CHECK(std::abs(std::stod(cell) - r.mmimo_cellular_bps / 1e6) <= 1e-9 * (1.0 + r.mmimo_cellular_bps / 1e6));
        CHECK(std::abs(std::stod(wifi) - r.mmimo_wifi_bps / 1e6) <= 1e-9 * (1.0 + r.mmimo_wifi_bps / 1e6));
    }
    CHECK(rate_rows == 3 * 2);

    const auto summary = nlohmann::json::parse(slurp(dir / "summary.json"));
    CHECK(summary["per_antennas"].size() == 2);
    CHECK(summary["per_antennas"][0].contains("wifi_interference"));
    CHECK(summary.contains("published_reference"));

    const auto manifest = nlohmann::json::parse(slurp(dir / "manifest.json"));
    CHECK(manifest["config_hash"] == config_hash(cfg));
    CHECK(manifest["master_seed"] == 9);
    CHECK(manifest["version"] == kVersion);
    fs::remove_all(dir);
}

TEST_CASE("unwritable output is an I/O error")
{
    const fs::path file = scratch("blocker");
    std::ofstream(file) << "x";
    CHECK_THROWS_AS(check_writable(file / "sub"), IoError);
    fs::remove(file);
}

TEST_CASE("command-line exit codes")
{
    const fs::path dir = scratch("cli");
    fs::create_directories(dir);
    const fs::path good = dir / "tiny.ini";
    std::ofstream(good) << "[run]\nantennas = 8\ndrops = 2\n[topology]\nrings = 0\n";
    const fs::path bad = dir / "bad.ini";
    std::ofstream(bad) << "[run]\ndrops = -3\n";

    CHECK(run_cli("--config " + good.string() + " --out " + (dir / "out").string() + " --quiet --dump-layout") == 0);
    CHECK(fs::exists(dir / "out" / "fig4_rates.csv"));
    CHECK(fs::exists(dir / "out" / "layout.json"));
    CHECK(run_cli("--config " + bad.string() + " --quiet") == 2);
    CHECK(run_cli("--config " + good.string() + " --antennas 8,x --quiet") == 2);
    CHECK(run_cli("--config " + (dir / "missing.ini").string() + " --quiet") == 4);
    CHECK(run_cli("--config " + good.string() + " --out " + (good / "nested").string() + " --quiet") == 4);

    // the environment override applies to the output directory only
    const std::string env_dir = (dir / "env").string();
    const std::string cmd = "MMIMOU_OUT_DIR=" + env_dir + " " + std::string(MMIMOU_SIMULATE_PATH) + " --config " +
                            good.string() + " --quiet > /dev/null 2>&1";
    CHECK(WEXITSTATUS(std::system(cmd.c_str())) == 0);
    CHECK(fs::exists(fs::path(env_dir) / "summary.json"));
    fs::remove_all(dir);
}
