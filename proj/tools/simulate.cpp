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

// Command-line driver: runs the Monte-Carlo sweep and writes the result files.
//
// Exit codes: 0 success, 1 unexpected failure, 2 configuration error, 3 data error,
// 4 I/O error.

#include "mmimou/experiment.hpp"
#include "mmimou/output.hpp"

#include <CLI11.hpp>

#include <cstdlib>
#include <iostream>

namespace
{

enum ExitCode
{
    kOk = 0,
    kFailure = 1,
    kConfig = 2,
    kData = 3,
    kIo = 4
};

constexpr const char *kOutDirEnv = "MMIMOU_OUT_DIR";

} // namespace

int main(int argc, char **argv)
{
    using namespace mmimou;
    using namespace mmimou::harness;

    CLI::App app{"Massive MIMO / Wi-Fi coexistence system-level simulator"};
    std::string config_path;
    std::string scheme;
    std::vector<int> antennas;
    int drops = 0;
    std::uint64_t seed = 0;
    int workers = 0;
    std::string out_dir;
    bool dump_layout = false;
    bool quiet = false;

    app.add_option("--config", config_path, "INI configuration file")->required();
    app.add_option("--scheme", scheme, "mmimo-u, lbt or both");
    app.add_option("--antennas", antennas, "antenna counts, e.g. 32,64,128")->delimiter(',');
    auto *drops_opt = app.add_option("--drops", drops, "Monte-Carlo drops per antenna count");
    auto *seed_opt = app.add_option("--seed", seed, "master seed");
    auto *workers_opt = app.add_option("--workers", workers, "worker threads");
    app.add_option("--out", out_dir, "output directory");
    app.add_flag("--dump-layout", dump_layout, "also write layout.json for the first drop");
    app.add_flag("--quiet", quiet, "no progress output");

    try
    {
        app.parse(argc, argv);
    }
    catch (const CLI::CallForHelp &e)
    {
        return app.exit(e);
    }
    catch (const CLI::ParseError &e)
    {
        app.exit(e);
        return kConfig;
    }

    try
    {
        SimConfig cfg = load_config(config_path);
        std::vector<std::string> flags;
        if (!scheme.empty())
        {
            cfg.scheme = parse_scheme(scheme);
            flags.push_back("--scheme=" + scheme);
        }
        if (!antennas.empty())
        {
            cfg.antennas = antennas;
            flags.push_back("--antennas");
        }
        if (*drops_opt)
        {
            cfg.drops = drops;
            flags.push_back("--drops=" + std::to_string(drops));
        }
        if (*seed_opt)
        {
            cfg.seed = seed;
            flags.push_back("--seed=" + std::to_string(seed));
        }
        if (*workers_opt)
        {
            cfg.workers = workers;
            flags.push_back("--workers=" + std::to_string(workers));
        }
        if (const char *env = std::getenv(kOutDirEnv); env && *env)
        {
            cfg.output_dir = env;
            flags.push_back(std::string(kOutDirEnv) + "=" + env);
        }
        if (!out_dir.empty())
        {
            cfg.output_dir = out_dir;
            flags.push_back("--out=" + out_dir);
        }
        if (dump_layout)
        {
            cfg.dump_layout = true;
            flags.push_back("--dump-layout");
        }
        validate(cfg);
        check_writable(cfg.output_dir);

        ProgressFn progress;
        if (!quiet)
            progress = [](std::size_t done, std::size_t total) {
                if (done == total || done % 50 == 0)
                    std::cerr << "\rdrops " << done << "/" << total << std::flush;
            };
        ExperimentResult result = run_experiment(cfg, progress);
        if (!quiet)
            std::cerr << "\n";
        result.manifest.flags = flags;
        emit_results(result, cfg, cfg.output_dir);

        if (cfg.dump_layout)
        {
            DropContext ctx(cfg, cfg.antennas.front());
            const auto nodes = draw_layout(ctx, drop_seed(cfg.seed, 0));
            write_atomic(cfg.output_dir / "layout.json", layout_json(nodes, ctx.grid));
        }
        if (!quiet)
            std::cerr << "results written to " << cfg.output_dir.string() << " (" << result.manifest.wall_clock_s
                      << " s)\n";
        return kOk;
    }
    catch (const ConfigError &e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfig;
    }
    catch (const AllocationError &e)
    {
        std::cerr << "configuration error: " << e.what() << "\n";
        return kConfig;
    }
    catch (const IoError &e)
    {
        std::cerr << "I/O error: " << e.what() << "\n";
        return kIo;
    }
    catch (const DataError &e)
    {
        std::cerr << "data error: " << e.what() << "\n";
        return kData;
    }
    catch (const std::exception &e)
    {
        std::cerr << "error: " << e.what() << "\n";
        return kFailure;
    }
}
