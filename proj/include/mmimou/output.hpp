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

#ifndef MMIMOU_OUTPUT_HPP
#define MMIMOU_OUTPUT_HPP

// Result files. Every file is written to a temporary sibling and renamed into place.
//
//   fig2_wifi_interference_cdf.csv  scheme,antennas,probability,value_dbm
//   fig3_bs_interference_cdf.csv    scheme,antennas,probability,value_dbm
//   fig4_rates.csv                  scheme,antennas,cellular_mbps,wifi_mbps,aggregate_mbps
//   summary.json                    headline statistics next to the published values
//   manifest.json                   config hash, seeds, version, timing, flags
//   layout.json                     node positions of one drop (optional)

#include "mmimou/experiment.hpp"

#include <filesystem>
#include <string>

namespace mmimou::harness
{

// Points on the probability grid of the CDF files.
inline constexpr int kCdfPoints = 1000;

// Creates dir if needed and proves a file can be created in it; throws IoError otherwise.
void check_writable(const std::filesystem::path &dir);

void write_atomic(const std::filesystem::path &path, const std::string &content);

std::string fig2_csv(const ExperimentResult &result, Scheme scheme);
std::string fig3_csv(const ExperimentResult &result, Scheme scheme);
std::string fig4_csv(const ExperimentResult &result, Scheme scheme);
std::string summary_json(const ExperimentResult &result, const SimConfig &cfg);
std::string manifest_json(const ExperimentResult &result);
std::string layout_json(const topology::NodeSet &nodes, const topology::SiteGrid &grid);

void emit_results(const ExperimentResult &result, const SimConfig &cfg, const std::filesystem::path &dir);

} // namespace mmimou::harness

#endif
