// SPDX-License-Identifier: Apache-2.0
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

#ifndef RELAYBC_FIGURES_HPP
#define RELAYBC_FIGURES_HPP

#include <cstdint>
#include <filesystem>
#include <ostream>
#include <vector>

namespace relaybc {

struct FigureOptions {
  std::filesystem::path out_dir = "figures";
  std::size_t trials = 20000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
};

// Ids accepted by reproduce_figure.
const std::vector<int>& figure_ids();

// Regenerates figure `id` as <out_dir>/figN/figN.csv plus a gnuplot script
// figN.gp next to it. Returns the CSV path. Throws std::invalid_argument
// for an unknown id.
std::filesystem::path reproduce_figure(int id, const FigureOptions& opts, std::ostream* log = nullptr);

}  // namespace relaybc

#endif  // RELAYBC_FIGURES_HPP
