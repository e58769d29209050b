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

#ifndef RELAYBC_CSV_HPP
#define RELAYBC_CSV_HPP

#include <filesystem>
#include <optional>
#include <ostream>
#include <string>
#include <vector>

namespace relaybc {

// Shortest decimal that round-trips to the same double.
std::string format_double(double x);
std::string format_cell(std::optional<double> x);

struct CsvTable {
  std::vector<std::string> comments;  // emitted as "# ..." lines above the header
  std::vector<std::string> header;
  std::vector<std::vector<std::string>> rows;
};

void write_csv(std::ostream& os, const CsvTable& table);
void write_csv_file(const std::filesystem::path& path, const CsvTable& table);

}  // namespace relaybc

#endif  // RELAYBC_CSV_HPP
