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

#ifndef RELAYBC_SCENARIO_HPP
#define RELAYBC_SCENARIO_HPP

#include <cmath>
#include <filesystem>
#include <optional>
#include <ostream>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "relaybc/csv.hpp"
#include "relaybc/precoder.hpp"

namespace relaybc {

// Malformed or inconsistent scenario description.
class ConfigError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

enum class SweepAxis { p1_db, p2_db, joint_db, b1, b2 };
enum class RunMode { perfect, quantized_fixed, quantized_scaled };

std::string to_string(SweepAxis axis);
std::string to_string(RunMode mode);

inline double db_to_linear(double db) { return std::pow(10.0, db / 10.0); }

struct Scenario {
  SystemConfig cfg;  // M, N, B1, B2, trials, seed, quantizer; powers set per point
  SweepAxis axis = SweepAxis::joint_db;
  std::vector<double> sweep;
  std::vector<RunMode> modes{RunMode::perfect};
  double b = 2.0;
  double theta = 0.5;
  std::optional<double> p1_db;  // fixed BS power when not swept
  std::optional<double> p2_db;  // fixed relay power when not swept
  std::filesystem::path output_dir = "results";
  std::vector<std::string> notes;  // extra CSV header comments
};

// "start:step:stop" (inclusive) or a comma-separated list.
std::vector<double> parse_sweep_values(std::string_view text);

// Line-oriented "key = value" text, '#' starts a comment. Keys:
//   M, N, sweep_axis, sweep_values (required)
//   B1, B2 (integer or "perfect"), b, theta, trials, seed, modes,
//   output_dir, P1_dB, P2_dB, rvq (auto | codebook | sampled)
// Throws ConfigError naming the offending line.
Scenario parse_config(std::string_view text);

struct ResultRow {
  double sweep_value = 0.0;
  RunMode mode = RunMode::perfect;
  std::size_t M = 0;
  std::size_t N = 0;
  double P1_dB = 0.0;
  double P2_dB = 0.0;
  std::optional<double> R_P, R_P_stderr;
  std::optional<double> R_Q, R_Q_stderr;
  std::optional<double> delta_R_per_user, delta_R_stderr;
  std::optional<double> bound_high_snr, bound_full_est;
  std::optional<double> R_U1, R_U2;
  FeedbackBits B1_used, B2_used;
  std::size_t discards = 0;
  bool discard_warning = false;
};

// Runs every (sweep point, mode) pair in sweep order. Quantized rows carry
// the paired perfect-CSI rate as well. When output_dir is non-empty,
// results.csv and (for scaled bits) bitplan.csv are written there; on
// failure a PARTIAL marker file is left behind and the error rethrown.
std::vector<ResultRow> run_scenario(const Scenario& s, std::ostream* log = nullptr);

CsvTable results_table(const std::vector<ResultRow>& rows, std::vector<std::string> comments = {});

}  // namespace relaybc

#endif  // RELAYBC_SCENARIO_HPP
