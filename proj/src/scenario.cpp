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

#include "relaybc/scenario.hpp"

#include <algorithm>
#include <charconv>
#include <fstream>
#include <limits>
#include <map>
#include <set>
#include <sstream>

#include "relaybc/bounds.hpp"
#include "relaybc/ratesim.hpp"

namespace relaybc {
namespace {

std::string_view trim(std::string_view s) {
  const auto first = s.find_first_not_of(" \t\r");
  if (first == std::string_view::npos) return {};
  const auto last = s.find_last_not_of(" \t\r");
  return s.substr(first, last - first + 1);
}

std::optional<double> to_double(std::string_view s) {
  s = trim(s);
  double x = 0.0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size() || !std::isfinite(x)) return std::nullopt;
  return x;
}

std::optional<std::uint64_t> to_uint(std::string_view s) {
  s = trim(s);
  std::uint64_t x = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), x);
  if (res.ec != std::errc{} || res.ptr != s.data() + s.size()) return std::nullopt;
  return x;
}

std::vector<std::string_view> split(std::string_view s, char sep) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  for (;;) {
    const auto pos = s.find(sep, start);
    out.push_back(trim(s.substr(start, pos - start)));
    if (pos == std::string_view::npos) return out;
    start = pos + 1;
  }
}

struct Entry {
  std::size_t line;
  std::string value;
};

[[noreturn]] void fail(std::size_t line, const std::string& msg) {
  throw ConfigError("line " + std::to_string(line) + ": " + msg);
}

}  // namespace

std::string to_string(SweepAxis axis) {
  switch (axis) {
    case SweepAxis::p1_db: return "P1_dB";
    case SweepAxis::p2_db: return "P2_dB";
    case SweepAxis::joint_db: return "joint_dB";
    case SweepAxis::b1: return "B1";
    case SweepAxis::b2: return "B2";
  }
  return "?";
}

std::string to_string(RunMode mode) {
  switch (mode) {
    case RunMode::perfect: return "perfect";
    case RunMode::quantized_fixed: return "quantized_fixed";
    case RunMode::quantized_scaled: return "quantized_scaled";
  }
  return "?";
}

std::vector<double> parse_sweep_values(std::string_view text) {
  text = trim(text);
  if (text.empty()) throw ConfigError("empty sweep");
  std::vector<double> out;
  if (text.find(':') != std::string_view::npos) {
    const auto parts = split(text, ':');
    if (parts.size() != 3) throw ConfigError("range must be start:step:stop");
    const auto a = to_double(parts[0]), step = to_double(parts[1]), b = to_double(parts[2]);
    if (!a || !step || !b) throw ConfigError("non-numeric range bound");
    if (*step <= 0.0) throw ConfigError("range step must be positive");
    if (*b < *a) throw ConfigError("range stop below start");
    const double count = std::floor((*b - *a) / *step + 1e-9);
    if (count > 1e6) throw ConfigError("range too long");
    for (std::size_t i = 0; i <= static_cast<std::size_t>(count); ++i) out.push_back(*a + static_cast<double>(i) * *step);
    return out;
  }
  for (auto part : split(text, ',')) {
    const auto x = to_double(part);
    if (!x) throw ConfigError("non-numeric sweep value '" + std::string(part) + "'");
    out.push_back(*x);
  }
  return out;
}

Scenario parse_config(std::string_view text) {
  static const std::set<std::string, std::less<>> known{"M",     "N",     "sweep_axis", "sweep_values", "B1",
                                                        "B2",    "b",     "theta",      "trials",       "seed",
                                                        "modes", "output_dir", "P1_dB", "P2_dB",        "rvq"};
  std::map<std::string, Entry, std::less<>> kv;
  std::size_t lineno = 0;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const auto nl = text.find('\n', pos);
    std::string_view line = text.substr(pos, nl == std::string_view::npos ? std::string_view::npos : nl - pos);
    pos = nl == std::string_view::npos ? text.size() + 1 : nl + 1;
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string_view::npos) line = line.substr(0, hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string_view::npos) fail(lineno, "expected 'key = value'");
    const std::string key(trim(line.substr(0, eq)));
    const std::string value(trim(line.substr(eq + 1)));
    if (!known.contains(key)) fail(lineno, "unknown key '" + key + "'");
    if (value.empty()) fail(lineno, "empty value for '" + key + "'");
    if (kv.contains(key)) fail(lineno, "duplicate key '" + key + "'");
    kv.emplace(key, Entry{lineno, value});
  }
  for (const char* req : {"M", "N", "sweep_axis", "sweep_values"})
    if (!kv.contains(req)) throw ConfigError(std::string("missing required key '") + req + "'");

  auto uint_of = [&](const char* key) {
    const Entry& e = kv.at(key);
    const auto x = to_uint(e.value);
    if (!x) fail(e.line, std::string(key) + " must be a non-negative integer");
    return *x;
  };
  auto real_of = [&](const char* key) {
    const Entry& e = kv.at(key);
    const auto x = to_double(e.value);
    if (!x) fail(e.line, std::string(key) + " must be numeric");
    return *x;
  };
  auto bits_of = [&](const char* key) -> FeedbackBits {
    const Entry& e = kv.at(key);
    if (e.value == "perfect") return kPerfectFeedback;
    const auto x = to_uint(e.value);
    if (!x || *x > 1000) fail(e.line, std::string(key) + " must be a bit count or 'perfect'");
    return static_cast<unsigned>(*x);
  };

  Scenario s;
  s.cfg.M = uint_of("M");
  s.cfg.N = uint_of("N");
  if (s.cfg.N < 2) fail(kv.at("N").line, "N >= 2 required");
  if (s.cfg.M < s.cfg.N) fail(kv.at("M").line, "M >= N violated (M = " + std::to_string(s.cfg.M) +
                                                   ", N = " + std::to_string(s.cfg.N) + ")");

  {
    const Entry& e = kv.at("sweep_axis");
    static const std::map<std::string, SweepAxis, std::less<>> axes{{"P1_dB", SweepAxis::p1_db},
                                                                    {"P2_dB", SweepAxis::p2_db},
                                                                    {"joint_dB", SweepAxis::joint_db},
                                                                    {"B1", SweepAxis::b1},
                                                                    {"B2", SweepAxis::b2}};
    const auto it = axes.find(e.value);
    if (it == axes.end()) fail(e.line, "sweep_axis must be one of P1_dB, P2_dB, joint_dB, B1, B2");
    s.axis = it->second;
  }
  {
    const Entry& e = kv.at("sweep_values");
    try {
      s.sweep = parse_sweep_values(e.value);
    } catch (const ConfigError& err) {
      fail(e.line, err.what());
    }
    if (s.axis == SweepAxis::b1 || s.axis == SweepAxis::b2)
      for (double x : s.sweep)
        if (x < 0.0 || x != std::floor(x) || x > 1000.0) fail(e.line, "bit sweep values must be non-negative integers");
  }

  if (kv.contains("B1")) s.cfg.B1 = bits_of("B1");
  if (kv.contains("B2")) s.cfg.B2 = bits_of("B2");
  if (kv.contains("b")) {
    s.b = real_of("b");
    if (!(s.b > 1.0)) fail(kv.at("b").line, "b must exceed 1");
  }
  if (kv.contains("theta")) {
    s.theta = real_of("theta");
    if (!(s.theta > 0.0 && s.theta < 1.0)) fail(kv.at("theta").line, "theta must lie in the open interval (0, 1)");
  }
  s.cfg.trials = 20000;
  if (kv.contains("trials")) {
    s.cfg.trials = uint_of("trials");
    if (s.cfg.trials == 0) fail(kv.at("trials").line, "trials must be >= 1");
  }
  if (kv.contains("seed")) s.cfg.seed = uint_of("seed");
  if (kv.contains("output_dir")) s.output_dir = kv.at("output_dir").value;
  if (kv.contains("P1_dB")) s.p1_db = real_of("P1_dB");
  if (kv.contains("P2_dB")) s.p2_db = real_of("P2_dB");
  if (kv.contains("rvq")) {
    const Entry& e = kv.at("rvq");
    if (e.value == "auto") s.cfg.quantizer.backend = RvqBackend::automatic;
    else if (e.value == "codebook") s.cfg.quantizer.backend = RvqBackend::codebook;
    else if (e.value == "sampled") s.cfg.quantizer.backend = RvqBackend::sampled;
    else fail(e.line, "rvq must be auto, codebook or sampled");
  }
  if (kv.contains("modes")) {
    const Entry& e = kv.at("modes");
    s.modes.clear();
    for (auto m : split(e.value, ',')) {
      RunMode mode;
      if (m == "perfect") mode = RunMode::perfect;
      else if (m == "fixed" || m == "quantized_fixed") mode = RunMode::quantized_fixed;
      else if (m == "scaled" || m == "quantized_scaled") mode = RunMode::quantized_scaled;
      else fail(e.line, "unknown mode '" + std::string(m) + "'");
      if (std::find(s.modes.begin(), s.modes.end(), mode) != s.modes.end())
        fail(e.line, "mode listed twice");
      s.modes.push_back(mode);
    }
  }

  // Cross-key consistency.
  const bool bit_axis = s.axis == SweepAxis::b1 || s.axis == SweepAxis::b2;
  const std::size_t axis_line = kv.at("sweep_axis").line;
  if ((s.axis == SweepAxis::p1_db || bit_axis) && !s.p2_db) fail(axis_line, "this sweep axis needs P2_dB");
  if ((s.axis == SweepAxis::p2_db || bit_axis) && !s.p1_db) fail(axis_line, "this sweep axis needs P1_dB");
  const bool fixed = std::find(s.modes.begin(), s.modes.end(), RunMode::quantized_fixed) != s.modes.end();
  const bool scaled = std::find(s.modes.begin(), s.modes.end(), RunMode::quantized_scaled) != s.modes.end();
  if (scaled && bit_axis) fail(axis_line, "scaled bits cannot be combined with a bit sweep");
  if (fixed) {
    if (s.axis != SweepAxis::b1 && !kv.contains("B1")) throw ConfigError("modes include fixed bits but B1 is missing");
    if (s.axis != SweepAxis::b2 && !kv.contains("B2")) throw ConfigError("modes include fixed bits but B2 is missing");
  }
  if (bit_axis && !fixed) fail(axis_line, "a bit sweep needs the fixed mode");
  return s;
}

namespace {

struct PointSetup {
  double p1_db;
  double p2_db;
  FeedbackBits B1;
  FeedbackBits B2;
};

PointSetup point_setup(const Scenario& s, double x) {
  PointSetup p{s.p1_db.value_or(0.0), s.p2_db.value_or(0.0), s.cfg.B1, s.cfg.B2};
  switch (s.axis) {
    case SweepAxis::p1_db: p.p1_db = x; break;
    case SweepAxis::p2_db: p.p2_db = x; break;
    case SweepAxis::joint_db: p.p1_db = p.p2_db = x; break;
    case SweepAxis::b1: p.B1 = static_cast<unsigned>(x); break;
    case SweepAxis::b2: p.B2 = static_cast<unsigned>(x); break;
  }
  return p;
}

double real_bits(FeedbackBits b) { return b ? static_cast<double>(*b) : std::numeric_limits<double>::infinity(); }

// Seed for the bound's first-term estimator, kept apart from the rate draws.
constexpr std::uint64_t kFirstTermSeedSalt = 0x5eed'f1f5'7e2aULL;

ResultRow quantized_row(const SystemConfig& cfg, double x, RunMode mode, const PointSetup& p) {
  ResultRow row;
  row.sweep_value = x;
  row.mode = mode;
  row.M = cfg.M;
  row.N = cfg.N;
  row.P1_dB = p.p1_db;
  row.P2_dB = p.p2_db;
  row.B1_used = cfg.B1;
  row.B2_used = cfg.B2;
  const PairedRates pr = paired_rates(cfg);
  row.R_P = pr.perfect.mean;
  row.R_P_stderr = pr.perfect.std_error;
  row.R_Q = pr.quantized.mean;
  row.R_Q_stderr = pr.quantized.std_error;
  row.delta_R_per_user = pr.loss_per_user.mean;
  row.delta_R_stderr = pr.loss_per_user.std_error;
  row.bound_high_snr =
      rate_loss_bound_high_snr(cfg.M, cfg.N, cfg.P1, cfg.P2, real_bits(cfg.B1), real_bits(cfg.B2));
  double first = 0.0;
  if (cfg.B1) {
    first = rate_loss_bound_first_term(cfg.M, cfg.N, cfg.B1, cfg.trials, cfg.seed ^ kFirstTermSeedSalt,
                                       cfg.quantizer, cfg.threads)
                .term;
  }
  row.bound_full_est = first + *row.bound_high_snr;
  if (cfg.B1) row.R_U1 = ceiling_R_U1(cfg.M, cfg.N, *cfg.B1).value;
  if (cfg.B2) row.R_U2 = ceiling_R_U2(cfg.M, cfg.N, *cfg.B2).value;
  row.discards = pr.perfect.discards;
  row.discard_warning = pr.perfect.excessive_discards();
  return row;
}

}  // namespace

std::vector<ResultRow> run_scenario(const Scenario& s, std::ostream* log) {
  if (s.sweep.empty()) throw ConfigError("empty sweep");
  std::vector<ResultRow> rows;
  CsvTable plan_table{{}, {"sweep_value", "P1_dB", "P2_dB", "b", "theta", "alpha", "B1_exact", "B2_exact", "B1", "B2",
                           "clamped"}, {}};
  bool any_scaled = false;
  auto flush = [&]() {
    if (s.output_dir.empty()) return;
    std::vector<std::string> comments{"M=" + std::to_string(s.cfg.M) + " N=" + std::to_string(s.cfg.N) +
                                          " trials=" + std::to_string(s.cfg.trials) +
                                          " seed=" + std::to_string(s.cfg.seed) + " axis=" + to_string(s.axis),
                                      "b=" + format_double(s.b) + " theta=" + format_double(s.theta)};
    comments.insert(comments.end(), s.notes.begin(), s.notes.end());
    write_csv_file(s.output_dir / "results.csv", results_table(rows, comments));
    if (any_scaled) write_csv_file(s.output_dir / "bitplan.csv", plan_table);
  };

  try {
    for (double x : s.sweep) {
      const PointSetup p = point_setup(s, x);
      SystemConfig cfg = s.cfg;
      cfg.P1 = db_to_linear(p.p1_db);
      cfg.P2 = db_to_linear(p.p2_db);
      cfg.B1 = p.B1;
      cfg.B2 = p.B2;
      cfg.validate();
      for (RunMode mode : s.modes) {
        if (mode == RunMode::perfect) {
          const RateEstimate r = monte_carlo_rate(cfg, CsiMode::perfect);
          ResultRow row;
          row.sweep_value = x;
          row.mode = mode;
          row.M = cfg.M;
          row.N = cfg.N;
          row.P1_dB = p.p1_db;
          row.P2_dB = p.p2_db;
          row.R_P = r.mean;
          row.R_P_stderr = r.std_error;
          row.B1_used = kPerfectFeedback;
          row.B2_used = kPerfectFeedback;
          row.discards = r.discards;
          row.discard_warning = r.excessive_discards();
          rows.push_back(row);
        } else if (mode == RunMode::quantized_fixed) {
          rows.push_back(quantized_row(cfg, x, mode, p));
        } else {
          const BitPlan plan = scale_bits(cfg.M, cfg.N, cfg.P1, cfg.P2, s.b, s.theta);
          any_scaled = true;
          plan_table.rows.push_back({format_double(x), format_double(p.p1_db), format_double(p.p2_db),
                                     format_double(plan.b), format_double(plan.theta), format_double(plan.alpha),
                                     format_double(plan.B1_exact), format_double(plan.B2_exact),
                                     std::to_string(plan.B1), std::to_string(plan.B2), plan.clamped ? "1" : "0"});
          if (log) {
            *log << "bitplan " << to_string(s.axis) << '=' << format_double(x) << ": B1_exact="
                 << format_double(plan.B1_exact) << " B2_exact=" << format_double(plan.B2_exact) << " -> B1="
                 << plan.B1 << " B2=" << plan.B2 << (plan.clamped ? " (clamped)" : "") << '\n';
          }
          SystemConfig q = cfg;
          q.B1 = plan.B1;
          q.B2 = plan.B2;
          rows.push_back(quantized_row(q, x, mode, p));
        }
        if (log && rows.back().discard_warning)
          *log << "warning: more than 1% of draws discarded at " << format_double(x) << '\n';
      }
    }
  } catch (const std::exception& e) {
    if (!s.output_dir.empty()) {
      try {
        flush();
        std::filesystem::create_directories(s.output_dir);
        std::ofstream marker(s.output_dir / "PARTIAL");
        marker << "run aborted after " << rows.size() << " rows: " << e.what() << '\n';
      } catch (...) {
      }
    }
    throw;
  }
  flush();
  if (!s.output_dir.empty()) std::filesystem::remove(s.output_dir / "PARTIAL");
  return rows;
}

CsvTable results_table(const std::vector<ResultRow>& rows, std::vector<std::string> comments) {
  CsvTable t;
  t.comments = std::move(comments);
  t.header = {"sweep_value", "mode",     "M",          "N",      "P1_dB",          "P2_dB",
              "R_P",         "R_P_stderr", "R_Q",      "R_Q_stderr", "delta_R_per_user", "delta_R_stderr",
              "bound_high_snr", "bound_full_est", "R_U1", "R_U2",  "B1_used",        "B2_used",
              "discards",    "discard_warning"};
  auto bits = [](FeedbackBits b) { return b ? std::to_string(*b) : std::string("perfect"); };
  for (const ResultRow& r : rows) {
    t.rows.push_back({format_double(r.sweep_value), to_string(r.mode), std::to_string(r.M), std::to_string(r.N),
                      format_double(r.P1_dB), format_double(r.P2_dB), format_cell(r.R_P), format_cell(r.R_P_stderr),
                      format_cell(r.R_Q), format_cell(r.R_Q_stderr), format_cell(r.delta_R_per_user),
                      format_cell(r.delta_R_stderr), format_cell(r.bound_high_snr), format_cell(r.bound_full_est),
                      format_cell(r.R_U1), format_cell(r.R_U2), bits(r.B1_used), bits(r.B2_used),
                      std::to_string(r.discards), r.discard_warning ? "1" : "0"});
  }
  return t;
}

}  // namespace relaybc
