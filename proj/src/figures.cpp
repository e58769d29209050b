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

#include "relaybc/figures.hpp"

#include <fstream>
#include <map>
#include <stdexcept>
#include <string>

#include "relaybc/bounds.hpp"
#include "relaybc/csv.hpp"
#include "relaybc/ratesim.hpp"
#include "relaybc/scenario.hpp"

namespace relaybc {
namespace {

namespace fs = std::filesystem;

std::string fig_name(int id) { return "fig" + std::to_string(id); }

void write_script(const fs::path& path, const std::string& body) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot open " + path.string() + " for writing");
  out << "set datafile separator ','\n"
         "set datafile commentschars '#'\n"
         "set grid\n"
         "set key left top\n"
      << body;
}

std::vector<double> db_range(double lo, double step, double hi) {
  std::vector<double> v;
  for (double x = lo; x <= hi + 1e-9; x += step) v.push_back(x);
  return v;
}

SystemConfig base_cfg(std::size_t M, std::size_t N, const FigureOptions& o) {
  SystemConfig c;
  c.M = M;
  c.N = N;
  c.trials = o.trials;
  c.seed = o.seed;
  c.threads = o.threads;
  return c;
}

fs::path figure2(const FigureOptions& o, const fs::path& dir, std::ostream* log) {
  constexpr double kSnrDb = 25.0;
  SystemConfig cfg = base_cfg(4, 2, o);
  cfg.P1 = cfg.P2 = db_to_linear(kSnrDb);
  CsvTable t;
  t.comments = {"M=4 N=2 P1=P2=25 dB trials=" + std::to_string(o.trials) + " seed=" + std::to_string(o.seed)};
  t.header = {"B1", "B2", "delta_R", "delta_R_stderr", "bound_high_snr", "first_term", "first_term_stderr",
              "bound_full_est"};
  std::map<unsigned, FirstTermEstimate> first;
  for (unsigned b1 = 4; b1 <= 14; ++b1) {
    const auto ft = first.try_emplace(b1, rate_loss_bound_first_term(cfg.M, cfg.N, b1, o.trials, o.seed ^ 0xf1f2ULL,
                                                                     cfg.quantizer, o.threads)).first->second;
    for (unsigned b2 = 2; b2 <= 10; ++b2) {
      cfg.B1 = b1;
      cfg.B2 = b2;
      const RateEstimate loss = rate_loss(cfg);
      const double high = rate_loss_bound_high_snr(cfg);
      t.rows.push_back({std::to_string(b1), std::to_string(b2), format_double(loss.mean),
                        format_double(loss.std_error), format_double(high), format_double(ft.term),
                        format_double(ft.std_error()), format_double(ft.term + high)});
      if (log) *log << "fig2 B1=" << b1 << " B2=" << b2 << " dR=" << format_double(loss.mean) << '\n';
    }
  }
  const fs::path csv = dir / "fig2.csv";
  write_csv_file(csv, t);
  write_script(dir / "fig2.gp",
               "set xlabel 'B1 (bits)'\nset ylabel 'rate loss per user (b/s/Hz)'\n"
               "plot for [b2 in \"2 4 6 8 10\"] 'fig2.csv' using 1:($2==b2 ? $3 : 1/0) with linespoints "
               "title 'simulated, B2='.b2, \\\n"
               "     for [b2 in \"2 4 6 8 10\"] 'fig2.csv' using 1:($2==b2 ? $8 : 1/0) with lines dashtype 2 "
               "title 'bound, B2='.b2\n");
  return csv;
}

fs::path figure3(const FigureOptions& o, const fs::path& dir, std::ostream* log) {
  struct Curve {
    std::string name;
    FeedbackBits B1;
    FeedbackBits B2;
  };
  const std::vector<Curve> curves{{"perfect", kPerfectFeedback, kPerfectFeedback},
                                  {"B1=6", 6u, kPerfectFeedback},
                                  {"B1=9", 9u, kPerfectFeedback},
                                  {"B2=2", kPerfectFeedback, 2u},
                                  {"B2=4", kPerfectFeedback, 4u}};
  CsvTable t;
  t.comments = {"M=4 N=2 P1=P2 swept trials=" + std::to_string(o.trials) + " seed=" + std::to_string(o.seed),
                "rate_norm = (2/N) R; ceiling applies to rate_norm"};
  t.header = {"snr_dB", "curve", "B1", "B2", "rate", "rate_stderr", "rate_norm", "rate_norm_stderr", "ceiling"};
  auto bits = [](FeedbackBits b) { return b ? std::to_string(*b) : std::string("perfect"); };
  for (const Curve& c : curves) {
    std::optional<double> ceiling;
    if (c.B1) ceiling = ceiling_R_U1(4, 2, *c.B1).value;
    if (c.B2) ceiling = ceiling_R_U2(4, 2, *c.B2).value;
    for (double db : db_range(0.0, 5.0, 60.0)) {
      SystemConfig cfg = base_cfg(4, 2, o);
      cfg.P1 = cfg.P2 = db_to_linear(db);
      cfg.B1 = c.B1;
      cfg.B2 = c.B2;
      const bool perfect = !c.B1 && !c.B2;
      const RateEstimate r = monte_carlo_rate(cfg, perfect ? CsiMode::perfect : CsiMode::quantized);
      const double scale = 2.0 / static_cast<double>(cfg.N);
      t.rows.push_back({format_double(db), c.name, bits(c.B1), bits(c.B2), format_double(r.mean),
                        format_double(r.std_error), format_double(scale * r.mean),
                        format_double(scale * r.std_error), format_cell(ceiling)});
      if (log) *log << "fig3 " << c.name << " " << db << " dB R=" << format_double(r.mean) << '\n';
    }
  }
  const fs::path csv = dir / "fig3.csv";
  write_csv_file(csv, t);
  write_script(dir / "fig3.gp",
               "set xlabel 'P1 = P2 (dB)'\nset ylabel '(2/N) sum rate (b/s/Hz)'\n"
               "plot for [c in \"perfect B1=6 B1=9 B2=2 B2=4\"] 'fig3.csv' "
               "using 1:(strcol(2) eq c ? $7 : 1/0) with linespoints title c, \\\n"
               "     for [c in \"B1=6 B1=9 B2=2 B2=4\"] 'fig3.csv' "
               "using 1:(strcol(2) eq c ? $9 : 1/0) with lines dashtype 2 title c.' ceiling'\n");
  return csv;
}

// Runs a scenario into `dir` and renames its results.csv to figN.csv.
fs::path scenario_figure(int id, Scenario s, const fs::path& dir, std::ostream* log, const std::string& xlabel) {
  s.output_dir = dir;
  run_scenario(s, log);
  const fs::path csv = dir / (fig_name(id) + ".csv");
  fs::rename(dir / "results.csv", csv);
  const std::string file = fig_name(id) + ".csv";
  write_script(dir / (fig_name(id) + ".gp"),
               "set xlabel '" + xlabel + "'\nset ylabel 'sum rate (b/s/Hz)'\n"
               "plot '" + file + "' using 1:(strcol(2) eq 'perfect' ? $7 : 1/0) with linespoints title 'perfect CSI', \\\n"
               "     '" + file + "' using 1:(strcol(2) eq 'quantized_scaled' ? $9 : 1/0) with linespoints title 'scaled B1, B2', \\\n"
               "     '" + file + "' using 1:(strcol(2) eq 'quantized_fixed' ? $9 : 1/0) with linespoints title 'fixed B1, B2'\n");
  return csv;
}

// Fixed bits equal the scaled plan at the 15 dB midpoint of the sweep.
Scenario comparison_scenario(std::size_t M, std::size_t N, SweepAxis axis, std::optional<double> p1_db,
                             std::optional<double> p2_db, const FigureOptions& o) {
  Scenario s;
  s.cfg = base_cfg(M, N, o);
  s.axis = axis;
  s.sweep = db_range(0.0, 5.0, 30.0);
  s.modes = {RunMode::perfect, RunMode::quantized_scaled, RunMode::quantized_fixed};
  s.p1_db = p1_db;
  s.p2_db = p2_db;
  const double mid = 15.0;
  const BitPlan plan = scale_bits(M, N, db_to_linear(p1_db.value_or(mid)), db_to_linear(p2_db.value_or(mid)), s.b,
                                  s.theta);
  s.cfg.B1 = plan.B1;
  s.cfg.B2 = plan.B2;
  s.notes.push_back("fixed bits B1=" + std::to_string(plan.B1) + " B2=" + std::to_string(plan.B2) +
                    " (scaled plan at the 15 dB sweep midpoint)");
  return s;
}

fs::path figure4(const FigureOptions& o, const fs::path& dir, std::ostream* log) {
  std::vector<ResultRow> rows;
  std::vector<std::string> notes{"M=4, N in {2,4}, P1=P2 swept trials=" + std::to_string(o.trials) +
                                 " seed=" + std::to_string(o.seed)};
  for (std::size_t n : {2u, 4u}) {
    Scenario s = comparison_scenario(4, n, SweepAxis::joint_db, std::nullopt, std::nullopt, o);
    s.modes = {RunMode::perfect, RunMode::quantized_fixed};
    s.output_dir.clear();
    notes.push_back("N=" + std::to_string(n) + ": " + s.notes.back());
    const auto r = run_scenario(s, log);
    rows.insert(rows.end(), r.begin(), r.end());
  }
  const fs::path csv = dir / "fig4.csv";
  write_csv_file(csv, results_table(rows, notes));
  write_script(dir / "fig4.gp",
               "set xlabel 'P1 = P2 (dB)'\nset ylabel 'sum rate (b/s/Hz)'\n"
               "plot for [n in \"2 4\"] 'fig4.csv' using 1:((strcol(2) eq 'perfect' && $4==n) ? $7 : 1/0) "
               "with linespoints title 'perfect CSI, N='.n, \\\n"
               "     for [n in \"2 4\"] 'fig4.csv' using 1:((strcol(2) eq 'quantized_fixed' && $4==n) ? $9 : 1/0) "
               "with linespoints title 'quantized, N='.n\n");
  return csv;
}

}  // namespace

const std::vector<int>& figure_ids() {
  static const std::vector<int> ids{2, 3, 4, 5, 6, 7, 8};
  return ids;
}

fs::path reproduce_figure(int id, const FigureOptions& opts, std::ostream* log) {
  if (opts.trials == 0) throw std::invalid_argument("figure: trials must be >= 1");
  const fs::path dir = opts.out_dir / fig_name(id);
  switch (id) {
    case 2: fs::create_directories(dir); return figure2(opts, dir, log);
    case 3: fs::create_directories(dir); return figure3(opts, dir, log);
    case 4: fs::create_directories(dir); return figure4(opts, dir, log);
    case 5:
      return scenario_figure(5, comparison_scenario(4, 2, SweepAxis::joint_db, std::nullopt, std::nullopt, opts), dir,
                             log, "P1 = P2 (dB)");
    case 6:
      return scenario_figure(6, comparison_scenario(4, 4, SweepAxis::joint_db, std::nullopt, std::nullopt, opts), dir,
                             log, "P1 = P2 (dB)");
    case 7:
      return scenario_figure(7, comparison_scenario(4, 2, SweepAxis::p2_db, 10.0, std::nullopt, opts), dir, log,
                             "P2 (dB), P1 = 10 dB");
    case 8:
      return scenario_figure(8, comparison_scenario(4, 2, SweepAxis::p1_db, std::nullopt, 20.0, opts), dir, log,
                             "P1 (dB), P2 = 20 dB");
    default: throw std::invalid_argument("unknown figure id " + std::to_string(id) + " (expected 2-8)");
  }
}

}  // namespace relaybc
