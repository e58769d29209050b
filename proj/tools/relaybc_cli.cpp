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

// relaybc: command-line front end for the relay broadcast simulator.
//
// Exit status: 0 success, 1 usage or configuration error, 2 numerical failure.

#include <CLI11.hpp>

#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>

#include "relaybc/bounds.hpp"
#include "relaybc/csv.hpp"
#include "relaybc/figures.hpp"
#include "relaybc/scenario.hpp"
#include "relaybc/selftest.hpp"

namespace {

using namespace relaybc;

constexpr int kExitUsage = 1;
constexpr int kExitNumerical = 2;

FeedbackBits parse_bits(const std::string& text, const char* name) {
  if (text == "perfect" || text == "inf") return kPerfectFeedback;
  std::size_t used = 0;
  unsigned long v = 0;
  try {
    v = std::stoul(text, &used);
  } catch (const std::exception&) {
    used = 0;
  }
  if (used != text.size() || v > 1000) throw ConfigError(std::string(name) + " must be a bit count or 'perfect'");
  return static_cast<unsigned>(v);
}

double real_bits(FeedbackBits b) { return b ? static_cast<double>(*b) : std::numeric_limits<double>::infinity(); }

void print(const std::string& key, double value) { std::cout << key << ',' << format_double(value) << '\n'; }

struct Args {
  std::string config_path;
  std::size_t M = 4, N = 2;
  double p1_db = 0.0, p2_db = 0.0;
  std::string b1 = "perfect", b2 = "perfect";
  double b = 2.0, theta = 0.5;
  std::size_t trials = 20000;
  std::uint64_t seed = 1;
  unsigned threads = 0;
  int figure = 0;
  std::string out = "figures";
};

int cmd_simulate(const Args& a) {
  std::ifstream in(a.config_path);
  if (!in) throw ConfigError("cannot read config file " + a.config_path);
  std::stringstream text;
  text << in.rdbuf();
  Scenario s = parse_config(text.str());
  s.cfg.threads = a.threads;
  const auto rows = run_scenario(s, &std::cerr);
  write_csv(std::cout, results_table(rows));
  return 0;
}

int cmd_bounds(const Args& a) {
  const FeedbackBits B1 = parse_bits(a.b1, "B1");
  const FeedbackBits B2 = parse_bits(a.b2, "B2");
  SystemConfig cfg;
  cfg.M = a.M;
  cfg.N = a.N;
  cfg.P1 = db_to_linear(a.p1_db);
  cfg.P2 = db_to_linear(a.p2_db);
  cfg.B1 = B1;
  cfg.B2 = B2;
  cfg.validate();
  const PowerScalars ps = power_scalars(cfg);
  std::cout << "quantity,value\n";
  print("rho1", ps.rho1);
  print("rho2", ps.rho2);
  const double high = rate_loss_bound_high_snr(cfg.M, cfg.N, cfg.P1, cfg.P2, real_bits(B1), real_bits(B2));
  print("bound_high_snr", high);
  if (B1) {
    const FirstTermEstimate ft = rate_loss_bound_first_term(cfg.M, cfg.N, B1, a.trials, a.seed, {}, a.threads);
    print("first_term", ft.term);
    print("first_term_stderr", ft.std_error());
    print("bound_full_est", ft.term + high);
    print("R_U1", ceiling_R_U1(cfg.M, cfg.N, *B1).value);
  } else {
    print("bound_full_est", high);
  }
  if (B2) print("R_U2", ceiling_R_U2(cfg.M, cfg.N, *B2).value);
  print("ceiling_constant", ceiling_constant(cfg.M, cfg.N));
  return 0;
}

int cmd_scale_bits(const Args& a) {
  const double p1 = db_to_linear(a.p1_db);
  const double p2 = db_to_linear(a.p2_db);
  const BitPlan plan = scale_bits(a.M, a.N, p1, p2, a.b, a.theta);
  std::cout << "quantity,value\n";
  print("B1_exact", plan.B1_exact);
  print("B2_exact", plan.B2_exact);
  std::cout << "B1," << plan.B1 << "\nB2," << plan.B2 << '\n';
  print("alpha", plan.alpha);
  print("sum_feedback", sum_feedback(a.M, a.N, p1, p2, a.b, a.theta));
  const BitsDbApprox approx = bits_db_approx(a.M, a.N, p1, a.p2_db, a.b);
  print("B1_db_rule", approx.B1);
  print("B2_db_rule", approx.B2);
  std::cout << "clamped," << (plan.clamped ? 1 : 0) << '\n';
  return 0;
}

int cmd_theta_opt(const Args& a) {
  std::cout << format_double(optimal_theta(a.M, a.N)) << '\n';
  return 0;
}

int cmd_figure(const Args& a) {
  FigureOptions o;
  o.out_dir = a.out;
  o.trials = a.trials;
  o.seed = a.seed;
  o.threads = a.threads;
  std::cout << reproduce_figure(a.figure, o, &std::cerr).string() << '\n';
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-hop MIMO relay broadcast simulator with quantized feedback"};
  app.require_subcommand(1);
  Args a;
  app.add_option("--threads", a.threads, "Worker threads (0: all cores)");

  auto* sim = app.add_subcommand("simulate", "Run a sweep described by a config file; CSV on stdout");
  sim->add_option("config", a.config_path, "Config file")->required();

  auto add_system = [&](CLI::App* c) {
    c->add_option("--M", a.M, "BS antennas")->required();
    c->add_option("--N", a.N, "Relay antennas (= users)")->required();
  };
  auto add_powers = [&](CLI::App* c) {
    c->add_option("--P1-dB", a.p1_db, "BS power (dB)")->required();
    c->add_option("--P2-dB", a.p2_db, "Relay power (dB)")->required();
  };

  auto* bounds = app.add_subcommand("bounds", "Rate-loss bounds and interference ceilings");
  add_system(bounds);
  add_powers(bounds);
  bounds->add_option("--B1", a.b1, "Bits per column of V, or 'perfect'");
  bounds->add_option("--B2", a.b2, "Bits per user channel, or 'perfect'");
  bounds->add_option("--trials", a.trials, "Monte Carlo trials for the B1 term");
  bounds->add_option("--seed", a.seed, "Seed");

  auto* scale = app.add_subcommand("scale-bits", "Feedback bits that hold the loss at (1/2) log2 b");
  add_system(scale);
  add_powers(scale);
  scale->add_option("--b", a.b, "Loss budget parameter b > 1")->required();
  scale->add_option("--theta", a.theta, "Split parameter in (0, 1)");

  auto* theta = app.add_subcommand("theta-opt", "Split minimizing total feedback");
  add_system(theta);

  auto* fig = app.add_subcommand("figure", "Regenerate a figure as CSV plus gnuplot script");
  fig->add_option("id", a.figure, "Figure id (2-8)")->required();
  fig->add_option("--out", a.out, "Output directory");
  fig->add_option("--trials", a.trials, "Monte Carlo trials per point");
  fig->add_option("--seed", a.seed, "Seed");

  auto* self = app.add_subcommand("selftest", "Run the quick invariant battery");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? 0 : kExitUsage;
  }

  try {
    if (*sim) return cmd_simulate(a);
    if (*bounds) return cmd_bounds(a);
    if (*scale) return cmd_scale_bits(a);
    if (*theta) return cmd_theta_opt(a);
    if (*fig) return cmd_figure(a);
    if (*self) return run_selftest(std::cout) == 0 ? 0 : kExitNumerical;
  } catch (const NumericalFailure& e) {
    std::cerr << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
