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

// Acceptance gate. Prints one PASS/FAIL line per criterion and exits
// nonzero if any criterion fails. Thresholds are fixed; nothing here is
// tuned to the observed numbers.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <random>
#include <sstream>
#include <string>
#include <vector>

#include "oracles.hpp"
#include "relaybc/bounds.hpp"
#include "relaybc/cmatrix.hpp"
#include "relaybc/precoder.hpp"
#include "relaybc/quantizer.hpp"
#include "relaybc/ratesim.hpp"
#include "relaybc/scenario.hpp"

using namespace relaybc;

namespace {

constexpr std::size_t kTrials = 20000;    // paired trials per point
constexpr std::size_t kStatSamples = 100000;
constexpr double kSigmas = 3.0;
constexpr std::uint64_t kSeed = 20240601;

int g_failures = 0;

void report(const std::string& id, bool pass, const std::string& what) {
  std::cout << (pass ? "PASS  " : "FAIL  ") << id << "  " << what << std::endl;
  if (!pass) ++g_failures;
}

std::string fmt(double x, int prec = 4) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.*g", prec, x);
  return buf;
}

// Running mean and standard error.
struct Acc {
  double n = 0.0, s = 0.0, ss = 0.0;
  void add(double x) {
    n += 1.0;
    s += x;
    ss += x * x;
  }
  double mean() const { return s / n; }
  double se() const { return std::sqrt(std::max(0.0, ss / n - mean() * mean()) / (n - 1.0)); }
};

SystemConfig make_cfg(std::size_t M, std::size_t N, double p1_db, double p2_db, FeedbackBits B1, FeedbackBits B2) {
  SystemConfig c;
  c.M = M;
  c.N = N;
  c.P1 = db_to_linear(p1_db);
  c.P2 = db_to_linear(p2_db);
  c.B1 = B1;
  c.B2 = B2;
  c.trials = kTrials;
  c.seed = kSeed;
  return c;
}

// 1. Scaled feedback keeps the overall loss within N/2 * log2 b.
void criterion1() {
  struct Case {
    std::size_t M, N;
    double budget;
  };
  for (const Case& c : {Case{4, 2, 1.0}, Case{4, 4, 2.0}}) {
    bool pass = true;
    std::ostringstream pts;
    for (double db = 0.0; db <= 30.0; db += 5.0) {
      const BitPlan plan = scale_bits(c.M, c.N, db_to_linear(db), db_to_linear(db), 2.0, 0.5);
      const PairedRates pr = paired_rates(make_cfg(c.M, c.N, db, db, plan.B1, plan.B2));
      const double n = static_cast<double>(c.N);
      const double loss = n * pr.loss_per_user.mean;
      const double se = n * pr.loss_per_user.std_error;
      pass = pass && loss <= c.budget + kSigmas * se;
      pts << ' ' << fmt(db, 3) << "dB:" << fmt(loss, 3) << "(B=" << plan.B1 << ',' << plan.B2 << ')';
    }
    report("C1", pass,
           "rate-loss control M=" + std::to_string(c.M) + " N=" + std::to_string(c.N) + ", N*dR <= " +
               fmt(c.budget, 2) + " + 3se at 0..30 dB; N*dR =" + pts.str());
  }
}

// 2. Simulated loss under the full bound on the (B1, B2) grid; gap shrinks
// along B1.
void criterion2() {
  const double db = 25.0;
  bool valid = true, tight = true;
  double min_slack = INFINITY;
  std::string worst;
  std::vector<FirstTermEstimate> first;
  for (unsigned b1 = 4; b1 <= 14; ++b1)
    first.push_back(rate_loss_bound_first_term(4, 2, b1, kTrials, kSeed + 1));
  for (unsigned b2 = 2; b2 <= 10; ++b2) {
    double prev_gap = NAN, prev_se = 0.0;
    for (unsigned b1 = 4; b1 <= 14; ++b1) {
      const SystemConfig cfg = make_cfg(4, 2, db, db, b1, b2);
      const RateEstimate loss = rate_loss(cfg);
      const FirstTermEstimate& ft = first[b1 - 4];
      const double bound = ft.term + rate_loss_bound_high_snr(cfg);
      const double se = std::hypot(loss.std_error, ft.std_error());
      const double slack = bound - loss.mean + kSigmas * se;
      if (slack < min_slack) {
        min_slack = slack;
        worst = "B1=" + std::to_string(b1) + ",B2=" + std::to_string(b2);
      }
      valid = valid && slack >= 0.0;
      const double gap = bound - loss.mean;
      if (!std::isnan(prev_gap) && gap > prev_gap + kSigmas * std::hypot(se, prev_se)) tight = false;
      prev_gap = gap;
      prev_se = se;
    }
  }
  report("C2a", valid,
         "bound validity at 25 dB over B1=4..14 x B2=2..10: smallest (bound - dR + 3se) = " + fmt(min_slack) + " at " +
             worst);
  report("C2b", tight, "bound-minus-simulation gap non-increasing in B1 at every B2 (3 sigma slack)");
}

// 3. Interference-limited ceilings at 60 dB and flattening from 30 to 60 dB.
void criterion3() {
  struct Curve {
    std::string name;
    FeedbackBits B1, B2;
  };
  const std::vector<Curve> curves{{"B2=2", kPerfectFeedback, 2u},
                                  {"B2=4", kPerfectFeedback, 4u},
                                  {"B1=6", 6u, kPerfectFeedback},
                                  {"B1=9", 9u, kPerfectFeedback}};
  const std::vector<double> snr{30.0, 40.0, 50.0, 60.0};
  for (const Curve& c : curves) {
    std::vector<RateEstimate> r;
    for (double db : snr) r.push_back(monte_carlo_rate(make_cfg(4, 2, db, db, c.B1, c.B2), CsiMode::quantized));
    const double scale = 2.0 / 2.0;  // (2/N) R with N = 2
    const double ceiling = c.B1 ? ceiling_R_U1(4, 2, *c.B1).value : ceiling_R_U2(4, 2, *c.B2).value;
    const double top = scale * r.back().mean;
    const bool under = top <= ceiling + kSigmas * scale * r.back().std_error;
    bool monotone = true;
    for (std::size_t i = 1; i < r.size(); ++i)
      monotone = monotone && r[i].mean >= r[i - 1].mean - kSigmas * std::hypot(r[i].std_error, r[i - 1].std_error);
    const double first_step = r[1].mean - r[0].mean;
    const double last_step = r[3].mean - r[2].mean;
    const double step_se = std::hypot(std::hypot(r[1].std_error, r[0].std_error), std::hypot(r[3].std_error, r[2].std_error));
    const bool flattening = last_step <= first_step + kSigmas * step_se;
    report("C3", under && monotone && flattening,
           c.name + ": (2/N)R_Q@60dB = " + fmt(top) + " vs ceiling " + fmt(ceiling) + "; R_Q 30/40/50/60 dB = " +
               fmt(r[0].mean) + "/" + fmt(r[1].mean) + "/" + fmt(r[2].mean) + "/" + fmt(r[3].mean) +
               (monotone ? "" : " [not monotone]") + (flattening ? "" : " [not flattening]"));
  }
}

// 4. Closed-form identities.
void criterion4() {
  std::mt19937_64 eng(kSeed);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  for (int i = 0; i < 100; ++i) {
    const std::size_t n = 2 + eng() % 5;
    const std::size_t m = n + eng() % 5;
    const double p1 = std::pow(10.0, 5.0 * u(eng)), p2 = std::pow(10.0, 5.0 * u(eng));
    const double b = 1.05 + 10.0 * u(eng), theta = 0.01 + 0.98 * u(eng);
    const BitPlan plan = scale_bits(m, n, p1, p2, b, theta);
    worst = std::max(worst, std::abs(rate_loss_bound_high_snr(m, n, p1, p2, plan.B1_exact, plan.B2_exact) -
                                     0.5 * std::log2(b)));
  }
  report("C4a", worst <= 1e-9, "bit-plan closure over 100 random tuples: max |bound - log2(b)/2| = " + fmt(worst));

  double theta_err = 0.0;
  for (std::size_t m = 2; m <= 6; ++m)
    for (std::size_t n = 2; n <= m; ++n)
      theta_err = std::max(theta_err, std::abs(optimal_theta(m, n) - oracle::theta_grid_argmax(m, n)));
  report("C4b", theta_err <= 1e-4, "optimal split vs 10^4-point grid argmax, 2<=N<=M<=6: max diff = " + fmt(theta_err));

  double lim_err = 0.0;
  for (double p2_db : {0.0, 10.0, 20.0, 30.0, 40.0})
    for (double b : {1.5, 2.0, 4.0})
      for (auto [m, n] : {std::pair<std::size_t, std::size_t>{4, 2}, {4, 4}, {6, 3}})
        lim_err = std::max(lim_err, std::abs(b1_limit(m, n, db_to_linear(p2_db), b) -
                                             scale_bits(m, n, 1e12, db_to_linear(p2_db), b, 0.5).B1_exact));
  report("C4c", lim_err <= 1e-6, "large-P1 limit of B1 vs scale_bits at P1=1e12: max diff = " + fmt(lim_err));

  const double c_ref = std::log2(4.0 / 2.0) - 1.0 / std::log(2.0) / 2.0 * (oracle::digamma(4.0) + oracle::digamma(3.0));
  const double c = ceiling_constant(4, 2);
  report("C4d", std::abs(c - c_ref) <= 1e-9 && std::abs(c + 0.5718) < 1e-4,
         "ceiling constant c(4,2) = " + fmt(c, 10) + " vs digamma oracle " + fmt(c_ref, 10));
}

// 5. Quantization statistics.
void criterion5() {
  const auto t0 = std::chrono::steady_clock::now();
  constexpr std::size_t M = 4, N = 2;
  constexpr unsigned B1 = 6, B2 = 3;
  const double eps_bar = oracle::rvq_mean_error(M, B1);
  RngStream rng(kSeed, 5);

  // Cross-alignment, matrix mean of Q, eigenvalues of the rank-two difference.
  Acc cross, q_diag, q_off_re;
  double lemma3_err = 0.0;
  for (std::size_t i = 0; i < kStatSamples; ++i) {
    const ComplexMatrix v = thin_svd(sample_gaussian_matrix(N, M, rng)).V;
    ComplexMatrix vq(M, N);
    std::vector<double> errs;
    for (std::size_t k = 0; k < N; ++k) {
      const QuantizationResult q = quantize_direction(v.column(k), B1, {}, rng);
      vq.set_column(k, q.codeword);
      errs.push_back(q.error);
    }
    cross.add(std::norm(inner(v.column(0), vq.column(1))));
    const ComplexMatrix a = vq.adjoint() * v;
    const ComplexMatrix q = a.adjoint() * a;
    q_diag.add(q(0, 0).real());
    q_off_re.add(q(0, 1).real());
    // v v^H - vq vq^H has eigenvalues +-sqrt(eps) and zeros.
    const CVector c0 = v.column(0), h0 = vq.column(0);
    ComplexMatrix d(M, M);
    for (std::size_t r = 0; r < M; ++r)
      for (std::size_t s = 0; s < M; ++s) d(r, s) = c0[r] * std::conj(c0[s]) - h0[r] * std::conj(h0[s]);
    const HermitianEigen e = eigen_hermitian(d);
    const double root = std::sqrt(errs[0]);
    lemma3_err = std::max({lemma3_err, std::abs(e.values.front() + root), std::abs(e.values.back() - root)});
  }
  const double cross_ref = eps_bar / (M - 1.0);
  report("C5a", std::abs(cross.mean() - cross_ref) <= kSigmas * cross.se(),
         "E|v_i^H vq_j|^2 = " + fmt(cross.mean(), 6) + " vs eps/(M-1) = " + fmt(cross_ref, 6) + " (se " +
             fmt(cross.se(), 3) + ")");
  const double q_ref = 1.0 - (M - N) / (M - 1.0) * eps_bar;
  report("C5b",
         std::abs(q_diag.mean() - q_ref) <= kSigmas * q_diag.se() && std::abs(q_off_re.mean()) <= kSigmas * q_off_re.se(),
         "E[Q] diagonal = " + fmt(q_diag.mean(), 6) + " vs " + fmt(q_ref, 6) + ", off-diagonal = " +
             fmt(q_off_re.mean(), 3));
  report("C5c", lemma3_err <= 1e-9, "eigenvalues of v v^H - vq vq^H equal +-sqrt(eps): max error " + fmt(lemma3_err));

  // Effective gains through the quantized ZF relay precoder.
  Acc own, leak_minus_tau;
  const double nd = static_cast<double>(N);
  for (std::size_t i = 0; i < kStatSamples; ++i) {
    const ComplexMatrix g = sample_gaussian_matrix(N, N, rng);
    std::vector<CVector> dirs;
    std::vector<double> tau;
    for (std::size_t k = 0; k < N; ++k) {
      const QuantizationResult q = quantize_direction(user_direction(g, k), B2, {}, rng);
      dirs.push_back(q.codeword);
      tau.push_back(q.error);
    }
    ComplexMatrix f;
    try {
      f = zf_beamformers(dirs);
    } catch (const NumericalFailure&) {
      continue;
    }
    CVector g0 = g.row(0);
    for (auto& z : g0) z = std::conj(z);
    own.add(std::norm(inner(g0, f.column(0))));
    leak_minus_tau.add(std::norm(inner(g0, f.column(1))) - nd / (nd - 1.0) * tau[0]);
  }
  report("C5d", std::abs(own.mean() - 1.0) <= kSigmas * own.se(),
         "E|g_k^H fq_k|^2 = " + fmt(own.mean(), 6) + " vs 1 (se " + fmt(own.se(), 3) + ")");
  report("C5e", std::abs(leak_minus_tau.mean()) <= kSigmas * leak_minus_tau.se(),
         "E|g_k^H fq_j|^2 - N/(N-1) tau = " + fmt(leak_minus_tau.mean(), 3) + " (se " + fmt(leak_minus_tau.se(), 3) + ")");

  // Log-eigenvalue moment of the first hop.
  Acc logdet;
  for (std::size_t i = 0; i < kStatSamples; ++i) {
    const ThinSVD s = thin_svd(sample_gaussian_matrix(N, M, rng));
    double acc = 0.0;
    for (double x : s.sigma) acc += std::log2(x * x);
    logdet.add(acc / nd);
  }
  double psi = 0.0;
  for (std::size_t k = 0; k < N; ++k) psi += oracle::digamma(static_cast<double>(M - k));
  const double logdet_ref = psi / std::log(2.0) / nd;
  report("C5f", std::abs(logdet.mean() - logdet_ref) <= kSigmas * logdet.se(),
         "E[(1/N) sum log2 sigma_k^2] = " + fmt(logdet.mean(), 6) + " vs " + fmt(logdet_ref, 6));
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  report("C5g", secs < 120.0, "quantization statistics runtime " + fmt(secs, 3) + " s (limit 120 s)");
}

// 6. Structural invariants.
void criterion6() {
  oracle::Gen gen(kSeed);
  double svd_err = 0.0, zf_leak = 0.0, route_err = 0.0;
  RngStream rng(kSeed, 6);
  for (int i = 0; i < 20000; ++i) {
    const std::size_t n = gen.integer(2, 4), m = gen.integer(n, 6);
    const ComplexMatrix h = gen.matrix(n, m), g = gen.matrix(n, n);
    const ThinSVD s = thin_svd(h);
    svd_err = std::max({svd_err,
                        max_abs_diff(s.U * ComplexMatrix::diagonal(s.sigma) * s.V.adjoint(), h) / h.frobenius_norm(),
                        max_abs_diff(s.U.adjoint() * s.U, ComplexMatrix::identity(n)),
                        max_abs_diff(s.V.adjoint() * s.V, ComplexMatrix::identity(n))});
    SystemConfig cfg = make_cfg(m, n, gen.uniform(0, 40), gen.uniform(0, 40), static_cast<unsigned>(gen.integer(0, 12)),
                                static_cast<unsigned>(gen.integer(0, 8)));
    try {
      const PrecodingSet p = build_perfect(h, g, cfg);
      const PrecodingSet q = build_quantized(h, g, cfg, rng);
      const ComplexMatrix fhat = q.F * s.U;
      for (std::size_t k = 0; k < n; ++k) {
        const double own = std::abs(inner(q.g_hat[k], fhat.column(k)));
        for (std::size_t j = 0; j < n; ++j)
          if (j != k) zf_leak = std::max(zf_leak, std::abs(inner(q.g_hat[k], fhat.column(j))) / own);
      }
      const auto gp = sinr_all(h, g, p), gq = sinr_all(h, g, q);
      for (std::size_t k = 0; k < n; ++k) {
        route_err = std::max(route_err, std::abs(sinr_perfect_closed_form(k, h, g, p) - gp[k]) / std::max(1.0, gp[k]));
        route_err = std::max(route_err, std::abs(sinr_quantized_structured(k, h, g, q) - gq[k]) / std::max(1.0, gq[k]));
      }
    } catch (const NumericalFailure&) {
    }
  }
  report("C6a", svd_err <= 1e-9, "SVD reconstruction/unitarity over 2e4 random shapes: max error " + fmt(svd_err));
  report("C6b", zf_leak <= 1e-9, "ZF nulling on quantized G: max |ghat_k^H f_j| / |ghat_k^H f_k| = " + fmt(zf_leak));
  report("C6c", route_err <= 1e-9, "general SINR vs structured perfect/quantized forms: max rel diff " + fmt(route_err));

  // Average relay power.
  const SystemConfig pc = make_cfg(4, 2, 10.0, 13.0, kPerfectFeedback, kPerfectFeedback);
  const PowerScalars rho = power_scalars(pc);
  Acc power;
  for (std::size_t i = 0; i < kStatSamples; ++i) {
    const ComplexMatrix h = gen.matrix(2, 4), g = gen.matrix(2, 2);
    const PrecodingSet ps = build_perfect(h, g, pc);
    const double sig = (ps.F * h * ps.W).frobenius_norm();
    const double nse = ps.F.frobenius_norm();
    power.add(rho.rho2 * (rho.rho1 * sig * sig + nse * nse));
  }
  report("C6d", std::abs(power.mean() / pc.P2 - 1.0) <= 0.01,
         "average relay power / P2 = " + fmt(power.mean() / pc.P2, 6) + " (tolerance 1%)");

  // Lossless feedback through the full codebook search.
  SystemConfig zc = make_cfg(4, 2, 20.0, 20.0, 12u, 12u);
  zc.quantizer.inject_truth = true;
  zc.trials = 5000;
  const PairedSamples z = simulate_paired(zc);
  std::size_t mismatches = 0;
  for (std::size_t i = 0; i < z.perfect.size(); ++i) mismatches += z.perfect[i] != z.quantized[i];
  report("C6e", mismatches == 0, "injected zero-error codebooks: realizations with nonzero loss = " + std::to_string(mismatches));

  // Bit-identical results across thread counts, including CSV bytes.
  SystemConfig dc = make_cfg(4, 2, 15.0, 15.0, 7u, 4u);
  dc.trials = 3000;
  bool same = true;
  dc.threads = 1;
  const PairedSamples ref = simulate_paired(dc);
  for (unsigned t : {2u, 4u, 7u}) {
    dc.threads = t;
    const PairedSamples other = simulate_paired(dc);
    same = same && other.perfect == ref.perfect && other.quantized == ref.quantized;
  }
  const std::filesystem::path dir = std::filesystem::temp_directory_path() / "relaybc_acceptance_csv";
  std::string first_csv;
  for (unsigned t : {1u, 3u}) {
    Scenario s = parse_config("M = 4\nN = 2\nsweep_axis = joint_dB\nsweep_values = 0:10:30\nmodes = perfect, scaled\n"
                              "trials = 500\n");
    s.cfg.threads = t;
    s.output_dir = dir;
    run_scenario(s);
    std::ifstream in(dir / "results.csv", std::ios::binary);
    std::stringstream text;
    text << in.rdbuf();
    if (t == 1) first_csv = text.str();
    else same = same && text.str() == first_csv;
  }
  std::filesystem::remove_all(dir);
  report("C6f", same, "bit-identical samples and CSV across 1-7 worker threads");
}

}  // namespace

int main() {
  const auto t0 = std::chrono::steady_clock::now();
  try {
    criterion4();
    criterion5();
    criterion6();
    criterion1();
    criterion3();
    criterion2();
  } catch (const std::exception& e) {
    std::cout << "FAIL  acceptance run aborted: " << e.what() << std::endl;
    return 1;
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  std::cout << (g_failures == 0 ? "ALL CRITERIA PASSED" : std::to_string(g_failures) + " CRITERIA FAILED") << " ("
            << fmt(secs, 3) << " s)" << std::endl;
  return g_failures == 0 ? 0 : 1;
}
