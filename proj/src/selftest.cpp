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

#include "relaybc/selftest.hpp"

#include <algorithm>
#include <cmath>
#include <functional>
#include <string>
#include <vector>

#include "relaybc/bounds.hpp"
#include "relaybc/cmatrix.hpp"
#include "relaybc/csv.hpp"
#include "relaybc/precoder.hpp"
#include "relaybc/quantizer.hpp"
#include "relaybc/ratesim.hpp"
#include "relaybc/special.hpp"

namespace relaybc {
namespace {

struct Check {
  std::string name;
  std::function<std::string()> run;  // empty string on success, else a reason
};

std::string svd_reconstruction() {
  RngStream rng(7, 0);
  for (int t = 0; t < 200; ++t) {
    const ComplexMatrix h = sample_gaussian_matrix(2 + t % 3, 4 + t % 3, rng);
    const ThinSVD s = thin_svd(h);
    const ComplexMatrix back = s.U * ComplexMatrix::diagonal(s.sigma) * s.V.adjoint();
    if (max_abs_diff(back, h) > 1e-10) return "reconstruction error";
    const std::size_t n = h.rows();
    if (max_abs_diff(s.U.adjoint() * s.U, ComplexMatrix::identity(n)) > 1e-10) return "U not unitary";
    if (max_abs_diff(s.V.adjoint() * s.V, ComplexMatrix::identity(n)) > 1e-10) return "V not orthonormal";
  }
  return {};
}

std::string zf_nulling() {
  RngStream rng(8, 0);
  for (int t = 0; t < 200; ++t) {
    const std::size_t n = 2 + t % 3;
    std::vector<CVector> dirs;
    for (std::size_t k = 0; k < n; ++k) dirs.push_back(normalized(sample_gaussian_matrix(n, 1, rng).column(0)));
    try {
      const ComplexMatrix f = zf_beamformers(dirs);
      for (std::size_t k = 0; k < n; ++k)
        for (std::size_t j = 0; j < n; ++j) {
          const double leak = std::abs(inner(dirs[k], f.column(j)));
          if (j != k && leak > 1e-9) return "interference not nulled";
          if (j == k && leak < 1e-12) return "zero desired gain";
        }
    } catch (const NumericalFailure&) {
    }
  }
  return {};
}

std::string closure() {
  RngStream rng(9, 0);
  for (int t = 0; t < 100; ++t) {
    const std::size_t n = 2 + rng.next_u64() % 3;
    const std::size_t m = n + rng.next_u64() % 3;
    const double p1 = std::pow(10.0, 1.0 + 3.0 * rng.uniform());
    const double p2 = std::pow(10.0, 1.0 + 3.0 * rng.uniform());
    const double b = 1.5 + 3.0 * rng.uniform();
    const double theta = 0.05 + 0.9 * rng.uniform();
    const BitPlan plan = scale_bits(m, n, p1, p2, b, theta);
    const double v = rate_loss_bound_high_snr(m, n, p1, p2, plan.B1_exact, plan.B2_exact);
    if (std::abs(v - 0.5 * std::log2(b)) > 1e-9) return "bound not pinned at (1/2) log2 b";
  }
  return {};
}

std::string ceiling_constant_value() {
  const double oracle = std::log2(4.0 / 2.0) + 0.0 - (1.0 / std::log(2.0)) / 2.0 * (digamma_int(4) + digamma_int(3));
  if (std::abs(ceiling_constant(4, 2) - oracle) > 1e-12) return "mismatch";
  return {};
}

std::string lemma3_eigen() {
  RngStream rng(10, 0);
  for (int t = 0; t < 200; ++t) {
    const CVector v = normalized(sample_gaussian_matrix(4, 1, rng).column(0));
    const QuantizationResult q = sample_rvq(v, 3, rng);
    ComplexMatrix d(4, 4);
    for (std::size_t i = 0; i < 4; ++i)
      for (std::size_t j = 0; j < 4; ++j) d(i, j) = v[i] * std::conj(v[j]) - q.codeword[i] * std::conj(q.codeword[j]);
    const HermitianEigen e = eigen_hermitian(d);
    const double r = std::sqrt(q.error);
    if (std::abs(e.values.front() + r) > 1e-9 || std::abs(e.values.back() - r) > 1e-9) return "eigenvalues not +-sqrt(eps)";
  }
  return {};
}

std::string zero_error_injection() {
  SystemConfig cfg;
  cfg.B1 = 4u;
  cfg.B2 = 4u;
  cfg.P1 = cfg.P2 = 100.0;
  cfg.trials = 200;
  cfg.quantizer.backend = RvqBackend::codebook;
  cfg.quantizer.inject_truth = true;
  const PairedSamples s = simulate_paired(cfg);
  for (std::size_t i = 0; i < s.perfect.size(); ++i)
    if (s.perfect[i] != s.quantized[i]) return "nonzero loss at trial " + std::to_string(i);
  return {};
}

std::string thread_determinism() {
  SystemConfig cfg;
  cfg.B1 = 6u;
  cfg.B2 = 4u;
  cfg.P1 = cfg.P2 = 30.0;
  cfg.trials = 300;
  cfg.threads = 1;
  const PairedSamples a = simulate_paired(cfg);
  cfg.threads = 3;
  const PairedSamples b = simulate_paired(cfg);
  if (a.perfect != b.perfect || a.quantized != b.quantized) return "results depend on thread count";
  return {};
}

std::string optimal_theta_grid() {
  for (std::size_t m = 2; m <= 6; ++m)
    for (std::size_t n = 2; n <= m; ++n) {
      double best = 0.0, arg = 0.0;
      for (int i = 1; i < 10000; ++i) {
        const double th = i / 10000.0;
        const double f = std::pow(th, static_cast<double>(m - 1)) * std::pow(1.0 - th, static_cast<double>(n - 1));
        if (f > best) best = f, arg = th;
      }
      if (std::abs(arg - optimal_theta(m, n)) > 1e-4) return "grid argmax disagrees";
    }
  return {};
}

}  // namespace

int run_selftest(std::ostream& os) {
  const std::vector<Check> checks{{"svd reconstruction and unitarity", svd_reconstruction},
                                  {"zero-forcing nulling", zf_nulling},
                                  {"bit plan closure", closure},
                                  {"ceiling constant", ceiling_constant_value},
                                  {"rank-two difference eigenvalues", lemma3_eigen},
                                  {"zero-error codebook injection", zero_error_injection},
                                  {"thread-count determinism", thread_determinism},
                                  {"optimal theta", optimal_theta_grid}};
  int failures = 0;
  for (const Check& c : checks) {
    std::string why;
    try {
      why = c.run();
    } catch (const std::exception& e) {
      why = std::string("exception: ") + e.what();
    }
    if (why.empty()) {
      os << "PASS  " << c.name << '\n';
    } else {
      os << "FAIL  " << c.name << ": " << why << '\n';
      ++failures;
    }
  }
  return failures;
}

}  // namespace relaybc
