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

#include "relaybc/bounds.hpp"

#include <cmath>
#include <limits>
#include <numbers>
#include <stdexcept>

#include "relaybc/parallel.hpp"
#include "relaybc/special.hpp"

namespace relaybc {
namespace {

constexpr double kLog2E = std::numbers::log2e;

void check_antennas(std::size_t M, std::size_t N) {
  if (N < 2 || M < N) throw std::invalid_argument("bounds: requires M >= N >= 2");
}

void check_plan_args(double P1, double P2, double b, double theta) {
  if (!(P1 > 0.0) || !(P2 > 0.0)) throw std::invalid_argument("bounds: powers must be positive");
  if (!(b > 1.0)) throw std::invalid_argument("bounds: b must exceed 1");
  if (!(theta > 0.0 && theta < 1.0)) throw std::invalid_argument("bounds: theta must lie in (0, 1)");
}

double as_real_bits(FeedbackBits bits) {
  return bits ? static_cast<double>(*bits) : std::numeric_limits<double>::infinity();
}

}  // namespace

double rate_loss_bound_high_snr(std::size_t M, std::size_t N, double P1, double P2, double B1, double B2) {
  SystemConfig cfg;
  cfg.M = M;
  cfg.N = N;
  cfg.P1 = P1;
  cfg.P2 = P2;
  const PowerScalars rho = power_scalars(cfg);
  const double m = static_cast<double>(M);
  const double n = static_cast<double>(N);
  const double hop1 = rho.rho1 * std::exp2(-B1 / (m - 1.0));
  const double hop2 = (1.0 + rho.rho1 * m) * std::exp2(-B2 / (n - 1.0));
  return 0.5 * std::log2(1.0 + rho.rho2 * (n - 1.0) * (hop1 + hop2));
}

double rate_loss_bound_high_snr(const SystemConfig& cfg) {
  return rate_loss_bound_high_snr(cfg.M, cfg.N, cfg.P1, cfg.P2, as_real_bits(cfg.B1), as_real_bits(cfg.B2));
}

double FirstTermEstimate::std_error() const {
  return 0.5 * kLog2E / (1.0 + ratio.mean) * ratio.std_error;
}

FirstTermEstimate rate_loss_bound_first_term(std::size_t M, std::size_t N, FeedbackBits B1, std::size_t trials,
                                             std::uint64_t seed, const QuantizerOptions& opts, unsigned threads) {
  check_antennas(M, N);
  if (trials == 0) throw std::invalid_argument("rate_loss_bound_first_term: trials must be >= 1");
  struct Out {
    double ratio = 0.0;
    std::size_t discards = 0;
  };
  const auto outs = parallel_map(trials, threads, [&](std::size_t i) {
    const RngStream base(seed, i);
    RngStream haar = base.fork(stream_tag::kHaar);
    RngStream quant = base.fork(stream_tag::kQuantizer);
    Out o;
    for (;;) {
      try {
        // Right singular vectors of an i.i.d. Gaussian matrix are Haar.
        const ComplexMatrix v = thin_svd(sample_gaussian_matrix(N, M, haar)).V;
        ComplexMatrix vq(M, N);
        double root_err = 0.0;
        for (std::size_t k = 0; k < N; ++k) {
          const QuantizationResult q = quantize_direction(v.column(k), B1, opts, quant);
          vq.set_column(k, q.codeword);
          root_err += std::sqrt(q.error);
        }
        const ComplexMatrix a = vq.adjoint() * v;
        const double lmin = min_eigenvalue_hermitian(a.adjoint() * a);
        if (lmin < 1e-12) throw NumericalFailure("first term: singular V^H Vq Vq^H V");
        o.ratio = root_err / static_cast<double>(N) / lmin;
        return o;
      } catch (const NumericalFailure&) {
        if (++o.discards > kMaxDiscardsPerTrial) throw;
      }
    }
  });
  std::vector<double> samples;
  samples.reserve(outs.size());
  std::size_t discards = 0;
  for (const Out& o : outs) {
    samples.push_back(o.ratio);
    discards += o.discards;
  }
  FirstTermEstimate est;
  est.ratio = summarize(samples, discards);
  est.term = 0.5 * std::log2(1.0 + est.ratio.mean);
  return est;
}

double ceiling_constant(std::size_t M, std::size_t N) {
  check_antennas(M, N);
  const double m = static_cast<double>(M);
  const double n = static_cast<double>(N);
  double psi_sum = 0.0;
  for (std::size_t k = 0; k < N; ++k) psi_sum += digamma_int(static_cast<long>(M - k));
  return std::log2(m / (n * (n - 1.0))) + kLog2E * harmonic_number(N - 2).value - kLog2E / n * psi_sum;
}

Ceiling ceiling_R_U1(std::size_t M, std::size_t N, unsigned B1) {
  check_antennas(M, N);
  const double m = static_cast<double>(M);
  const double n = static_cast<double>(N);
  const HarmonicSum h = harmonic_pow2(B1);
  const double value = std::log2(1.0 - (m - n) / m * std::exp2(-static_cast<double>(B1) / (m - 1.0))) +
                       kLog2E / (m - 1.0) * h.value + kLog2E * harmonic_number(M - 2).value + kLog2E / (n - 1.0) +
                       ceiling_constant(M, N);
  return {value, h.approximate};
}

Ceiling ceiling_R_U2(std::size_t M, std::size_t N, unsigned B2) {
  check_antennas(M, N);
  const double n = static_cast<double>(N);
  const HarmonicSum h = harmonic_pow2(B2);
  const double value = std::log2(1.0 + (n - 1.0) * std::exp2(-static_cast<double>(B2) / (n - 1.0))) +
                       kLog2E / (n - 1.0) * h.value + ceiling_constant(M, N);
  return {value, h.approximate};
}

BitPlan scale_bits(std::size_t M, std::size_t N, double P1, double P2, double b, double theta) {
  check_antennas(M, N);
  check_plan_args(P1, P2, b, theta);
  const double m = static_cast<double>(M);
  const double n = static_cast<double>(N);
  BitPlan plan;
  plan.theta = theta;
  plan.b = b;
  plan.alpha = std::log2(2.0 * (n - 1.0) / (n * (b - 1.0)));
  plan.B1_exact = (m - 1.0) * (std::log2(P2) - std::log2(m + n / P1) +
                               std::log2((n - 1.0) / (theta * (b - 1.0) * n)));
  plan.B2_exact = (n - 1.0) * (std::log2(P2) + std::log2((n - 1.0) / ((1.0 - theta) * (b - 1.0) * n)));
  plan.clamped = plan.B1_exact < 0.0 || plan.B2_exact < 0.0;
  plan.B1 = static_cast<unsigned>(std::max(0.0, std::ceil(plan.B1_exact)));
  plan.B2 = static_cast<unsigned>(std::max(0.0, std::ceil(plan.B2_exact)));
  return plan;
}

double b1_limit(std::size_t M, std::size_t N, double P2, double b) {
  check_antennas(M, N);
  check_plan_args(1.0, P2, b, 0.5);
  const double m = static_cast<double>(M);
  const double n = static_cast<double>(N);
  return (m - 1.0) * std::log2(P2) + (m - 1.0) * std::log2(2.0 * (n - 1.0) / ((b - 1.0) * m * n));
}

BitsDbApprox bits_db_approx(std::size_t M, std::size_t N, double P1, double P2_dB, double b) {
  check_antennas(M, N);
  check_plan_args(P1, 1.0, b, 0.5);
  const double m = static_cast<double>(M);
  const double n = static_cast<double>(N);
  const double alpha = std::log2(2.0 * (n - 1.0) / (n * (b - 1.0)));
  return {(m - 1.0) / 3.0 * P2_dB - (m - 1.0) * std::log2(m + n / P1) + (m - 1.0) * alpha,
          (n - 1.0) / 3.0 * P2_dB + (n - 1.0) * alpha};
}

double sum_feedback(std::size_t M, std::size_t N, double P1, double P2, double b, double theta) {
  const BitPlan plan = scale_bits(M, N, P1, P2, b, theta);
  return static_cast<double>(N) * (plan.B1_exact + plan.B2_exact);
}

double optimal_theta(std::size_t M, std::size_t N) {
  if (M < 2 || N < 2) throw std::invalid_argument("optimal_theta: requires M, N >= 2");
  return (static_cast<double>(M) - 1.0) / (static_cast<double>(M + N) - 2.0);
}

}  // namespace relaybc
