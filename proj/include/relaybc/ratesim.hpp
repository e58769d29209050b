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

#ifndef RELAYBC_RATESIM_HPP
#define RELAYBC_RATESIM_HPP

#include <cstddef>
#include <span>
#include <vector>

#include "relaybc/cmatrix.hpp"
#include "relaybc/precoder.hpp"

namespace relaybc {

// Monte Carlo mean in b/s/Hz with its standard error (sample std / sqrt(n)).
struct RateEstimate {
  double mean = 0.0;
  double std_error = 0.0;
  std::size_t trials = 0;
  std::size_t discards = 0;

  // More than 1% of draws were rejected as numerically singular.
  bool excessive_discards() const { return static_cast<double>(discards) > 0.01 * static_cast<double>(trials); }
};

RateEstimate summarize(std::span<const double> samples, std::size_t discards = 0);

// Per-user SINR for arbitrary precoders:
//   |g_k^H F H w_k|^2 / (sum_{j!=k} |g_k^H F H w_j|^2 + |g_k^H F|^2/rho1 + 1/(rho1 rho2))
std::vector<double> sinr_all(const ComplexMatrix& h, const ComplexMatrix& g, const PrecodingSet& ps);
double sinr_general(std::size_t k, const ComplexMatrix& h, const ComplexMatrix& g, const PrecodingSet& ps);

// Structured-precoder forms of the same SINR, computed from the SVD of H
// rather than by propagating through G F H W. With perfect CSI:
//   sigma_k^2 |g_k^H f_k|^2 / (|g_k^H f_k|^2/rho1 + 1/(rho1 rho2))
double sinr_perfect_closed_form(std::size_t k, const ComplexMatrix& h, const ComplexMatrix& g, const PrecodingSet& ps);
// With quantized CSI (F-hat = F U):
//   |g_k^H Fh S V^H w_k|^2 / (sum_{j!=k} |g_k^H Fh S V^H w_j|^2 + |g_k^H Fh|^2/rho1 + 1/(rho1 rho2))
double sinr_quantized_structured(std::size_t k, const ComplexMatrix& h, const ComplexMatrix& g,
                                 const PrecodingSet& ps);

// (1/2) sum_k log2(1 + gamma_k); the half accounts for the two hops.
double sum_rate_from_sinr(std::span<const double> sinr);
double sum_rate_realization(const ComplexMatrix& h, const ComplexMatrix& g, const PrecodingSet& ps);

inline constexpr std::size_t kMaxDiscardsPerTrial = 1000;

// Per-trial samples. Trial i draws its channels from
// RngStream(seed, i).fork(kChannel) and its codebooks from
// RngStream(seed, i).fork(kQuantizer); singular draws are replaced by
// fresh ones from the same streams and counted.
struct ModeSamples {
  std::vector<double> rates;
  std::size_t discards = 0;
};
ModeSamples simulate_rates(const SystemConfig& cfg, CsiMode mode);

// Both precoders evaluated on every channel draw.
struct PairedSamples {
  std::vector<double> perfect;
  std::vector<double> quantized;
  std::size_t discards = 0;
};
PairedSamples simulate_paired(const SystemConfig& cfg);

RateEstimate monte_carlo_rate(const SystemConfig& cfg, CsiMode mode);

struct PairedRates {
  RateEstimate perfect;
  RateEstimate quantized;
  RateEstimate loss_per_user;  // (R_P - R_Q) / N, paired
};
PairedRates paired_rates(const SystemConfig& cfg);

// Per-user rate loss (R_P - R_Q)/N from paired draws.
RateEstimate rate_loss(const SystemConfig& cfg);

}  // namespace relaybc

#endif  // RELAYBC_RATESIM_HPP
