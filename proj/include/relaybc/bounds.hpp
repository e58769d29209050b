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

#ifndef RELAYBC_BOUNDS_HPP
#define RELAYBC_BOUNDS_HPP

#include <cstddef>
#include <cstdint>

#include "relaybc/precoder.hpp"
#include "relaybc/quantizer.hpp"
#include "relaybc/ratesim.hpp"

namespace relaybc {

// High-SNR rate-loss bound per user (b/s/Hz), without its O(1) part:
//   (1/2) log2(1 + rho2 (N-1) (rho1 2^{-B1/(M-1)} + (1 + rho1 M) 2^{-B2/(N-1)}))
// Bits are real-valued here; +infinity stands for perfect feedback.
double rate_loss_bound_high_snr(std::size_t M, std::size_t N, double P1, double P2, double B1, double B2);
double rate_loss_bound_high_snr(const SystemConfig& cfg);

// Monte Carlo estimate of the B1-only part of the rate-loss bound,
// (1/2) log2(1 + E[sqrt(eps_k) / lambda_min(V^H Vq Vq^H V)]), with V Haar
// (M x N column-unitary) and Vq its column-wise RVQ quantization.
struct FirstTermEstimate {
  double term = 0.0;
  RateEstimate ratio;  // E[sqrt(eps_k)/lambda_min] samples
  double std_error() const;  // delta-method error of `term`
};
FirstTermEstimate rate_loss_bound_first_term(std::size_t M, std::size_t N, FeedbackBits B1, std::size_t trials,
                                             std::uint64_t seed, const QuantizerOptions& opts = {},
                                             unsigned threads = 0);

// Constant shared by both interference-limited ceilings:
//   log2(M/(N(N-1))) + log2(e) H_{N-2} - (log2(e)/N) sum_{k=0}^{N-1} psi(M-k)
double ceiling_constant(std::size_t M, std::size_t N);

struct Ceiling {
  double value;       // ceiling on (2/N) R_Q as P1 = P2 -> infinity
  bool approximate;   // a harmonic sum beyond 2^30 terms was approximated
};
// Fixed B1, perfect user feedback.
Ceiling ceiling_R_U1(std::size_t M, std::size_t N, unsigned B1);
// Fixed B2, perfect relay feedback.
Ceiling ceiling_R_U2(std::size_t M, std::size_t N, unsigned B2);

// Feedback-bit scaling that pins the high-SNR bound at (1/2) log2 b.
struct BitPlan {
  double B1_exact = 0.0;
  double B2_exact = 0.0;
  unsigned B1 = 0;  // max(0, ceil(B1_exact))
  unsigned B2 = 0;
  double theta = 0.5;
  double b = 2.0;
  double alpha = 0.0;  // log2(2(N-1)/(N(b-1)))
  bool clamped = false;  // an exact value was negative (outside the high-SNR regime)
};

// Throws std::invalid_argument unless b > 1 and 0 < theta < 1.
BitPlan scale_bits(std::size_t M, std::size_t N, double P1, double P2, double b, double theta = 0.5);

// Limit of B1_exact as P1 -> infinity at theta = 1/2.
double b1_limit(std::size_t M, std::size_t N, double P2, double b);

// Linear-in-dB rules of thumb (log2 10 / 10 replaced by 1/3).
struct BitsDbApprox {
  double B1;
  double B2;
};
BitsDbApprox bits_db_approx(std::size_t M, std::size_t N, double P1, double P2_dB, double b);

// Total feedback N (B1_exact + B2_exact).
double sum_feedback(std::size_t M, std::size_t N, double P1, double P2, double b, double theta);

// (M-1)/(M+N-2): minimizer of sum_feedback over theta.
double optimal_theta(std::size_t M, std::size_t N);

}  // namespace relaybc

#endif  // RELAYBC_BOUNDS_HPP
