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

#ifndef RELAYBC_PRECODER_HPP
#define RELAYBC_PRECODER_HPP

#include <cstddef>
#include <cstdint>
#include <optional>
#include <vector>

#include "relaybc/cmatrix.hpp"
#include "relaybc/quantizer.hpp"
#include "relaybc/rng.hpp"

namespace relaybc {

// One simulation scenario. Powers are linear SNRs (noise is unit variance).
// The relay serves K = N single-antenna users.
struct SystemConfig {
  std::size_t M = 4;  // BS antennas
  std::size_t N = 2;  // relay antennas = users
  double P1 = 1.0;    // BS power
  double P2 = 1.0;    // relay power
  FeedbackBits B1 = 0u;  // bits per column of V (relay -> BS)
  FeedbackBits B2 = 0u;  // bits per user channel (user -> relay)
  std::size_t trials = 20000;
  std::uint64_t seed = 1;
  QuantizerOptions quantizer{};
  unsigned threads = 0;  // 0: hardware concurrency

  // Throws std::invalid_argument when M >= N >= 2, P1 > 0, P2 > 0 fails.
  void validate() const;
};

struct PowerScalars {
  double rho1;
  double rho2;
};

// rho1 = P1/N, rho2 = P2/(P1 M + N). Averaged over H, so the same for
// every realization.
PowerScalars power_scalars(const SystemConfig& cfg);

enum class CsiMode { perfect, quantized };

struct PrecodingSet {
  ComplexMatrix W;  // M x N source precoder
  ComplexMatrix F;  // N x N relay precoder
  double rho1 = 0.0;
  double rho2 = 0.0;
  CsiMode mode = CsiMode::perfect;

  // Quantized mode only.
  std::vector<double> v_errors;  // epsilon_k per column of V
  std::vector<double> g_errors;  // tau_k per user direction
  std::vector<CVector> g_hat;    // quantized user directions (rows of G-hat, conjugated)
  std::vector<std::optional<std::size_t>> v_indices;
  std::vector<std::optional<std::size_t>> g_indices;
};

// g_k / |g_k| where g_k^H is row k of G.
CVector user_direction(const ComplexMatrix& g, std::size_t k);

// Unit-norm columns of the zero-forcing inverse of the channel whose k-th
// row is directions[k]^H.
ComplexMatrix zf_beamformers(const std::vector<CVector>& directions);

// W = V, F = F1 U^H with F1 the normalized ZF beamformers of G.
PrecodingSet build_perfect(const ComplexMatrix& h, const ComplexMatrix& g, const SystemConfig& cfg);

// W = V-hat, F = F-hat U^H, where each column of V is quantized with B1
// bits and each user direction with B2 bits; every quantization draws its
// own codebook from rng.
PrecodingSet build_quantized(const ComplexMatrix& h, const ComplexMatrix& g, const SystemConfig& cfg,
                             RngStream& rng);

}  // namespace relaybc

#endif  // RELAYBC_PRECODER_HPP
