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

#ifndef RELAYBC_QUANTIZER_HPP
#define RELAYBC_QUANTIZER_HPP

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "relaybc/cmatrix.hpp"
#include "relaybc/rng.hpp"

namespace relaybc {

// Number of feedback bits for one hop; std::nullopt means the transmitter
// receives the exact direction (infinite-resolution feedback).
using FeedbackBits = std::optional<unsigned>;
inline constexpr FeedbackBits kPerfectFeedback = std::nullopt;

inline constexpr unsigned kMaxCodebookBits = 20;

// Random vector quantization codebook: 2^bits i.i.d. isotropic unit vectors.
struct Codebook {
  std::size_t dim = 0;
  unsigned bits = 0;
  std::vector<CVector> codewords;
};

struct QuantizationResult {
  std::optional<std::size_t> index;  // empty when no explicit codebook was searched
  CVector codeword;
  double error = 0.0;  // 1 - |v^H codeword|^2
};

// How RVQ feedback is realized inside the simulators.
//   codebook  - draw a fresh codebook and search it exhaustively
//   sampled   - draw the chosen codeword directly from its exact
//               distribution (min-of-2^B chordal error, isotropic residual)
//   automatic - codebook up to `codebook_bits_limit`, sampled above
enum class RvqBackend { codebook, sampled, automatic };

struct QuantizerOptions {
  RvqBackend backend = RvqBackend::automatic;
  unsigned codebook_bits_limit = 6;
  // Test hook: the true direction is planted in every codebook, so
  // quantization is lossless while still running the codebook search.
  bool inject_truth = false;
};

// Throws std::invalid_argument for dim < 2 or bits > kMaxCodebookBits.
Codebook generate_codebook(std::size_t dim, unsigned bits, RngStream& rng);

// Chordal-distance quantization: argmax_j |v^H c_j|^2, lowest index on ties.
// Throws std::invalid_argument on dimension mismatch or non-unit v.
QuantizationResult quantize(std::span<const cplx> v, const Codebook& cb);

// Draws the RVQ output for unit vector v without materializing the codebook.
// Works for any bit count, including ones far beyond kMaxCodebookBits.
QuantizationResult sample_rvq(std::span<const cplx> v, unsigned bits, RngStream& rng);

// Quantize a unit direction with the configured backend. Perfect feedback
// returns v itself with zero error.
QuantizationResult quantize_direction(std::span<const cplx> v, FeedbackBits bits,
                                      const QuantizerOptions& opts, RngStream& rng);

// ((dim-1)/dim) 2^{-bits/(dim-1)}: the customary high-resolution
// approximation of the mean RVQ error.
double expected_error_approx(std::size_t dim, double bits);

// Exact mean RVQ error 2^B * Beta(2^B, dim/(dim-1)).
double expected_error_exact(std::size_t dim, double bits);

}  // namespace relaybc

#endif  // RELAYBC_QUANTIZER_HPP
