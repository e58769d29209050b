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

#include "relaybc/quantizer.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <string>

namespace relaybc {
namespace {

CVector isotropic_unit_vector(std::size_t dim, RngStream& rng) {
  CVector v(dim);
  for (auto& z : v) z = rng.complex_gaussian();
  return normalized(v);
}

void require_unit(std::span<const cplx> v, const char* who) {
  if (std::abs(norm(v) - 1.0) > 1e-10) throw std::invalid_argument(std::string(who) + ": input is not unit-norm");
}

}  // namespace

Codebook generate_codebook(std::size_t dim, unsigned bits, RngStream& rng) {
  if (dim < 2) throw std::invalid_argument("generate_codebook: dim must be >= 2");
  if (bits > kMaxCodebookBits)
    throw std::invalid_argument("generate_codebook: " + std::to_string(bits) + " bits exceeds the limit of " +
                                std::to_string(kMaxCodebookBits));
  Codebook cb{dim, bits, {}};
  const std::size_t count = std::size_t{1} << bits;
  cb.codewords.reserve(count);
  for (std::size_t j = 0; j < count; ++j) cb.codewords.push_back(isotropic_unit_vector(dim, rng));
  return cb;
}

QuantizationResult quantize(std::span<const cplx> v, const Codebook& cb) {
  if (v.size() != cb.dim) throw std::invalid_argument("quantize: dimension mismatch");
  if (cb.codewords.empty()) throw std::invalid_argument("quantize: empty codebook");
  require_unit(v, "quantize");
  std::size_t best = 0;
  double best_gain = -1.0;
  for (std::size_t j = 0; j < cb.codewords.size(); ++j) {
    const double gain = std::norm(inner(v, cb.codewords[j]));
    if (gain > best_gain) {
      best_gain = gain;
      best = j;
    }
  }
  return {best, cb.codewords[best], std::clamp(1.0 - best_gain, 0.0, 1.0)};
}

QuantizationResult sample_rvq(std::span<const cplx> v, unsigned bits, RngStream& rng) {
  const std::size_t dim = v.size();
  if (dim < 2) throw std::invalid_argument("sample_rvq: dim must be >= 2");
  require_unit(v, "sample_rvq");

  // Each codeword's chordal error is Beta(dim-1, 1): P(e <= x) = x^{dim-1}.
  // The minimum over 2^B codewords is inverted in closed form.
  const double u = rng.uniform();
  const double tail = -std::expm1(std::log(u) * std::exp2(-static_cast<double>(bits)));
  const double eps = std::pow(tail, 1.0 / static_cast<double>(dim - 1));

  // Residual direction: isotropic in the orthogonal complement of v.
  CVector s(dim);
  for (auto& z : s) z = rng.complex_gaussian();
  const cplx proj = inner(v, s);
  for (std::size_t i = 0; i < dim; ++i) s[i] -= v[i] * proj;
  s = normalized(s);
  const double phase = 2.0 * std::numbers::pi * rng.uniform();
  const cplx rot = std::polar(1.0, phase);

  CVector c(dim);
  const double a = std::sqrt(1.0 - eps);
  const double b = std::sqrt(eps);
  for (std::size_t i = 0; i < dim; ++i) c[i] = rot * (a * v[i] + b * s[i]);
  c = normalized(c);
  const double err = std::clamp(1.0 - std::norm(inner(v, c)), 0.0, 1.0);
  return {std::nullopt, std::move(c), err};
}

QuantizationResult quantize_direction(std::span<const cplx> v, FeedbackBits bits, const QuantizerOptions& opts,
                                      RngStream& rng) {
  if (!bits) return {std::nullopt, CVector(v.begin(), v.end()), 0.0};
  if (opts.inject_truth) {
    Codebook cb = generate_codebook(v.size(), std::min(*bits, opts.codebook_bits_limit), rng);
    cb.codewords.front().assign(v.begin(), v.end());
    return quantize(v, cb);
  }
  const bool use_codebook = opts.backend == RvqBackend::codebook ||
                            (opts.backend == RvqBackend::automatic && *bits <= opts.codebook_bits_limit);
  if (use_codebook) return quantize(v, generate_codebook(v.size(), *bits, rng));
  return sample_rvq(v, *bits, rng);
}

double expected_error_approx(std::size_t dim, double bits) {
  if (dim < 2) throw std::invalid_argument("expected_error_approx: dim must be >= 2");
  const double d = static_cast<double>(dim);
  return (d - 1.0) / d * std::exp2(-bits / (d - 1.0));
}

double expected_error_exact(std::size_t dim, double bits) {
  if (dim < 2) throw std::invalid_argument("expected_error_exact: dim must be >= 2");
  const double d = static_cast<double>(dim);
  const double a = d / (d - 1.0);
  const double n = std::exp2(bits);
  // n * Gamma(n) Gamma(a) / Gamma(n + a)
  if (n <= 1048576.0) return std::exp(std::log(n) + std::lgamma(n) + std::lgamma(a) - std::lgamma(n + a));
  // Gamma(n)/Gamma(n+a) = n^{-a} (1 - a(a-1)/(2n) + O(n^-2))
  return std::exp(std::lgamma(a) + (1.0 - a) * std::log(n)) * (1.0 - a * (a - 1.0) / (2.0 * n));
}

}  // namespace relaybc
