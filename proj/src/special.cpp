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

#include "relaybc/special.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace relaybc {

double digamma_int(long n) {
  if (n < 1) throw std::domain_error("digamma_int: argument must be a positive integer");
  double acc = -kEulerGamma;
  for (long k = 1; k < n; ++k) acc += 1.0 / static_cast<double>(k);
  return acc;
}

namespace {

// ln n + gamma + 1/(2n) - 1/(12n^2) + 1/(120n^4) - 1/(252n^6); the next
// term is below 1/(240 n^8), far under double resolution for n > 2^20.
double harmonic_asymptotic(double log_n, double n) {
  const double inv = 1.0 / n;
  const double inv2 = inv * inv;
  return log_n + kEulerGamma + 0.5 * inv - inv2 / 12.0 + inv2 * inv2 / 120.0 - inv2 * inv2 * inv2 / 252.0;
}

}  // namespace

HarmonicSum harmonic_number(std::uint64_t n) {
  if (n <= kHarmonicDirectLimit) {
    long double acc = 0.0L;
    for (std::uint64_t k = n; k >= 1; --k) acc += 1.0L / static_cast<long double>(k);
    return {static_cast<double>(acc), false};
  }
  const double x = static_cast<double>(n);
  return {harmonic_asymptotic(std::log(x), x), n > kHarmonicExactLimit};
}

HarmonicSum harmonic_pow2(unsigned bits) {
  if (bits < 64) return harmonic_number(std::uint64_t{1} << bits);
  const double b = static_cast<double>(bits);
  return {harmonic_asymptotic(b * std::numbers::ln2, std::exp2(b)), true};
}

}  // namespace relaybc
