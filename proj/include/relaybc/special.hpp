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

#ifndef RELAYBC_SPECIAL_HPP
#define RELAYBC_SPECIAL_HPP

#include <cstdint>

namespace relaybc {

inline constexpr double kEulerGamma = 0.57721566490153286060651209008240243;

// psi(n) = -gamma + sum_{k=1}^{n-1} 1/k, accumulated in that order so that
// digamma_int(n + 1) == digamma_int(n) + 1.0 / n holds bit for bit.
// Throws std::domain_error for n < 1.
double digamma_int(long n);

struct HarmonicSum {
  double value;
  bool approximate;  // asymptotic expansion used beyond 2^30 terms
};

// H_n = sum_{k=1}^n 1/k, H_0 = 0. Summed directly (long double, smallest
// terms first) up to kHarmonicDirectLimit, Euler-Maclaurin above it.
inline constexpr std::uint64_t kHarmonicDirectLimit = std::uint64_t{1} << 20;
inline constexpr std::uint64_t kHarmonicExactLimit = std::uint64_t{1} << 30;
HarmonicSum harmonic_number(std::uint64_t n);

// H_{2^bits}; valid for any bit count.
HarmonicSum harmonic_pow2(unsigned bits);

}  // namespace relaybc

#endif  // RELAYBC_SPECIAL_HPP
