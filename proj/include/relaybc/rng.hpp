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

#ifndef RELAYBC_RNG_HPP
#define RELAYBC_RNG_HPP

#include <complex>
#include <cstdint>
#include <random>

namespace relaybc {

// Reproducible random stream keyed by (seed, stream_id).
//
// The engine is std::mt19937_64, whose output sequence is fixed by the
// standard. Uniform and Gaussian variates are derived here rather than
// through std::*_distribution, whose algorithms differ between standard
// library implementations.
class RngStream {
 public:
  RngStream(std::uint64_t seed, std::uint64_t stream_id);

  std::uint64_t seed() const { return seed_; }
  std::uint64_t stream_id() const { return stream_id_; }

  // Child stream for a distinct purpose (channel draws, codebooks, ...).
  // Children with different tags are statistically independent of each
  // other and of the parent.
  RngStream fork(std::uint64_t tag) const;

  std::uint64_t next_u64() { return engine_(); }

  // Uniform on (0, 1], 53-bit resolution.
  double uniform();

  // Circularly-symmetric complex Gaussian with unit total variance:
  // real and imaginary parts each have variance 1/2.
  std::complex<double> complex_gaussian();

 private:
  std::uint64_t seed_;
  std::uint64_t stream_id_;
  std::mt19937_64 engine_;
};

// Stream tags used by the simulators. Kept here so every consumer forks
// the same way.
namespace stream_tag {
inline constexpr std::uint64_t kChannel = 0x43484e4cULL;    // "CHNL"
inline constexpr std::uint64_t kQuantizer = 0x5156414eULL;  // "QVAN"
inline constexpr std::uint64_t kHaar = 0x48414152ULL;       // "HAAR"
}  // namespace stream_tag

}  // namespace relaybc

#endif  // RELAYBC_RNG_HPP
