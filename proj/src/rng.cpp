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

#include "relaybc/rng.hpp"

#include <cmath>
#include <numbers>

namespace relaybc {
namespace {

// splitmix64 finalizer; spreads (seed, stream) pairs over the engine seed space.
std::uint64_t mix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

std::uint64_t engine_seed(std::uint64_t seed, std::uint64_t stream_id) {
  return mix64(mix64(seed) ^ (stream_id * 0xd1b54a32d192ed03ULL));
}

}  // namespace

RngStream::RngStream(std::uint64_t seed, std::uint64_t stream_id)
    : seed_(seed), stream_id_(stream_id), engine_(engine_seed(seed, stream_id)) {}

RngStream RngStream::fork(std::uint64_t tag) const {
  return RngStream(seed_, mix64(stream_id_ ^ mix64(tag + 0x632be59bd9b4e019ULL)));
}

double RngStream::uniform() {
  constexpr double kScale = 1.0 / 9007199254740992.0;  // 2^-53
  return static_cast<double>((engine_() >> 11) + 1) * kScale;
}

std::complex<double> RngStream::complex_gaussian() {
  // Box-Muller: sqrt(-ln u) gives per-component variance 1/2.
  const double r = std::sqrt(-std::log(uniform()));
  const double phase = 2.0 * std::numbers::pi * uniform();
  return {r * std::cos(phase), r * std::sin(phase)};
}

}  // namespace relaybc
