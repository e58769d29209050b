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

#include <doctest.h>

#include <cmath>

#include "oracles.hpp"
#include "relaybc/quantizer.hpp"

using namespace relaybc;

namespace {

struct Moments {
  double mean = 0.0;
  double se = 0.0;
};

template <class Draw>
Moments sample_moments(int n, Draw&& draw) {
  double s = 0.0, ss = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = draw();
    s += x;
    ss += x * x;
  }
  const double m = s / n;
  return {m, std::sqrt((ss / n - m * m) / (n - 1))};
}

}  // namespace

TEST_CASE("codebook shape and normalization") {
  RngStream r(1, 0);
  const Codebook one = generate_codebook(2, 0, r);
  CHECK(one.codewords.size() == 1);
  const Codebook cb = generate_codebook(4, 6, r);
  REQUIRE(cb.codewords.size() == 64);
  for (const auto& c : cb.codewords) CHECK(std::abs(norm(c) - 1.0) < 1e-12);
  CHECK_THROWS_AS(generate_codebook(4, kMaxCodebookBits + 1, r), std::invalid_argument);
  CHECK_THROWS_AS(generate_codebook(1, 2, r), std::invalid_argument);
}

TEST_CASE("codewords are isotropic") {
  RngStream r(2, 0);
  const Codebook cb = generate_codebook(4, 17, r);  // 131072 codewords
  double acc = 0.0;
  for (const auto& c : cb.codewords) acc += std::norm(c[0]);
  CHECK(std::abs(acc / static_cast<double>(cb.codewords.size()) - 0.25) < 0.01);
}

TEST_CASE("quantize: exact and orthogonal cases") {
  const CVector e1{1.0, 0.0}, e2{0.0, 1.0};
  Codebook cb{2, 0, {e1}};
  const QuantizationResult hit = quantize(e1, cb);
  CHECK(hit.error == 0.0);
  CHECK(hit.codeword == e1);
  CHECK(*hit.index == 0);
  CHECK(quantize(e2, cb).error == doctest::Approx(1.0));
}

TEST_CASE("quantize: ties resolve to the lowest index") {
  const double h = std::sqrt(0.5);
  const CVector v{1.0, 0.0};
  Codebook cb{2, 2, {CVector{0.0, 1.0}, CVector{h, h}, CVector{h, -h}, CVector{cplx(0.0, h), h}}};
  CHECK(*quantize(v, cb).index == 1);
}

TEST_CASE("quantize: contract violations") {
  Codebook cb{3, 0, {CVector{1.0, 0.0, 0.0}}};
  CHECK_THROWS_AS(quantize(CVector{1.0, 0.0}, cb), std::invalid_argument);
  CHECK_THROWS_AS(quantize(CVector{2.0, 0.0, 0.0}, cb), std::invalid_argument);
}

TEST_CASE("property: quantizer picks the codeword with the largest alignment") {
  oracle::for_all(200, 21, [](oracle::Gen& g) {
    const std::size_t dim = g.integer(2, 5);
    Codebook cb{dim, 3, {}};
    for (int j = 0; j < 8; ++j) cb.codewords.push_back(g.unit(dim));
    const CVector v = g.unit(dim);
    const QuantizationResult q = quantize(v, cb);
    for (const auto& c : cb.codewords) CHECK(std::norm(inner(v, c)) <= 1.0 - q.error + 1e-15);
    CHECK(q.error >= 0.0);
    CHECK(q.error <= 1.0);
  });
}

TEST_CASE("expected error: high-resolution approximation values") {
  CHECK(expected_error_approx(4, 0) == doctest::Approx(0.75));
  CHECK(expected_error_approx(2, 1) == doctest::Approx(0.25));
  CHECK(expected_error_approx(4, 12) == doctest::Approx(0.046875));
}

TEST_CASE("expected error: closed form matches numerical integration") {
  for (std::size_t dim : {2u, 3u, 4u, 6u})
    for (unsigned bits : {0u, 1u, 3u, 6u, 10u, 16u}) {
      CAPTURE(dim);
      CAPTURE(bits);
      CHECK(expected_error_exact(dim, bits) == doctest::Approx(oracle::rvq_mean_error(dim, bits)).epsilon(1e-8));
    }
  // Large-codebook branch continues the lgamma branch smoothly.
  const double below = expected_error_exact(4, 20.0);
  const double above = expected_error_exact(4, 20.0 + 1e-9);
  CHECK(above == doctest::Approx(below).epsilon(1e-8));
  // B = 0: a single random codeword has mean error (d-1)/d.
  CHECK(expected_error_exact(4, 0) == doctest::Approx(0.75).epsilon(1e-12));
}

TEST_CASE("codebook quantization error mean (dim 2, 4 bits)") {
  RngStream r(3, 0);
  oracle::Gen g(31);
  const Moments m = sample_moments(100000, [&] { return quantize(g.unit(2), generate_codebook(2, 4, r)).error; });
  CHECK(std::abs(m.mean - oracle::rvq_mean_error(2, 4)) < 3.0 * m.se);
}

TEST_CASE("sampled backend reproduces the codebook error law") {
  oracle::Gen g(32);
  for (std::size_t dim : {2u, 4u}) {
    for (unsigned bits : {3u, 6u, 24u}) {
      RngStream r(4, dim * 100 + bits);
      const Moments m = sample_moments(100000, [&] { return sample_rvq(g.unit(dim), bits, r).error; });
      CAPTURE(dim);
      CAPTURE(bits);
      CHECK(std::abs(m.mean - expected_error_exact(dim, bits)) < 3.0 * m.se + 1e-15);
    }
  }
}

TEST_CASE("property: sampled codewords are unit norm with the reported error") {
  RngStream r(5, 0);
  oracle::for_all(500, 33, [&](oracle::Gen& g) {
    const std::size_t dim = g.integer(2, 6);
    const unsigned bits = static_cast<unsigned>(g.integer(0, 40));
    const CVector v = g.unit(dim);
    const QuantizationResult q = sample_rvq(v, bits, r);
    CHECK(std::abs(norm(q.codeword) - 1.0) < 1e-12);
    CHECK(std::abs(1.0 - std::norm(inner(v, q.codeword)) - q.error) < 1e-12);
    CHECK_FALSE(q.index.has_value());
  });
}

TEST_CASE("quantize_direction backends") {
  RngStream r(6, 0);
  const CVector v{0.6, cplx(0.0, 0.8)};
  const QuantizationResult exact = quantize_direction(v, kPerfectFeedback, {}, r);
  CHECK(exact.error == 0.0);
  CHECK(exact.codeword == v);
  QuantizerOptions opts;
  CHECK(quantize_direction(v, 4u, opts, r).index.has_value());
  CHECK_FALSE(quantize_direction(v, 12u, opts, r).index.has_value());
  opts.backend = RvqBackend::sampled;
  CHECK_FALSE(quantize_direction(v, 2u, opts, r).index.has_value());
  opts.backend = RvqBackend::codebook;
  CHECK(quantize_direction(v, 8u, opts, r).index.has_value());
  CHECK_THROWS_AS(quantize_direction(v, 21u, opts, r), std::invalid_argument);
  opts.inject_truth = true;
  const QuantizationResult injected = quantize_direction(v, 30u, opts, r);
  CHECK(injected.error < 1e-15);
  CHECK(*injected.index == 0);
  CHECK(injected.codeword == v);
}
