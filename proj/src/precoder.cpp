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

#include "relaybc/precoder.hpp"

#include <cmath>
#include <string>

namespace relaybc {

void SystemConfig::validate() const {
  if (N < 2) throw std::invalid_argument("SystemConfig: N must be >= 2");
  if (M < N) throw std::invalid_argument("SystemConfig: requires M >= N");
  if (!(P1 > 0.0) || !std::isfinite(P1)) throw std::invalid_argument("SystemConfig: P1 must be positive");
  if (!(P2 > 0.0) || !std::isfinite(P2)) throw std::invalid_argument("SystemConfig: P2 must be positive");
}

PowerScalars power_scalars(const SystemConfig& cfg) {
  cfg.validate();
  const double m = static_cast<double>(cfg.M);
  const double n = static_cast<double>(cfg.N);
  return {cfg.P1 / n, cfg.P2 / (cfg.P1 * m + n)};
}

CVector user_direction(const ComplexMatrix& g, std::size_t k) {
  CVector gk = g.row(k);
  for (auto& z : gk) z = std::conj(z);
  return normalized(gk);
}

ComplexMatrix zf_beamformers(const std::vector<CVector>& directions) {
  const std::size_t n = directions.size();
  ComplexMatrix ghat(n, n);
  for (std::size_t k = 0; k < n; ++k)
    for (std::size_t i = 0; i < n; ++i) ghat(k, i) = std::conj(directions[k][i]);
  ComplexMatrix f = zf_pseudo_inverse(ghat);
  for (std::size_t k = 0; k < n; ++k) f.set_column(k, normalized(f.column(k)));
  return f;
}

namespace {

void check_shapes(const ComplexMatrix& h, const ComplexMatrix& g, const SystemConfig& cfg) {
  cfg.validate();
  if (h.rows() != cfg.N || h.cols() != cfg.M)
    throw std::invalid_argument("precoder: H must be N x M (" + std::to_string(cfg.N) + "x" + std::to_string(cfg.M) +
                                ")");
  if (g.rows() != cfg.N || g.cols() != cfg.N) throw std::invalid_argument("precoder: G must be N x N");
}

}  // namespace

// ZF is formed from the row-normalized channel. Column normalization makes
// the result independent of row scaling, and it lets lossless quantization
// reproduce this path bit for bit.
PrecodingSet build_perfect(const ComplexMatrix& h, const ComplexMatrix& g, const SystemConfig& cfg) {
  check_shapes(h, g, cfg);
  const ThinSVD svd = thin_svd(h);
  std::vector<CVector> dirs;
  dirs.reserve(cfg.N);
  for (std::size_t k = 0; k < cfg.N; ++k) dirs.push_back(user_direction(g, k));
  const PowerScalars rho = power_scalars(cfg);

  PrecodingSet ps;
  ps.W = svd.V;
  ps.F = zf_beamformers(dirs) * svd.U.adjoint();
  ps.rho1 = rho.rho1;
  ps.rho2 = rho.rho2;
  ps.mode = CsiMode::perfect;
  return ps;
}

PrecodingSet build_quantized(const ComplexMatrix& h, const ComplexMatrix& g, const SystemConfig& cfg,
                             RngStream& rng) {
  check_shapes(h, g, cfg);
  const ThinSVD svd = thin_svd(h);
  const PowerScalars rho = power_scalars(cfg);

  PrecodingSet ps;
  ps.mode = CsiMode::quantized;
  ps.rho1 = rho.rho1;
  ps.rho2 = rho.rho2;
  ps.W = ComplexMatrix(cfg.M, cfg.N);
  for (std::size_t k = 0; k < cfg.N; ++k) {
    QuantizationResult q = quantize_direction(svd.V.column(k), cfg.B1, cfg.quantizer, rng);
    ps.W.set_column(k, q.codeword);
    ps.v_errors.push_back(q.error);
    ps.v_indices.push_back(q.index);
  }

  std::vector<CVector> ghat;
  ghat.reserve(cfg.N);
  for (std::size_t k = 0; k < cfg.N; ++k) {
    QuantizationResult q = quantize_direction(user_direction(g, k), cfg.B2, cfg.quantizer, rng);
    ps.g_errors.push_back(q.error);
    ps.g_indices.push_back(q.index);
    ghat.push_back(std::move(q.codeword));
  }
  ps.F = zf_beamformers(ghat) * svd.U.adjoint();
  ps.g_hat = std::move(ghat);
  return ps;
}

}  // namespace relaybc
