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

#include "relaybc/ratesim.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "relaybc/parallel.hpp"

namespace relaybc {
namespace {

// g_k, the conjugate of row k of G.
CVector user_channel(const ComplexMatrix& g, std::size_t k) {
  CVector gk = g.row(k);
  for (auto& z : gk) z = std::conj(z);
  return gk;
}

}  // namespace

RateEstimate summarize(std::span<const double> samples, std::size_t discards) {
  if (samples.empty()) throw std::invalid_argument("summarize: no samples");
  const double n = static_cast<double>(samples.size());
  double mean = 0.0;
  for (double x : samples) mean += x;
  mean /= n;
  double ss = 0.0;
  for (double x : samples) ss += (x - mean) * (x - mean);
  const double se = samples.size() > 1 ? std::sqrt(ss / (n - 1.0) / n) : 0.0;
  return {mean, se, samples.size(), discards};
}

std::vector<double> sinr_all(const ComplexMatrix& h, const ComplexMatrix& g, const PrecodingSet& ps) {
  const ComplexMatrix gf = g * ps.F;
  const ComplexMatrix t = gf * h * ps.W;
  const std::size_t n = t.rows();
  const double noise = 1.0 / (ps.rho1 * ps.rho2);
  std::vector<double> out(n);
  for (std::size_t k = 0; k < n; ++k) {
    double interference = 0.0;
    for (std::size_t j = 0; j < t.cols(); ++j)
      if (j != k) interference += std::norm(t(k, j));
    double relay_noise = 0.0;
    for (std::size_t j = 0; j < gf.cols(); ++j) relay_noise += std::norm(gf(k, j));
    out[k] = std::norm(t(k, k)) / (interference + relay_noise / ps.rho1 + noise);
  }
  return out;
}

double sinr_general(std::size_t k, const ComplexMatrix& h, const ComplexMatrix& g, const PrecodingSet& ps) {
  if (k >= g.rows()) throw std::invalid_argument("sinr_general: user index out of range");
  return sinr_all(h, g, ps)[k];
}

double sinr_perfect_closed_form(std::size_t k, const ComplexMatrix& h, const ComplexMatrix& g,
                                const PrecodingSet& ps) {
  if (k >= g.rows()) throw std::invalid_argument("sinr_perfect_closed_form: user index out of range");
  const ThinSVD svd = thin_svd(h);
  const ComplexMatrix f1 = ps.F * svd.U;
  const double gain = std::norm(inner(user_channel(g, k), f1.column(k)));
  const double s2 = svd.sigma[k] * svd.sigma[k];
  return s2 * gain / (gain / ps.rho1 + 1.0 / (ps.rho1 * ps.rho2));
}

double sinr_quantized_structured(std::size_t k, const ComplexMatrix& h, const ComplexMatrix& g,
                                 const PrecodingSet& ps) {
  if (k >= g.rows()) throw std::invalid_argument("sinr_quantized_structured: user index out of range");
  const ThinSVD svd = thin_svd(h);
  const ComplexMatrix fhat = ps.F * svd.U;
  const CVector gk = user_channel(g, k);
  // row vector g_k^H Fh, then times Sigma V^H W
  ComplexMatrix row(1, fhat.cols());
  for (std::size_t j = 0; j < fhat.cols(); ++j) row(0, j) = inner(gk, fhat.column(j));
  const ComplexMatrix effective = row * ComplexMatrix::diagonal(svd.sigma) * svd.V.adjoint() * ps.W;
  double interference = 0.0;
  for (std::size_t j = 0; j < effective.cols(); ++j)
    if (j != k) interference += std::norm(effective(0, j));
  const double relay_noise = norm2(row.data());
  return std::norm(effective(0, k)) / (interference + relay_noise / ps.rho1 + 1.0 / (ps.rho1 * ps.rho2));
}

double sum_rate_from_sinr(std::span<const double> sinr) {
  double acc = 0.0;
  for (double s : sinr) acc += std::log2(1.0 + s);
  return 0.5 * acc;
}

double sum_rate_realization(const ComplexMatrix& h, const ComplexMatrix& g, const PrecodingSet& ps) {
  return sum_rate_from_sinr(sinr_all(h, g, ps));
}

namespace {

// Runs `body(H, G, quantizer_stream)` on the trial's channel draw, redrawing
// while it reports NumericalFailure. Returns the body's value and bumps
// `discards` for each rejected draw.
template <class Body>
auto run_trial(const SystemConfig& cfg, std::size_t trial, std::size_t& discards, Body&& body) {
  const RngStream base(cfg.seed, trial);
  RngStream chan = base.fork(stream_tag::kChannel);
  RngStream quant = base.fork(stream_tag::kQuantizer);
  for (;;) {
    const ComplexMatrix h = sample_gaussian_matrix(cfg.N, cfg.M, chan);
    const ComplexMatrix g = sample_gaussian_matrix(cfg.N, cfg.N, chan);
    try {
      return body(h, g, quant);
    } catch (const NumericalFailure&) {
      if (++discards > kMaxDiscardsPerTrial)
        throw NumericalFailure("trial " + std::to_string(trial) + ": too many singular channel draws");
    }
  }
}

void check_trials(const SystemConfig& cfg) {
  cfg.validate();
  if (cfg.trials == 0) throw std::invalid_argument("Monte Carlo: trials must be >= 1");
}

}  // namespace

ModeSamples simulate_rates(const SystemConfig& cfg, CsiMode mode) {
  check_trials(cfg);
  struct Out {
    double rate = 0.0;
    std::size_t discards = 0;
  };
  const auto outs = parallel_map(cfg.trials, cfg.threads, [&](std::size_t i) {
    Out o;
    o.rate = run_trial(cfg, i, o.discards, [&](const ComplexMatrix& h, const ComplexMatrix& g, RngStream& q) {
      const PrecodingSet ps = mode == CsiMode::perfect ? build_perfect(h, g, cfg) : build_quantized(h, g, cfg, q);
      return sum_rate_realization(h, g, ps);
    });
    return o;
  });
  ModeSamples s;
  s.rates.reserve(outs.size());
  for (const Out& o : outs) {
    s.rates.push_back(o.rate);
    s.discards += o.discards;
  }
  return s;
}

PairedSamples simulate_paired(const SystemConfig& cfg) {
  check_trials(cfg);
  struct Out {
    double perfect = 0.0;
    double quantized = 0.0;
    std::size_t discards = 0;
  };
  const auto outs = parallel_map(cfg.trials, cfg.threads, [&](std::size_t i) {
    Out o;
    const auto rates = run_trial(cfg, i, o.discards, [&](const ComplexMatrix& h, const ComplexMatrix& g, RngStream& q) {
      const PrecodingSet p = build_perfect(h, g, cfg);
      const PrecodingSet qs = build_quantized(h, g, cfg, q);
      return std::pair{sum_rate_realization(h, g, p), sum_rate_realization(h, g, qs)};
    });
    o.perfect = rates.first;
    o.quantized = rates.second;
    return o;
  });
  PairedSamples s;
  s.perfect.reserve(outs.size());
  s.quantized.reserve(outs.size());
  for (const Out& o : outs) {
    s.perfect.push_back(o.perfect);
    s.quantized.push_back(o.quantized);
    s.discards += o.discards;
  }
  return s;
}

RateEstimate monte_carlo_rate(const SystemConfig& cfg, CsiMode mode) {
  const ModeSamples s = simulate_rates(cfg, mode);
  return summarize(s.rates, s.discards);
}

PairedRates paired_rates(const SystemConfig& cfg) {
  const PairedSamples s = simulate_paired(cfg);
  std::vector<double> loss(s.perfect.size());
  const double n = static_cast<double>(cfg.N);
  for (std::size_t i = 0; i < loss.size(); ++i) loss[i] = (s.perfect[i] - s.quantized[i]) / n;
  return {summarize(s.perfect, s.discards), summarize(s.quantized, s.discards), summarize(loss, s.discards)};
}

RateEstimate rate_loss(const SystemConfig& cfg) { return paired_rates(cfg).loss_per_user; }

}  // namespace relaybc
