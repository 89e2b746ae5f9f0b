#pragma once

#include <cmath>
#include <cstddef>
#include <limits>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace mvfp {

struct CsaConfig {
  int max_iterations = 50;     // k_max
  double initial_step = 1.0;   // s_0
  double step_decay = 0.997;   // q, multiplicative per iteration
  int stall_limit = 30;        // consecutive non-improving iterations before stop
  double improvement_tol = 1e-12;
  bool record_values = false;
};

struct CsaTrace {
  std::vector<double> best_point;
  double best_value = std::numeric_limits<double>::infinity();
  double initial_value = std::numeric_limits<double>::infinity();
  int iterations = 0;
  std::vector<double> values;  // f(u_k) per iteration when recording
};

// Conjugate sub-gradient minimization.
//
// The oracle is called as `double f = oracle(u, g)` with u the current point
// and g an output span of the same length receiving one subdifferential
// member; both value and subgradient come from a single call so the global
// and the legalization objectives share the solver.
//
// Per iteration k (directions restart automatically at k = 1 since the two
// stored subgradients coincide):
//   eta_k = g_k . (g_k - g_{k-1}) / |g_{k-1}|^2     (0 when |g_{k-1}| = 0)
//   d_k   = -g_k + eta_k d_{k-1}
//   u_k   = u_{k-1} + (s_{k-1} / |d_k|) d_k          (no move when |d_k| = 0)
//   s_k   = q s_{k-1}
// Stops when k exceeds max_iterations or stall_limit consecutive iterations
// fail to improve the best value by more than improvement_tol.
template <typename Oracle>
CsaTrace csa_minimize(Oracle&& oracle, std::vector<double> u0, const CsaConfig& config) {
  const std::size_t n = u0.size();
  if (config.max_iterations < 1) throw std::invalid_argument("csa needs max_iterations >= 1");
  if (!(config.initial_step > 0)) throw std::invalid_argument("csa needs a positive initial step");
  if (!(config.step_decay > 0) || !(config.step_decay < 1))
    throw std::invalid_argument("csa step decay must be in (0,1)");
  if (config.stall_limit < 1) throw std::invalid_argument("csa needs stall_limit >= 1");

  std::vector<double> u = std::move(u0);
  std::vector<double> g_cur(n, 0.0), g_prev(n, 0.0), d(n, 0.0);

  const double f0 = oracle(std::span<const double>(u), std::span<double>(g_cur));
  if (!std::isfinite(f0))
    throw std::runtime_error("csa: oracle returned a non-finite value at the start point (" +
                             std::to_string(f0) + ")");

  CsaTrace trace;
  trace.initial_value = f0;
  trace.best_value = f0;
  trace.best_point = u;
  g_prev = g_cur;

  double s = config.initial_step;
  int stall = 0;
  int k = 1;
  for (; k <= config.max_iterations && stall < config.stall_limit; ++k) {
    double gp_norm_sq = 0;
    for (std::size_t i = 0; i < n; ++i) gp_norm_sq += g_prev[i] * g_prev[i];
    double eta = 0;
    if (gp_norm_sq > 0) {
      double num = 0;
      for (std::size_t i = 0; i < n; ++i) num += g_cur[i] * (g_cur[i] - g_prev[i]);
      eta = num / gp_norm_sq;
    }
    double d_norm_sq = 0;
    for (std::size_t i = 0; i < n; ++i) {
      d[i] = -g_cur[i] + eta * d[i];
      d_norm_sq += d[i] * d[i];
    }
    if (d_norm_sq > 0) {
      const double step = s / std::sqrt(d_norm_sq);
      for (std::size_t i = 0; i < n; ++i) u[i] += step * d[i];
    }
    s *= config.step_decay;

    std::swap(g_prev, g_cur);
    const double fk = oracle(std::span<const double>(u), std::span<double>(g_cur));
    if (!std::isfinite(fk))
      throw std::runtime_error("csa: oracle returned a non-finite value at iteration " +
                               std::to_string(k));
    if (config.record_values) trace.values.push_back(fk);
    if (fk < trace.best_value - config.improvement_tol) {
      trace.best_value = fk;
      trace.best_point = u;
      stall = 0;
    } else {
      ++stall;
    }
  }
  trace.iterations = k - 1;
  return trace;
}

}  // namespace mvfp
