#include "mvfp/dea_ppm.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <stdexcept>

namespace mvfp {

namespace {

// stream tags per phase so the draws of different operations never alias
constexpr std::uint64_t kTagSampleFresh = 0x11;
constexpr std::uint64_t kTagOrth = 0x22;
constexpr std::uint64_t kTagSample = 0x33;
constexpr std::uint64_t kTagRefine = 0x44;

void renormalize(ProbabilityMatrix::Column& col) {
  double norm_sq = 0;
  for (double v : col) norm_sq += v * v;
  if (norm_sq <= 0) {
    col = {0.5, 0.5, 0.5, 0.5};
    return;
  }
  const double inv = 1.0 / std::sqrt(norm_sq);
  for (double& v : col) v *= inv;
}

}  // namespace

ProbabilityMatrix ProbabilityMatrix::uniform(std::size_t n) {
  ProbabilityMatrix q;
  q.cols_.assign(n, {0.5, 0.5, 0.5, 0.5});
  return q;
}

double ProbabilityMatrix::max_norm_deviation() const {
  double worst = 0;
  for (const Column& col : cols_) {
    double norm_sq = 0;
    for (double v : col) norm_sq += v * v;
    worst = std::max(worst, std::abs(std::sqrt(norm_sq) - 1.0));
  }
  return worst;
}

void DeaParams::validate() const {
  if (population < 1) throw std::invalid_argument("population must be >= 1");
  if (!(alpha0 > 0) || !(alpha0 < 1)) throw std::invalid_argument("alpha0 must be in (0,1)");
  if (!(lambda_disturb > 0) || !(lambda_disturb < 1))
    throw std::invalid_argument("lambda_disturb must be in (0,1)");
  if (!(p0 >= 0) || !(p0 <= 1)) throw std::invalid_argument("p0 must be in [0,1]");
  if (!(inherit_rate > 0) || !(inherit_rate <= 1))
    throw std::invalid_argument("inherit_rate must be in (0,1]");
  if (!(max_rotation >= 0)) throw std::invalid_argument("max_rotation must be >= 0");
}

int sample_column(const ProbabilityMatrix::Column& col, Rng& rng) {
  const double draw = rng.uniform();
  double acc = 0;
  for (int l = 0; l < 4; ++l) {
    acc += col[l] * col[l];
    if (draw < acc) return l;
  }
  return 3;  // guards the draw == total edge under rounding
}

void apply_orthogonal(ProbabilityMatrix::Column& col, const std::array<double, 16>& m) {
  ProbabilityMatrix::Column out{};
  for (int row = 0; row < 4; ++row) {
    double acc = 0;
    for (int k = 0; k < 4; ++k) acc += m[4 * row + k] * col[k];
    out[row] = std::abs(acc);  // amplitudes stay non-negative; |.| preserves the norm
  }
  renormalize(out);
  col = out;
}

std::array<double, 16> random_orthogonal4(Rng& rng) {
  std::array<double, 16> m{};
  for (;;) {
    for (double& v : m) v = rng.normal();
    // Gram-Schmidt on rows
    bool degenerate = false;
    for (int row = 0; row < 4 && !degenerate; ++row) {
      for (int prev = 0; prev < row; ++prev) {
        double dot = 0;
        for (int k = 0; k < 4; ++k) dot += m[4 * row + k] * m[4 * prev + k];
        for (int k = 0; k < 4; ++k) m[4 * row + k] -= dot * m[4 * prev + k];
      }
      double norm_sq = 0;
      for (int k = 0; k < 4; ++k) norm_sq += m[4 * row + k] * m[4 * row + k];
      if (norm_sq < 1e-12) {
        degenerate = true;
        break;
      }
      const double inv = 1.0 / std::sqrt(norm_sq);
      for (int k = 0; k < 4; ++k) m[4 * row + k] *= inv;
    }
    if (degenerate) continue;
    // 4x4 determinant by cofactor expansion over the first row
    auto det3 = [&](int r0, int r1, int r2, int c0, int c1, int c2) {
      return m[4 * r0 + c0] * (m[4 * r1 + c1] * m[4 * r2 + c2] - m[4 * r1 + c2] * m[4 * r2 + c1]) -
             m[4 * r0 + c1] * (m[4 * r1 + c0] * m[4 * r2 + c2] - m[4 * r1 + c2] * m[4 * r2 + c0]) +
             m[4 * r0 + c2] * (m[4 * r1 + c0] * m[4 * r2 + c1] - m[4 * r1 + c1] * m[4 * r2 + c0]);
    };
    const double det = m[0] * det3(1, 2, 3, 1, 2, 3) - m[1] * det3(1, 2, 3, 0, 2, 3) +
                       m[2] * det3(1, 2, 3, 0, 1, 3) - m[3] * det3(1, 2, 3, 0, 1, 2);
    if (det < 0)
      for (int k = 0; k < 4; ++k) m[4 * 3 + k] = -m[4 * 3 + k];
    return m;
  }
}

void exploitation_update(ProbabilityMatrix::Column& col, int incumbent, int sampled,
                         double alpha0, double dtheta) {
  ProbabilityMatrix::Column next{};
  for (int l = 0; l < 4; ++l) {
    const double base = (1.0 - alpha0) * col[l] * col[l];
    next[l] = std::sqrt(l == incumbent ? alpha0 + base : base);
  }
  if (sampled != incumbent) {
    const double c = std::cos(dtheta), s = std::sin(dtheta);
    const double a = next[sampled], b = next[incumbent];
    next[sampled] = std::abs(c * a - s * b);
    next[incumbent] = std::abs(s * a + c * b);
  }
  renormalize(next);
  col = next;
}

void disturbance_update(ProbabilityMatrix::Column& col, int code, double lambda_disturb) {
  const double q0_sq = col[code] * col[code];
  const double denom = 1.0 - (1.0 - lambda_disturb) * q0_sq;
  ProbabilityMatrix::Column next{};
  for (int l = 0; l < 4; ++l) {
    const double sq = col[l] * col[l];
    next[l] = std::sqrt((l == code ? lambda_disturb * sq : sq) / denom);
  }
  renormalize(next);
  col = next;
}

DistributionPopulation init_distribution(std::size_t n, int np) {
  if (n < 1 || np < 1) throw std::invalid_argument("need n >= 1 and np >= 1");
  return DistributionPopulation(static_cast<std::size_t>(np), ProbabilityMatrix::uniform(n));
}

SolutionPopulation sample_fresh(const DistributionPopulation& q, std::uint64_t seed,
                                std::uint64_t generation) {
  SolutionPopulation p(q.size());
  for (std::size_t i = 0; i < q.size(); ++i) {
    Rng rng = Rng::stream(seed, kTagSampleFresh, generation, i);
    const std::size_t n = q[i].columns();
    p[i].reserve(n);
    for (std::size_t j = 0; j < n; ++j)
      p[i].push_back(Orientation(sample_column(q[i].column(j), rng)));
  }
  return p;
}

void orth_exp_q(DistributionPopulation& q, std::span<const double> fitness,
                std::uint64_t seed, std::uint64_t generation) {
  const int np = static_cast<int>(q.size());
  if (np <= 1) return;  // nothing to replace without degrading the best member
  const std::size_t n = q.front().columns();

  Rng rng = Rng::stream(seed, kTagOrth, generation);
  const int m_cap = std::max(1, np / 2);
  const int m = std::min(rng.uniform_int(1, m_cap), np - 1);
  const int c_cap = std::max<std::size_t>(1, n / 10);
  const int c = rng.uniform_int(1, static_cast<int>(c_cap));

  // members ordered worst-first; ties by index keep the ordering total
  std::vector<int> idx(np);
  std::iota(idx.begin(), idx.end(), 0);
  std::sort(idx.begin(), idx.end(), [&](int a, int b) {
    return fitness[a] > fitness[b] || (fitness[a] == fitness[b] && a > b);
  });

  std::vector<int> cols(n);
  for (int w = 0; w < m; ++w) {
    ProbabilityMatrix& target = q[idx[w]];
    // choose c distinct columns by partial Fisher-Yates
    std::iota(cols.begin(), cols.end(), 0);
    for (int k = 0; k < c; ++k) {
      const int pick = rng.uniform_int(k, static_cast<int>(n) - 1);
      std::swap(cols[k], cols[pick]);
      const auto matrix = random_orthogonal4(rng);
      apply_orthogonal(target.column(cols[k]), matrix);
    }
  }
}

SolutionPopulation sample_p(const DistributionPopulation& q, const SolutionPopulation& p,
                            const DeaParams& params, std::uint64_t seed,
                            std::uint64_t generation) {
  SolutionPopulation out(p.size());
  for (std::size_t i = 0; i < p.size(); ++i) {
    Rng rng = Rng::stream(seed, kTagSample, generation, i);
    const std::size_t n = p[i].size();
    out[i].reserve(n);
    for (std::size_t j = 0; j < n; ++j) {
      if (rng.uniform() <= params.inherit_rate)
        out[i].push_back(Orientation(sample_column(q[i].column(j), rng)));
      else
        out[i].push_back(p[i][j]);
    }
  }
  return out;
}

void refine_q(const SolutionPopulation& p_new, const SolutionPopulation& p_old,
              DistributionPopulation& q, const DeaParams& params, std::uint64_t seed,
              std::uint64_t generation) {
  for (std::size_t i = 0; i < q.size(); ++i) {
    Rng rng = Rng::stream(seed, kTagRefine, generation, i);
    const std::size_t n = q[i].columns();
    for (std::size_t j = 0; j < n; ++j) {
      const int incumbent = p_old[i][j].code();
      const int sampled = p_new[i][j].code();
      if (rng.uniform() <= params.p0) {
        const double dtheta = rng.uniform(-params.max_rotation, params.max_rotation);
        exploitation_update(q[i].column(j), incumbent, sampled, params.alpha0, dtheta);
      } else {
        disturbance_update(q[i].column(j), incumbent, params.lambda_disturb);
      }
    }
  }
}

}  // namespace mvfp
