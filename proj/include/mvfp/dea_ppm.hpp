#pragma once

#include <array>
#include <cstdint>
#include <span>
#include <vector>

#include "mvfp/model.hpp"
#include "mvfp/rng.hpp"

namespace mvfp {

using OrientationVector = std::vector<Orientation>;
using SolutionPopulation = std::vector<OrientationVector>;

// 4 x n matrix with unit-L2-norm columns; column j models the orientation
// distribution of module j, code l drawn with probability q_{lj}^2.
class ProbabilityMatrix {
 public:
  using Column = std::array<double, 4>;

  // all entries 1/2: every orientation equally likely
  static ProbabilityMatrix uniform(std::size_t n);

  std::size_t columns() const { return cols_.size(); }
  Column& column(std::size_t j) { return cols_[j]; }
  const Column& column(std::size_t j) const { return cols_[j]; }

  // largest |norm - 1| over columns
  double max_norm_deviation() const;

 private:
  std::vector<Column> cols_;
};

using DistributionPopulation = std::vector<ProbabilityMatrix>;

struct DeaParams {
  int population = 5;           // np
  double alpha0 = 0.2;          // exploitation intensity, in (0,1)
  double lambda_disturb = 0.5;  // disturbance factor of the renormalizing update, in (0,1)
  double p0 = 0.85;             // exploitation probability
  double inherit_rate = 0.5;    // resampling probability per position, in (0,1]
  double max_rotation = 0.17453292519943295;  // pi/18, bound on the 2x2 rotation angle

  void validate() const;
};

// --- column-level primitives -------------------------------------------------

// draws code l with probability col[l]^2 (col must be unit-norm)
int sample_column(const ProbabilityMatrix::Column& col, Rng& rng);

// col <- |M col| then renormalized; M is 4x4 row-major
void apply_orthogonal(ProbabilityMatrix::Column& col, const std::array<double, 16>& m);

// orthonormal 4x4 with determinant +1 (Gram-Schmidt over normal deviates)
std::array<double, 16> random_orthogonal4(Rng& rng);

// exploitation: reweight toward `incumbent` with intensity alpha0, then rotate
// the (sampled, incumbent) amplitude pair by dtheta (no-op when they coincide)
void exploitation_update(ProbabilityMatrix::Column& col, int incumbent, int sampled,
                         double alpha0, double dtheta);

// disturbance: renormalizing reweighting away from `code`; the formula yields
// the new squared entries, the column is rebuilt by square roots
void disturbance_update(ProbabilityMatrix::Column& col, int code, double lambda_disturb);

// --- population operations ---------------------------------------------------

// np copies of the all-1/2 matrix
DistributionPopulation init_distribution(std::size_t n, int np);

// one fresh orientation vector per matrix (no inheritance)
SolutionPopulation sample_fresh(const DistributionPopulation& q, std::uint64_t seed,
                                std::uint64_t generation);

// Orthogonal exploration: the m worst members (by fitness, lower better) are
// replaced by copies with c random columns hit by random orthogonal
// transforms; m in [1, np/2], c in [1, n/10] (both at least 1, m capped so
// the best member is never touched).
void orth_exp_q(DistributionPopulation& q, std::span<const double> fitness,
                std::uint64_t seed, std::uint64_t generation);

// Sampling with inheritance: per member and position, resample from the
// matrix column with probability inherit_rate, else keep the incumbent code.
SolutionPopulation sample_p(const DistributionPopulation& q, const SolutionPopulation& p,
                            const DeaParams& params, std::uint64_t seed,
                            std::uint64_t generation);

// Refinement toward the incumbent solutions: per member and column apply the
// exploitation update with probability p0, else the disturbance update.
// p_new supplies the sampled codes, p_old the incumbent codes.
void refine_q(const SolutionPopulation& p_new, const SolutionPopulation& p_old,
              DistributionPopulation& q, const DeaParams& params, std::uint64_t seed,
              std::uint64_t generation);

}  // namespace mvfp
