#pragma once

#include <algorithm>
#include <cmath>
#include <cstddef>
#include <functional>
#include <limits>
#include <vector>

#include "frontgame/anisotropy.hpp"
#include "frontgame/linalg.hpp"

namespace frontgame {

inline constexpr double kInfinity = std::numeric_limits<double>::infinity();

/// Player I's move: v1 fixes the diffusion plane and forcing speed, v2 the
/// forcing direction, w an orthonormal basis of R^(n-1).
struct StrategyI {
  Vec v1;
  Vec v2;
  Mat w;
};

/// Player II's move: one sign per basis vector.
struct StrategyII {
  std::vector<int> signs;
};

/// Kruzhkov transform 1 - exp(-r); psi(+inf) = 1.
double psi(double r);
/// Inverse transform; psi_inv(1) = +inf. Throws OutOfRange for u > 1.
double psi_inv(double u);

/// eps sqrt(2) sum_i b_i sigma(v1) w_i + eps^2 c(v1) v2.
Vec step_delta(const AnisotropyModel& model, double eps, const StrategyI& s1,
               const StrategyII& s2);

/// All 2^m sign vectors, lexicographic with +1 before -1.
std::vector<StrategyII> sign_set(int m);

/// Rotation of R^2 by angle, used as the basis w in 3-D.
Mat basis_rotation(double angle);

/// Uniform v1 samples on the half sphere with v2 = -v1, preceded by the
/// seeded analytic optimum (grad/|grad|, -grad/|grad|) when a hint is given.
/// In 3-D each direction is paired with n_basis rotations by k*pi/n_basis.
///
/// With full_drift every uniform v1 is also offered with v2 = +v1. Half-sphere
/// v1 with v2 = -v1 alone only drifts into one half-space.
std::vector<StrategyI> strategy_candidates(const AnisotropyModel& model,
                                           const Vec* grad_hint, int n_dir, int n_basis,
                                           bool full_drift = false);

/// Precomputed displacements x + delta for a candidate list and all signs.
class StepTable {
 public:
  StepTable() = default;
  StepTable(const AnisotropyModel& model, double eps, const std::vector<StrategyI>& candidates);

  std::size_t candidates() const { return n_cand_; }
  std::size_t signs() const { return n_sign_; }
  int dimension() const { return dim_; }
  /// Pointer to the dim-long displacement for (candidate, sign).
  const double* step(std::size_t cand, std::size_t sign) const {
    return steps_.data() + (cand * n_sign_ + sign) * dim_;
  }
  /// Largest displacement length in the table.
  double max_step() const { return max_step_; }

 private:
  std::vector<double> steps_;
  std::size_t n_cand_ = 0;
  std::size_t n_sign_ = 0;
  int dim_ = 0;
  double max_step_ = 0;
};

/// Discounted one-step value 1 - e^{-eps^2} + e^{-eps^2} s, written so that
/// s = 1 maps to exactly 1.
inline double discounted(double eps, double s) {
  return std::min(1.0, 1.0 - std::exp(-eps * eps) * (1.0 - s));
}

struct MinMaxResult {
  double value = kInfinity;     // discounted min-max
  double sampler_value = 1.0;   // min over candidates of max over signs of sampler
  std::size_t candidate = 0;    // argmin, first in order on ties
  std::size_t sign = 0;         // maximizing sign for that candidate
};

/// min over candidates of max over signs of the sampler at x + delta. Signs
/// are abandoned as soon as a candidate can no longer beat the incumbent,
/// which leaves the value and the first-in-order argmin unchanged.
template <typename Sampler>
MinMaxResult minmax_steps(const StepTable& table, const double* x, Sampler&& sampler,
                          double eps) {
  MinMaxResult best;
  best.sampler_value = kInfinity;
  const int dim = table.dimension();
  double y[kMaxDim];
  for (std::size_t c = 0; c < table.candidates(); ++c) {
    double worst = -kInfinity;
    std::size_t worst_sign = 0;
    bool pruned = false;
    for (std::size_t s = 0; s < table.signs(); ++s) {
      const double* d = table.step(c, s);
      for (int i = 0; i < dim; ++i) y[i] = x[i] + d[i];
      const double v = sampler(static_cast<const double*>(y));
      if (v > worst) {
        worst = v;
        worst_sign = s;
      }
      if (worst >= best.sampler_value) {
        pruned = true;
        break;
      }
    }
    if (!pruned && worst < best.sampler_value) {
      best.sampler_value = worst;
      best.candidate = c;
      best.sign = worst_sign;
    }
  }
  best.value = discounted(eps, best.sampler_value);
  return best;
}

using PointSampler = std::function<double(const Vec&)>;

/// Inner min-max of the discounted dynamic programming principle at x.
double inner_minmax(const AnisotropyModel& model, double eps, const Vec& x,
                    const PointSampler& sampler, const std::vector<StrategyI>& candidates);

MinMaxResult inner_minmax_detail(const AnisotropyModel& model, double eps, const Vec& x,
                                 const PointSampler& sampler,
                                 const std::vector<StrategyI>& candidates);

}  // namespace frontgame
