#include "frontgame/game_core.hpp"

#include <cmath>
#include <numbers>

#include "frontgame/error.hpp"

namespace frontgame {

double psi(double r) {
  if (r == kInfinity) return 1.0;
  return -std::expm1(-r);
}

double psi_inv(double u) {
  if (u > 1.0) throw Error(ErrorCode::OutOfRange, "psi_inv needs u <= 1");
  if (u == 1.0) return kInfinity;
  return -std::log1p(-u);
}

Vec step_delta(const AnisotropyModel& model, double eps, const StrategyI& s1,
               const StrategyII& s2) {
  const Mat sigma = sigma_of(model, s1.v1);
  Vec b(static_cast<Eigen::Index>(s2.signs.size()));
  for (std::size_t i = 0; i < s2.signs.size(); ++i) b(i) = s2.signs[i];
  return eps * std::numbers::sqrt2 * (sigma * (s1.w * b)) +
         eps * eps * forcing_of(model, s1.v1) * s1.v2;
}

std::vector<StrategyII> sign_set(int m) {
  if (m < 1) throw Error(ErrorCode::OutOfRange, "sign_set needs m >= 1");
  if (m > 12) throw Error(ErrorCode::TooManySigns, "m = " + std::to_string(m));
  std::vector<StrategyII> out;
  out.reserve(std::size_t{1} << m);
  for (unsigned code = 0; code < (1u << m); ++code) {
    StrategyII s;
    s.signs.resize(m);
    for (int i = 0; i < m; ++i) s.signs[i] = (code >> (m - 1 - i)) & 1u ? -1 : 1;
    out.push_back(std::move(s));
  }
  return out;
}

Mat basis_rotation(double angle) {
  Mat w(2, 2);
  w << std::cos(angle), -std::sin(angle), std::sin(angle), std::cos(angle);
  return w;
}

std::vector<StrategyI> strategy_candidates(const AnisotropyModel& model, const Vec* grad_hint,
                                           int n_dir, int n_basis, bool full_drift) {
  if (n_dir < 4) throw Error(ErrorCode::OutOfRange, "n_dir must be >= 4");
  if (n_basis < 1) throw Error(ErrorCode::OutOfRange, "n_basis must be >= 1");
  const int dim = model.dimension();

  std::vector<Mat> bases;
  if (dim == 2) {
    bases.push_back(Mat::Identity(1, 1));
  } else {
    for (int k = 0; k < n_basis; ++k)
      bases.push_back(basis_rotation(std::numbers::pi * k / n_basis));
  }

  std::vector<StrategyI> out;
  auto add_direction = [&](const Vec& v, const Vec& drift) {
    for (const Mat& w : bases) out.push_back(StrategyI{v, drift, w});
  };
  if (grad_hint != nullptr && grad_hint->norm() > 0) {
    const Vec g = grad_hint->normalized();
    add_direction(g, -g);
  }
  const auto dirs = dim == 2 ? half_circle_directions(n_dir) : hemisphere_directions(n_dir);
  for (const Vec& v : dirs) {
    add_direction(v, -v);
    if (full_drift) add_direction(v, v);
  }
  return out;
}

StepTable::StepTable(const AnisotropyModel& model, double eps,
                     const std::vector<StrategyI>& candidates)
    : n_cand_(candidates.size()), dim_(model.dimension()) {
  const auto signs = sign_set(dim_ - 1);
  n_sign_ = signs.size();
  steps_.resize(n_cand_ * n_sign_ * dim_);
  for (std::size_t c = 0; c < n_cand_; ++c) {
    for (std::size_t s = 0; s < n_sign_; ++s) {
      const Vec d = step_delta(model, eps, candidates[c], signs[s]);
      max_step_ = std::max(max_step_, d.norm());
      for (int i = 0; i < dim_; ++i) steps_[(c * n_sign_ + s) * dim_ + i] = d(i);
    }
  }
}

MinMaxResult inner_minmax_detail(const AnisotropyModel& model, double eps, const Vec& x,
                                 const PointSampler& sampler,
                                 const std::vector<StrategyI>& candidates) {
  const StepTable table(model, eps, candidates);
  const int dim = model.dimension();
  Vec y(dim);
  return minmax_steps(
      table, x.data(),
      [&](const double* p) {
        for (int i = 0; i < dim; ++i) y(i) = p[i];
        return sampler(y);
      },
      eps);
}

double inner_minmax(const AnisotropyModel& model, double eps, const Vec& x,
                    const PointSampler& sampler, const std::vector<StrategyI>& candidates) {
  return inner_minmax_detail(model, eps, x, sampler, candidates).value;
}

}  // namespace frontgame
