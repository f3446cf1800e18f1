#include "frontgame/rollout.hpp"

#include <cmath>
#include <fstream>

#include "frontgame/error.hpp"
#include "frontgame/field_io.hpp"

namespace frontgame {

namespace {

// Player I searches a denser direction set than the solver. Off-grid points
// carry interpolation error of order h |Du|, which can exceed the per-step
// value decrease when the best direction falls between solver samples.
constexpr int kRolloutDirFactor = 8;

void finish_payoff(Trajectory& t) {
  const Payoff p = payoff(t, t.epsilon);
  t.payoff_transformed = p.transformed;
  t.payoff_time = p.time;
}

// Central-difference gradient of the interpolated field at an arbitrary point.
Vec point_gradient(const ValueField& field, const Vec& y) {
  const double h = field.grid.spacing;
  Vec g(y.size());
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    Vec a = y, b = y;
    a(i) += h;
    b(i) -= h;
    g(i) = (interpolate(field, a) - interpolate(field, b)) / (2 * h);
  }
  return g;
}

}  // namespace

std::string to_string(Termination t) {
  switch (t) {
    case Termination::hit_target: return "hit_target";
    case Termination::exited_box: return "exited_box";
    case Termination::step_limit: return "step_limit";
  }
  return "unknown";
}

Trajectory epsilon_optimal_rollout(const ProblemConfig& config, const ValueField& solved,
                                   const Vec& x, double alpha, long step_cap) {
  if (config.target.contains(x)) throw Error(ErrorCode::StartInsideTarget, "start lies in target");
  if (!config.grid.contains(x.data()))
    throw Error(ErrorCode::StartOutsideBox, "start lies outside the box");
  if (!(alpha > 0)) throw Error(ErrorCode::InvalidConfig, "alpha must be positive");

  const double eps = config.epsilon;
  const double h = config.grid.spacing;
  const auto signs = sign_set(config.model.dimension() - 1);
  Trajectory t;
  t.epsilon = eps;
  t.points.push_back(x);
  t.start_value = interpolate(solved, x);
  t.terminated = Termination::step_limit;

  double weight = 1.0;  // e^{-(j-1) eps^2}
  double budget = alpha;
  for (long j = 1; j <= step_cap; ++j) {
    budget *= 0.5;
    const Vec y = t.points.back();
    const Vec grad = point_gradient(solved, y);
    const bool hinted = grad.norm() >= 1e-10 / h;
    const auto cands = strategy_candidates(config.model, hinted ? &grad : nullptr,
                                           kRolloutDirFactor * config.n_dir, config.n_basis, true);
    const StepTable table(config.model, eps, cands);

    std::vector<double> worst(table.candidates(), -kInfinity);
    std::vector<std::size_t> worst_sign(table.candidates(), 0);
    double m = kInfinity;
    for (std::size_t c = 0; c < table.candidates(); ++c) {
      for (std::size_t s = 0; s < table.signs(); ++s) {
        double z[kMaxDim];
        const double* d = table.step(c, s);
        for (Eigen::Index i = 0; i < y.size(); ++i) z[i] = y(i) + d[i];
        const double v = sample_field(config, solved, z);
        if (v > worst[c]) worst[c] = v, worst_sign[c] = s;
      }
      m = std::min(m, discounted(eps, worst[c]));
    }
    std::size_t pick = 0;
    while (discounted(eps, worst[pick]) > m + budget) ++pick;

    const double chosen = discounted(eps, worst[pick]);
    t.interpolation_slack += weight * std::abs(interpolate(solved, y) - m);
    t.selection_slack += weight * (chosen - m);
    weight *= std::exp(-eps * eps);

    const StrategyII& s2 = signs[worst_sign[pick]];
    const Vec next = y + step_delta(config.model, eps, cands[pick], s2);
    t.strategies.emplace_back(cands[pick], s2);
    t.points.push_back(next);
    if (config.target.contains(next)) {
      t.terminated = Termination::hit_target;
      t.final_G = config.target.G(next);
      break;
    }
    if (!config.grid.contains(next.data())) {
      t.terminated = Termination::exited_box;
      break;
    }
  }
  finish_payoff(t);
  return t;
}

double capture_radius(const AnisotropyModel& model) {
  const double c0 = model.min_forcing();
  if (!(c0 > 0)) throw Error(ErrorCode::DegenerateForcing, "min c must be positive");
  const double C0 = model.sigma_norm_bound();
  return 2 * C0 * C0 / c0 + 1;
}

Trajectory concentric_rollout(const AnisotropyModel& model, double target_radius, const Vec& x,
                              double eps, long step_cap) {
  const double R = capture_radius(model);
  if (target_radius < R)
    throw Error(ErrorCode::RadiusTooSmall, "target radius " + std::to_string(target_radius) +
                                               " below R = " + std::to_string(R));
  if (x.norm() <= target_radius) throw Error(ErrorCode::StartInsideTarget, "start in target ball");

  const int n = model.dimension();
  const auto signs = sign_set(n - 1);
  Trajectory t;
  t.epsilon = eps;
  t.points.push_back(x);
  for (long j = 1; j <= step_cap; ++j) {
    const Vec& y = t.points.back();
    const Vec v = -y / y.norm();
    const StrategyI s1{v, v, Mat::Identity(n - 1, n - 1)};
    std::size_t pick = 0;
    double far = -1;
    for (std::size_t s = 0; s < signs.size(); ++s) {
      const double r = (y + step_delta(model, eps, s1, signs[s])).norm();
      if (r > far) far = r, pick = s;
    }
    const Vec next = y + step_delta(model, eps, s1, signs[pick]);
    t.strategies.emplace_back(s1, signs[pick]);
    t.points.push_back(next);
    if (next.norm() <= target_radius) {
      t.terminated = Termination::hit_target;
      break;
    }
  }
  finish_payoff(t);
  return t;
}

long default_step_cap(const AnisotropyModel& model, double distance, double eps) {
  const double c0 = model.min_forcing();
  if (!(c0 > 0)) return 1'000'000;
  return 4 * static_cast<long>(std::ceil(distance / (eps * eps * c0 / 2)));
}

Payoff payoff(const Trajectory& traj, double eps) {
  if (traj.terminated != Termination::hit_target) return {1.0, kInfinity};
  const double n_eps2 = static_cast<double>(traj.steps()) * eps * eps;
  const double g = psi(traj.final_G);
  return {-std::expm1(-n_eps2) + std::exp(-n_eps2) * g, n_eps2 + traj.final_G};
}

std::vector<Vec> replay(const Trajectory& traj, const AnisotropyModel& model) {
  std::vector<Vec> pts{traj.points.front()};
  for (const auto& [s1, s2] : traj.strategies)
    pts.push_back(pts.back() + step_delta(model, traj.epsilon, s1, s2));
  return pts;
}

void write_trajectory_csv(std::ostream& out, const Trajectory& traj) {
  const auto dim = traj.points.front().size();
  out << "step";
  for (Eigen::Index i = 0; i < dim; ++i) out << ",x" << i;
  for (Eigen::Index i = 0; i < dim; ++i) out << ",v1_" << i;
  for (Eigen::Index i = 0; i + 1 < dim; ++i) out << ",s" << i;
  out << '\n';
  for (std::size_t j = 0; j < traj.points.size(); ++j) {
    out << j;
    for (Eigen::Index i = 0; i < dim; ++i) out << ',' << format_double(traj.points[j](i));
    if (j == 0) {
      for (Eigen::Index i = 0; i < 2 * dim - 1; ++i) out << ',';
    } else {
      const auto& [s1, s2] = traj.strategies[j - 1];
      for (Eigen::Index i = 0; i < dim; ++i) out << ',' << format_double(s1.v1(i));
      for (int s : s2.signs) out << ',' << s;
    }
    out << '\n';
  }
}

void write_trajectory_csv(const std::string& path, const Trajectory& traj) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  write_trajectory_csv(out, traj);
}

}  // namespace frontgame
