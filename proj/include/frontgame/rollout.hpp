#pragma once

#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "frontgame/dpp_solver.hpp"

namespace frontgame {

enum class Termination { hit_target, exited_box, step_limit };

std::string to_string(Termination t);

struct Trajectory {
  std::vector<Vec> points;  // y_0 ... y_N
  std::vector<std::pair<StrategyI, StrategyII>> strategies;  // move j leads to y_j
  Termination terminated = Termination::step_limit;
  double epsilon = 0;
  double final_G = 0;  // G(y_N) on hit_target
  double payoff_transformed = 1.0;
  double payoff_time = kInfinity;

  // Bookkeeping of the epsilon-optimal rollout, zero for other strategies.
  double start_value = 1.0;         // interpolated solved value at y_0
  double interpolation_slack = 0;   // sum_j e^{-(j-1) eps^2} |u(y_{j-1}) - m_j|
  double selection_slack = 0;       // sum_j e^{-(j-1) eps^2} theta_j, at most alpha

  std::size_t steps() const { return strategies.size(); }
};

/// Player I picks, at step j, the first candidate whose max over signs lies
/// within alpha / 2^j of the minimum; Player II picks the maximizing sign.
Trajectory epsilon_optimal_rollout(const ProblemConfig& config, const ValueField& solved,
                                   const Vec& x, double alpha, long step_cap);

/// R(sigma, c) = 2 C0^2 / c0 + 1 with C0 the Frobenius bound of sigma.
double capture_radius(const AnisotropyModel& model);

/// Radial strategy v1 = v2 = -y/|y|, w = I against the sign vector that
/// maximizes the next radius. The target is the closed ball of target_radius
/// about the origin.
Trajectory concentric_rollout(const AnisotropyModel& model, double target_radius, const Vec& x,
                              double eps, long step_cap);

/// Step cap used when none is given: 4x the concentric step bound when the
/// forcing is positive, else 10^6.
long default_step_cap(const AnisotropyModel& model, double distance, double eps);

struct Payoff {
  double transformed;
  double time;
};

/// time = eps^2 N + G(y_N) on hit_target, else +inf.
Payoff payoff(const Trajectory& traj, double eps);

/// Points rebuilt from y_0 and the stored strategies.
std::vector<Vec> replay(const Trajectory& traj, const AnisotropyModel& model);

/// CSV `step,x0..,v1_0..,s0..`; row 0 is the start point with empty move.
void write_trajectory_csv(std::ostream& out, const Trajectory& traj);
void write_trajectory_csv(const std::string& path, const Trajectory& traj);

}  // namespace frontgame
