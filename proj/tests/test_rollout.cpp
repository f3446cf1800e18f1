#include <doctest.h>

#include <cmath>
#include <sstream>

#include "frontgame/error.hpp"
#include "frontgame/rollout.hpp"
#include "helpers.hpp"

using namespace frontgame;
using test::vec;

namespace {

bool throws_code(ErrorCode code, auto&& fn) {
  try {
    fn();
  } catch (const Error& e) {
    return e.code() == code;
  }
  return false;
}

const SolveResult& radial_solution() {
  static const SolveResult r = [] {
    auto p = test::disk_problem(1, 2, 1, 4, 0.05, 0.1, 16);
    return solve(p);
  }();
  return r;
}

}  // namespace

TEST_CASE("epsilon_optimal_rollout examples") {
  const auto p = test::disk_problem(1, 2, 1, 4, 0.05, 0.1, 16);
  const auto& solved = radial_solution();
  REQUIRE(solved.diagnostics.converged);

  SUBCASE("distance two from the target") {
    const Vec x = vec({3, 0});
    const auto t = epsilon_optimal_rollout(p, solved.field, x, 1e-3, 10000);
    REQUIRE(t.terminated == Termination::hit_target);
    const double u = interpolate(solved.field, x);
    const double s = t.interpolation_slack;
    CHECK(t.payoff_transformed - 1e-3 - s <= u);
    CHECK(u <= t.payoff_transformed + s);
    CHECK(t.selection_slack <= 1e-3);
    // In time units the bracket widens by the derivative of psi_inv.
    CHECK(std::abs(t.payoff_time - psi_inv(u)) <= (1e-3 + s) / (1 - u) + 1e-12);
  }
  SUBCASE("one step suffices") {
    // (1.005 - 0.02)^2 + 2 * 0.1^2 < 1: the radial move forces both signs in.
    const Vec x = vec({1.005, 0});
    const auto t = epsilon_optimal_rollout(p, solved.field, x, 1e-3, 10000);
    REQUIRE(t.terminated == Termination::hit_target);
    CHECK(t.steps() == 1);
    CHECK(t.payoff_transformed == doctest::Approx(1 - std::exp(-0.01)).epsilon(1e-15));
  }
  SUBCASE("step cap zero") {
    const auto t = epsilon_optimal_rollout(p, solved.field, vec({3, 0}), 1e-3, 0);
    CHECK(t.terminated == Termination::step_limit);
    CHECK(t.payoff_transformed == 1.0);
    CHECK(t.payoff_time == kInfinity);
    CHECK(t.points.size() == 1);
  }
  CHECK(throws_code(ErrorCode::StartInsideTarget,
                    [&] { epsilon_optimal_rollout(p, solved.field, vec({0.5, 0}), 1e-3, 10); }));
  CHECK(throws_code(ErrorCode::StartOutsideBox,
                    [&] { epsilon_optimal_rollout(p, solved.field, vec({5, 0}), 1e-3, 10); }));
}

TEST_CASE("property: bracketing and replay of optimal rollouts") {
  const auto p = test::disk_problem(1, 2, 1, 4, 0.05, 0.1, 16);
  const auto& solved = radial_solution();
  for (int k = 0; k < 8; ++k) {
    const double a = 0.7 * k + 0.2, r = 1.3 + 0.3 * k;
    const Vec x = vec({r * std::cos(a), r * std::sin(a)});
    const double alpha = 1e-3;
    const auto t = epsilon_optimal_rollout(p, solved.field, x, alpha, 10000);
    REQUIRE(t.terminated == Termination::hit_target);
    const double u = interpolate(solved.field, x);
    CHECK(t.start_value == u);
    CHECK(t.payoff_transformed - alpha - t.interpolation_slack <= u);
    CHECK(u <= t.payoff_transformed + t.interpolation_slack);
    const auto pts = replay(t, p.model);
    REQUIRE(pts.size() == t.points.size());
    for (std::size_t j = 0; j < pts.size(); ++j) CHECK((pts[j] - t.points[j]).norm() == 0.0);
  }
}

TEST_CASE("concentric_rollout examples") {
  const auto m = test::isotropic(1, 1);
  CHECK(capture_radius(m) == doctest::Approx(3).epsilon(1e-12));
  const auto t = concentric_rollout(m, 3, vec({5, 0}), 0.1, 100000);
  CHECK(t.terminated == Termination::hit_target);
  CHECK(t.steps() <= 400);

  const double r = 3 + 0.01 / 4;
  const auto one = concentric_rollout(m, 3, vec({0, r}), 0.1, 100);
  CHECK(one.terminated == Termination::hit_target);
  CHECK(one.steps() == 1);

  CHECK(throws_code(ErrorCode::RadiusTooSmall, [&] { concentric_rollout(m, 1, vec({5, 0}), 0.1, 10); }));
  CHECK(throws_code(ErrorCode::DegenerateForcing,
                    [&] { concentric_rollout(test::isotropic(1, 0), 3, vec({5, 0}), 0.1, 10); }));
  CHECK(throws_code(ErrorCode::StartInsideTarget, [&] { concentric_rollout(m, 3, vec({2, 0}), 0.1, 10); }));
}

TEST_CASE("property: concentric shrinkage against the worst sign") {
  const std::vector<AnisotropyModel> models{
      test::isotropic(1, 1),
      make_model(DirectionFunction::trig2d(1, {0, 0.3}), DirectionFunction::trig2d(2, {0.5}), 2),
      make_model(DirectionFunction::ellipsoid({1, 2, 1.5}), DirectionFunction::ellipsoid({2, 1, 3}), 3),
  };
  for (const auto& m : models) {
    const double R = capture_radius(m);
    const double c0 = m.min_forcing();
    for (double eps : {0.2, 0.1, 0.05}) {
      Vec x = Vec::Zero(m.dimension());
      x(0) = 0.6 * (R + 3);
      x(m.dimension() - 1) += 0.8 * (R + 3);
      const auto t = concentric_rollout(m, R, x, eps, 1'000'000);
      REQUIRE(t.terminated == Termination::hit_target);
      CHECK(t.steps() <= static_cast<std::size_t>(std::ceil((x.norm() - R) / (eps * eps * c0 / 2))));
      for (std::size_t j = 1; j < t.points.size(); ++j)
        if (t.points[j - 1].norm() >= R)
          REQUIRE(t.points[j].norm() <= t.points[j - 1].norm() - eps * eps * c0 / 2 + 1e-12);
    }
  }
}

TEST_CASE("payoff examples") {
  Trajectory t;
  t.points.assign(11, vec({0, 0}));
  t.strategies.resize(10);
  t.terminated = Termination::hit_target;
  CHECK(payoff(t, 0.1).time == doctest::Approx(0.1).epsilon(1e-15));
  CHECK(std::abs(payoff(t, 0.1).transformed - psi(0.1)) <= 1e-10);

  t.terminated = Termination::exited_box;
  CHECK(payoff(t, 0.1).transformed == 1.0);
  CHECK(payoff(t, 0.1).time == kInfinity);

  t.terminated = Termination::hit_target;
  t.strategies.resize(5);
  t.final_G = 0.3;
  CHECK(payoff(t, 0.2).time == doctest::Approx(0.5).epsilon(1e-14));
  CHECK(std::abs(payoff(t, 0.2).transformed - psi(0.5)) <= 1e-10);
}

TEST_CASE("default_step_cap") {
  CHECK(default_step_cap(test::isotropic(1, 1), 2, 0.1) == 1600);
  CHECK(default_step_cap(test::isotropic(1, 0), 2, 0.1) == 1'000'000);
}

TEST_CASE("trajectory CSV layout") {
  const auto t = concentric_rollout(test::isotropic(1, 1), 3, vec({3.004, 0}), 0.1, 100);
  std::ostringstream out;
  write_trajectory_csv(out, t);
  std::istringstream in(out.str());
  std::string line;
  std::getline(in, line);
  CHECK(line == "step,x0,x1,v1_0,v1_1,s0");
  std::getline(in, line);
  CHECK(line == "0,3.004,0,,,");
  std::getline(in, line);
  CHECK(line.rfind("1,", 0) == 0);
  CHECK(std::count(line.begin(), line.end(), ',') == 5);
}
