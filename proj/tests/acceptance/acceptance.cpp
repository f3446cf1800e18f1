// Runs every acceptance criterion at its stated tolerance and prints one
// PASS/FAIL line per criterion. Exit status is nonzero if any fails.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <sstream>
#include <string>
#include <vector>

#include "frontgame/dpp_solver.hpp"
#include "frontgame/error.hpp"
#include "frontgame/field_io.hpp"
#include "frontgame/rollout.hpp"
#include "frontgame/verification.hpp"

using namespace frontgame;

namespace {

Vec vec2(double a, double b) {
  Vec v(2);
  v << a, b;
  return v;
}

AnisotropyModel isotropic(double b, double c) {
  return make_model(DirectionFunction::constant(b), DirectionFunction::constant(c), 2);
}

ProblemConfig disk(double b, double c, double radius, double half, double h, double eps,
                   int n_dir) {
  ProblemConfig p;
  p.model = isotropic(b, c);
  p.target = TargetSet(Ball{vec2(0, 0), radius}, BoundaryData::constant(0));
  const int n = static_cast<int>(std::lround(2 * half / h)) + 1;
  p.grid = GridSpec{vec2(-half, -half), h, {n, n}};
  p.epsilon = eps;
  p.n_dir = n_dir;
  p.tolerance = 1e-6;
  p.seed = 1;
  return p;
}

std::string field_csv(const ValueField& f) {
  std::ostringstream out;
  write_field_csv(out, f, arrival_field(f, 1e-12));
  return out.str();
}

struct Outcome {
  bool pass;
  std::string detail;
};

int failures = 0;

void run(const std::string& name, const std::function<Outcome()>& fn) {
  const auto t0 = std::chrono::steady_clock::now();
  Outcome o;
  try {
    o = fn();
  } catch (const std::exception& e) {
    o = {false, std::string("exception: ") + e.what()};
  }
  const double secs =
      std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!o.pass) ++failures;
  std::printf("%s %s: %s [%.1f s]\n", o.pass ? "PASS" : "FAIL", name.c_str(), o.detail.c_str(),
              secs);
  std::fflush(stdout);
}

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

}  // namespace

int main() {
  // Shared by criteria 4, 7 and 10.
  const ProblemConfig radial = disk(1, 2, 1, 3, 0.02, 0.05, 64);
  std::vector<SolveResult> levels;
  RefinementReport refinement;

  run("C1 contraction", [] {
    const auto p = disk(1, 2, 1, 3, 0.05, 0.1, 32);
    const auto r = contraction_test(p, 100, 11);
    const bool ok = r.pairs >= 100 && r.max_ratio <= std::exp(-0.01) + 1e-12;
    return Outcome{ok, fmt("grid 121x121, %d pairs, max ratio %.15f <= %.15f + 1e-12", r.pairs,
                           r.max_ratio, std::exp(-0.01))};
  });

  run("C2 monotonicity", [] {
    const auto p = disk(1, 2, 1, 3, 0.05, 0.1, 32);
    const auto r = monotonicity_test(p, 100, 12);
    const bool ok = r.pairs >= 100 && r.ok && r.worst_violation <= 1e-12;
    return Outcome{ok, fmt("%d ordered pairs, worst violation %.3e", r.pairs, r.worst_violation)};
  });

  run("C3 fixed-point bracket", [] {
    const auto p = disk(1, 2, 1, 3, 0.05, 0.1, 32);
    const auto s = solve(p);
    const auto next = apply_R(p, s.field);
    double change = 0;
    for (std::size_t k = 0; k < next.size(); ++k)
      change = std::max(change, std::abs(next.values[k] - s.field.values[k]));
    const bool ok = s.diagnostics.converged && change <= 1e-6;
    return Outcome{ok, fmt("%d iterations, extra sweep changes sup %.3e <= 1e-6",
                           s.diagnostics.iterations, change)};
  });

  run("C4 radial oracle", [&] {
    const std::vector<RefinementLevel> lv{{0.2, 0.08, 16}, {0.1, 0.04, 32}, {0.05, 0.02, 64}};
    refinement = refinement_study(radial, lv, RadialOracle{1, 1, 2, 2}, &levels);
    const auto& fine = levels.back();
    const auto U = arrival_field(fine.field, 1e-12);
    double worst = 0, at = 0;
    std::size_t used = 0;
    for (std::size_t k = 0; k < U.size(); ++k) {
      const double r = fine.field.grid.position(k).norm();
      if (r < 1.3 || r > 2.5) continue;
      const double exact = radial_arrival_oracle(1, r, 1, 2, 2);
      const double rel = std::abs(U[k] - exact) / exact;
      if (rel > worst) worst = rel, at = r;
      ++used;
    }
    const double u2 = radial_arrival_oracle(1, 2, 1, 2, 2);
    const bool ok = fine.diagnostics.converged && worst <= 0.10 && refinement.decreasing &&
                    std::abs(u2 - (0.5 + 0.25 * std::log(3.0))) <= 1e-9;
    return Outcome{ok, fmt("%zu nodes, sup rel error %.4f at r=%.3f (<= 0.10); refinement sup "
                           "errors %.4f > %.4f > %.4f; solve %.0f s",
                           used, worst, at, refinement.sup_errors[0], refinement.sup_errors[1],
                           refinement.sup_errors[2], fine.diagnostics.wall_time)};
  });

  run("C5 consistency order", [] {
    const std::vector<double> eps{0.2, 0.1, 0.05, 0.025};
    const std::vector<AnisotropyModel> models{
        make_model(DirectionFunction::trig2d(1, {0, 0.3}), DirectionFunction::trig2d(1.5, {0.2}),
                   2),
        make_model(DirectionFunction::ellipsoid({1, 2, 1.5}),
                   DirectionFunction::ellipsoid({2, 1, 3}), 3),
    };
    bool ok = true;
    double worst_upper = 0, worst_lower = 0;
    int cases = 0;
    for (const auto& m : models)
      for (const auto& q : reference_quadratics(m.dimension())) {
        const auto r = consistency_study(m, q.phi, q.x, eps, 4);
        const double fu = r.ratios_upper.back() / r.ratios_upper.front();
        const double fl = r.ratios_lower.back() / r.ratios_lower.front();
        worst_upper = std::max(worst_upper, fu);
        worst_lower = std::max(worst_lower, fl);
        ok = ok && q.phi.gradient.norm() >= 0.5 && fu <= 0.5 && fl <= 0.5;
        ++cases;
      }
    return Outcome{ok, fmt("%d quadratics (2-D and 3-D), worst last/first ratio upper %.4f, "
                           "lower %.4f (<= 0.5)",
                           cases, worst_upper, worst_lower)};
  });

  run("C6 capture bound", [] {
    const auto p = disk(1, 1, 3, 5, 0.05, 0.1, 32);
    const auto s = solve(p);
    const auto U = arrival_field(s.field, 1e-12);
    const auto b = capture_bound_check(s.field, U, p.model);
    const auto t = concentric_rollout(p.model, 3, vec2(5, 0), 0.1, 100000);
    int bad_steps = 0;
    for (std::size_t j = 1; j < t.points.size(); ++j)
      if (t.points[j - 1].norm() >= b.R &&
          t.points[j].norm() > t.points[j - 1].norm() - 0.01 / 2 + 1e-12)
        ++bad_steps;
    const bool ok = s.diagnostics.converged && std::abs(b.R - 3) < 1e-12 && b.checked > 0 &&
                    b.violations == 0 && t.terminated == Termination::hit_target &&
                    t.steps() <= 400 && bad_steps == 0;
    return Outcome{ok, fmt("R=%.3f, %zu finite nodes within |x| <= %.2f, max U-bound %.4f, "
                           "slack %.3f, %zu violations (box corners: %zu nodes, %zu above bound, "
                           "reported only); concentric N=%zu <= 400, %d shrinkage failures",
                           b.R, b.checked, b.inscribed_radius, b.max_excess, b.slack,
                           b.violations, b.excluded, b.excluded_violations, t.steps(),
                           bad_steps)};
  });

  run("C7 rollout bracketing", [&] {
    if (levels.size() != 3) return Outcome{false, "radial field unavailable"};
    const auto& field = levels.back().field;
    const double alpha = 1e-3;
    int good = 0;
    double worst_slack = 0;
    for (int k = 0; k < 10; ++k) {
      const double a = 0.63 * k + 0.1, r = 1.2 + 0.15 * k;
      const Vec x = vec2(r * std::cos(a), r * std::sin(a));
      const auto t = epsilon_optimal_rollout(radial, field, x, alpha, 100000);
      const double u = interpolate(field, x);
      const bool in = t.terminated == Termination::hit_target &&
                      t.payoff_transformed - alpha - t.interpolation_slack <= u &&
                      u <= t.payoff_transformed + t.interpolation_slack;
      good += in;
      worst_slack = std::max(worst_slack, t.interpolation_slack);
    }
    return Outcome{good == 10, fmt("%d/10 rollouts bracketed, alpha=1e-3, largest slack %.3e",
                                   good, worst_slack)};
  });

  run("C8 Wulff inclusion", [] {
    ProblemConfig p;
    p.model = make_model(DirectionFunction::constant(1), DirectionFunction::ellipsoid({4, 1}), 2);
    p.target = TargetSet(Ellipsoid{vec2(0, 0), vec2(2, 1)}, BoundaryData::constant(0));
    p.grid = GridSpec{vec2(-10.5, -5.5), 0.05, {421, 221}};
    p.epsilon = 0.1;
    p.n_dir = 32;
    const auto s = solve(p);
    const auto U = arrival_field(s.field, 1e-12);
    bool ok = s.diagnostics.converged;
    std::string detail;
    for (double t : {1.0, 2.0, 4.0}) {
      const auto w = wulff_inclusion_test(s.field, U, p.model, t, 1.0, 720);
      ok = ok && w.violations == 0 && w.checked > 0;
      detail += fmt("t=%g: max gauge %.4f <= %.4f (%zu nodes, %zu violations); ", t, w.max_gauge,
                    t + 1 + w.slack, w.checked, w.violations);
    }
    return Outcome{ok, detail};
  });

  run("C9 boundary-data locality", [] {
    auto p = disk(1, 2, 1.5, 3, 0.05, 0.1, 32);
    const double inner = 1.5 - p.max_step() - p.grid.spacing;
    auto data = [inner](double bump) {
      return BoundaryData::extension([inner, bump](const Vec& y) {
        const double r = y.norm();
        return 0.1 + 0.05 * y(0) + (r < inner ? bump * (inner - r) : 0.0);
      });
    };
    p.target = TargetSet(Ball{vec2(0, 0), 1.5}, data(0));
    const auto a = solve(p);
    p.target = TargetSet(Ball{vec2(0, 0), 1.5}, data(3));
    const auto b = solve(p);
    std::size_t compared = 0, changed = 0;
    for (std::size_t k = 0; k < a.field.size(); ++k) {
      if (a.field.target_mask[k] && a.field.grid.position(k).norm() < inner) continue;
      ++compared;
      changed += a.field.values[k] != b.field.values[k];
    }
    const bool ok = a.diagnostics.converged && b.diagnostics.converged && changed == 0;
    return Outcome{ok, fmt("G perturbed inside r < %.4f; %zu nodes compared, %zu changed", inner,
                           compared, changed)};
  });

  run("C10 determinism", [&] {
    if (levels.size() != 3) return Outcome{false, "radial field unavailable"};
    const auto again = solve(radial);
    const std::string a = field_csv(levels.back().field), b = field_csv(again.field);
    return Outcome{a == b, fmt("two runs of the radial config, %zu CSV bytes, identical=%s",
                               a.size(), a == b ? "yes" : "no")};
  });

  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
