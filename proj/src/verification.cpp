#include "frontgame/verification.hpp"

#include <algorithm>
#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <chrono>
#include <cmath>
#include <numbers>
#include <random>

#include "frontgame/error.hpp"
#include "frontgame/rollout.hpp"

namespace frontgame {

double radial_arrival_oracle(double r0, double r, double beta, double gamma, int n) {
  if (!(r0 > 0) || !(r >= r0)) throw Error(ErrorCode::OutOfRange, "need 0 < r0 <= r");
  if (!(gamma - beta * (n - 1) / r0 > 0))
    throw Error(ErrorCode::StalledFront, "front does not expand at r0");
  if (r == r0) return 0.0;
  auto speed_inv = [&](double s) { return 1.0 / (gamma - beta * (n - 1) / s); };
  double err = 0;
  return boost::math::quadrature::gauss_kronrod<double, 61>::integrate(speed_inv, r0, r, 20,
                                                                       1e-14, &err);
}

CaptureBound upper_bound_oracle(const AnisotropyModel& model, const Vec& x) {
  const double c0 = model.min_forcing();
  if (!(c0 > 0)) throw Error(ErrorCode::DegenerateForcing, "min c must be positive");
  const double C0 = model.sigma_norm_bound();
  return {2 * C0 * C0 / c0 + 1, 2 / c0 * x.norm() - 4 * C0 * C0 / (c0 * c0)};
}

double Quadratic::operator()(const Vec& x0, const Vec& y) const {
  const Vec d = y - x0;
  return value + gradient.dot(d) + 0.5 * d.dot(hessian * d);
}

namespace {

// Basis of R^(n-1) diagonalizing sigma^T H sigma at unit v.
Mat eigen_basis(const AnisotropyModel& model, const Vec& v, const Mat& H) {
  const Mat s = sigma_of(model, v);
  const Mat m = s.transpose() * H * s;
  Eigen::SelfAdjointEigenSolver<Mat> es(m);
  return es.eigenvectors();
}

// Unit vectors within angle `radius` of u: u itself plus a polar grid.
std::vector<Vec> local_cap(const Vec& u, double radius, int rings, int per_ring) {
  std::vector<Vec> out{u};
  const Mat T = tangent_frame(u);
  for (int r = 1; r <= rings; ++r) {
    const double a = radius * r / rings;
    const int m = u.size() == 2 ? 2 : per_ring;
    for (int k = 0; k < m; ++k) {
      Vec t;
      if (u.size() == 2) {
        t = T.col(0) * (k == 0 ? 1.0 : -1.0);
      } else {
        const double phi = 2 * std::numbers::pi * k / m;
        t = std::cos(phi) * T.col(0) + std::sin(phi) * T.col(1);
      }
      out.push_back(std::cos(a) * u + std::sin(a) * t);
    }
  }
  return out;
}

double brute_minmax(const AnisotropyModel& model, const Quadratic& phi, const Vec& x,
                    double eps) {
  const int n = model.dimension();
  const Vec p = phi.gradient.normalized();
  const auto signs = sign_set(n - 1);

  struct Best {
    double value = kInfinity;
    Vec v1, v2;
    double angle = 0;
  } best;
  std::vector<Vec> diff(signs.size());

  // Exhaustive over v1s x (angles plus the eigenbasis) x v2s.
  auto search = [&](const std::vector<Vec>& v1s, const std::vector<double>& angles,
                    const std::vector<Vec>& v2s) {
    for (const Vec& v1 : v1s) {
      const Mat s = sigma_of(model, v1);
      const double a = eps * eps * forcing_of(model, v1);
      std::vector<std::pair<double, Mat>> ws;
      if (n == 2) {
        ws.emplace_back(0.0, Mat::Identity(1, 1));
      } else {
        for (double t : angles) ws.emplace_back(t, basis_rotation(t));
        Mat e = eigen_basis(model, v1, phi.hessian);
        if (e.determinant() < 0) e.col(1) *= -1;
        ws.emplace_back(std::atan2(e(1, 0), e(0, 0)), e);
      }
      for (const auto& [angle, w] : ws) {
        for (std::size_t k = 0; k < signs.size(); ++k) {
          Vec b(n - 1);
          for (int i = 0; i < n - 1; ++i) b(i) = signs[k].signs[i];
          diff[k] = eps * std::numbers::sqrt2 * (s * (w * b));
        }
        for (const Vec& v2 : v2s) {
          double worst = -kInfinity;
          for (const Vec& d : diff) {
            worst = std::max(worst, phi(x, Vec(x + d + a * v2)));
            if (worst >= best.value) break;
          }
          if (worst < best.value) best = {worst, v1, v2, angle};
        }
      }
    }
  };

  std::vector<Vec> v1s = local_cap(p, 0.05, n == 2 ? 400 : 10, 16);
  for (const Vec& v : n == 2 ? half_circle_directions(2048) : hemisphere_directions(400))
    v1s.push_back(v);
  std::vector<Vec> v2s = local_cap(Vec(-p), 0.6, n == 2 ? 300 : 8, 12);
  for (const Vec& v : n == 2 ? circle_directions(128) : sphere_directions(64)) v2s.push_back(v);
  std::vector<double> angles;
  for (int k = 0; k < 16; ++k) angles.push_back(std::numbers::pi * k / 16);
  search(v1s, angles, v2s);

  // Shrinking caps around the incumbent resolve tilts far below the grid spacing.
  double r1 = n == 2 ? 2 * 0.05 / 400 : 2 * 0.05 / 10;
  double r2 = n == 2 ? 2 * 0.6 / 300 : 2 * 0.6 / 8;
  double ra = std::numbers::pi / 16;
  for (int round = 0; round < 8; ++round) {
    std::vector<double> local_angles;
    for (int k = -4; k <= 4; ++k) local_angles.push_back(best.angle + ra * k / 4);
    const Vec c1 = best.v1, c2 = best.v2;
    search(local_cap(c1, r1, 6, 12), local_angles, local_cap(c2, r2, 6, 12));
    r1 /= 4;
    r2 /= 4;
    ra /= 4;
  }
  return best.value;
}

}  // namespace

ConsistencyError consistency_error(const AnisotropyModel& model, const Quadratic& phi,
                                   const Vec& x, double eps, int n_dir, int n_basis) {
  if (phi.gradient.norm() < 1e-14) throw Error(ErrorCode::ZeroGradient, "|Dphi| = 0");
  auto cands = strategy_candidates(model, &phi.gradient, n_dir, n_basis, true);
  if (model.dimension() == 3) {
    const Vec p = phi.gradient.normalized();
    cands.insert(cands.begin(), StrategyI{p, Vec(-p), eigen_basis(model, p, phi.hessian)});
  }
  const StepTable table(model, eps, cands);
  const int n = model.dimension();
  Vec y(n);
  const auto res = minmax_steps(
      table, x.data(),
      [&](const double* q) {
        for (int i = 0; i < n; ++i) y(i) = q[i];
        return phi(x, y);
      },
      eps);

  ConsistencyError out;
  out.target = phi.value - eps * eps * F_eval(model, phi.gradient, phi.hessian);
  out.minmax = res.sampler_value;
  out.brute_minmax = brute_minmax(model, phi, x, eps);
  out.upper_err = out.minmax - out.target;
  out.lower_err = out.target - out.brute_minmax;
  return out;
}

std::vector<QuadraticCase> reference_quadratics(int dim) {
  auto vec = [](std::initializer_list<double> v) {
    Vec out(static_cast<Eigen::Index>(v.size()));
    Eigen::Index i = 0;
    for (double a : v) out(i++) = a;
    return out;
  };
  auto mat = [&](int n, std::initializer_list<double> v) {
    Mat m(n, n);
    auto it = v.begin();
    for (int i = 0; i < n; ++i)
      for (int j = 0; j < n; ++j) m(i, j) = *it++;
    return m;
  };
  std::vector<QuadraticCase> out;
  if (dim == 2) {
    out.push_back({{0.2, vec({0.8, 0.3}), mat(2, {1.0, 0.6, 0.6, -0.4})}, vec({1.0, 0.5})});
    out.push_back({{-0.1, vec({0.0, 1.0}), mat(2, {0.5, -0.8, -0.8, 0.3})}, vec({-0.7, 1.2})});
    out.push_back({{0.0, vec({-0.6, 0.45}), mat(2, {2.0, 0.3, 0.3, 1.0})}, vec({0.3, -0.2})});
    out.push_back({{0.5, vec({0.5, 0.0}), mat(2, {-1.0, 0.9, 0.9, 0.5})}, vec({0.0, 0.0})});
    out.push_back({{0.3, vec({1.2, -0.9}), mat(2, {0.2, -0.5, -0.5, -0.7})}, vec({-1.0, -1.0})});
  } else {
    out.push_back({{0.2, vec({0.8, 0.3, 0.1}),
                    mat(3, {1.0, 0.6, 0.2, 0.6, -0.4, 0.3, 0.2, 0.3, 0.5})},
                   vec({1.0, 0.5, -0.3})});
    out.push_back({{-0.1, vec({0.0, 0.0, 1.0}),
                    mat(3, {0.5, 0.1, -0.8, 0.1, 0.3, 0.4, -0.8, 0.4, 0.2})},
                   vec({-0.7, 1.2, 0.4})});
    out.push_back({{0.0, vec({-0.6, 0.45, 0.2}),
                    mat(3, {2.0, 0.3, 0.0, 0.3, 1.0, -0.6, 0.0, -0.6, 0.4})},
                   vec({0.3, -0.2, 0.0})});
    out.push_back({{0.5, vec({0.5, 0.0, 0.0}),
                    mat(3, {-1.0, 0.9, 0.4, 0.9, 0.5, 0.0, 0.4, 0.0, 0.8})},
                   vec({0.0, 0.0, 0.0})});
    out.push_back({{0.3, vec({1.2, -0.9, 0.5}),
                    mat(3, {0.2, -0.5, 0.1, -0.5, -0.7, 0.3, 0.1, 0.3, 0.6})},
                   vec({-1.0, -1.0, 0.5})});
  }
  return out;
}

ConsistencyReport consistency_study(const AnisotropyModel& model, const Quadratic& phi,
                                    const Vec& x, const std::vector<double>& eps_values,
                                    int n_basis) {
  ConsistencyReport r;
  for (double eps : eps_values) {
    const int n_dir = static_cast<int>(std::lround(3.2 / eps));
    const auto e = consistency_error(model, phi, x, eps, n_dir, n_basis);
    r.eps_values.push_back(eps);
    r.errors_part1.push_back(e.upper_err);
    r.errors_part3.push_back(e.lower_err);
    r.ratios_upper.push_back(std::abs(e.upper_err) / (eps * eps));
    r.ratios_lower.push_back(std::abs(e.lower_err) / (eps * eps));
  }
  return r;
}

namespace {

std::vector<ValueField> structured_fields(const ValueField& base) {
  std::vector<ValueField> out;
  auto with = [&](auto f) {
    ValueField v = base;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v.target_mask[k]) v.values[k] = f(v.grid.position(k));
    out.push_back(std::move(v));
  };
  const double lo = base.grid.box_lo()(0);
  const double span = base.grid.box_hi()(0) - lo;
  with([](const Vec&) { return 0.3; });
  with([](const Vec&) { return 0.7; });
  with([](const Vec&) { return 1.0; });
  with([&](const Vec& p) { return (p(0) - lo) / span; });
  with([&](const Vec& p) { return std::clamp(0.2 + 0.5 * (p(0) - lo) / span, 0.0, 1.0); });
  with([&](const Vec& p) { return 1.0 - (p(0) - lo) / span; });
  return out;
}

ValueField random_field(const ValueField& base, std::mt19937_64& rng) {
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  ValueField v = base;
  for (std::size_t k = 0; k < v.size(); ++k)
    if (!v.target_mask[k]) v.values[k] = uni(rng);
  return v;
}

double sup_diff(const ValueField& a, const ValueField& b) {
  double m = 0;
  for (std::size_t k = 0; k < a.size(); ++k) m = std::max(m, std::abs(a.values[k] - b.values[k]));
  return m;
}

}  // namespace

ContractionResult contraction_test(const ProblemConfig& config, int trials, std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  config.validate();
  const ValueField base = initial_field(config);
  ContractionResult r;
  r.factor = std::exp(-config.epsilon * config.epsilon);
  auto check = [&](const ValueField& u1, const ValueField& u2) {
    const double d = sup_diff(u1, u2);
    ++r.pairs;
    if (d == 0) return;
    const ValueField a = apply_R(config, u1, &u1);
    const ValueField b = apply_R(config, u2, &u1);
    r.max_ratio = std::max(r.max_ratio, sup_diff(a, b) / d);
  };
  const auto fixed = structured_fields(base);
  for (std::size_t i = 0; i < fixed.size(); ++i)
    for (std::size_t j = i + 1; j < fixed.size(); ++j) check(fixed[i], fixed[j]);
  std::mt19937_64 rng(seed);
  for (int t = 0; t < trials; ++t) {
    const ValueField u1 = random_field(base, rng);
    const ValueField u2 = random_field(base, rng);
    check(u1, u2);
  }
  return r;
}

MonotonicityResult monotonicity_test(const ProblemConfig& config, int trials,
                                     std::uint64_t seed) {
  if (trials < 1) throw Error(ErrorCode::InvalidConfig, "trials must be >= 1");
  config.validate();
  const ValueField base = initial_field(config);
  MonotonicityResult r;
  auto check = [&](const ValueField& u, const ValueField& v) {
    ++r.pairs;
    const ValueField a = apply_R(config, u, &u);
    const ValueField b = apply_R(config, v, &u);
    for (std::size_t k = 0; k < a.size(); ++k)
      r.worst_violation = std::max(r.worst_violation, a.values[k] - b.values[k]);
  };
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> uni(0.0, 1.0);
  for (const ValueField& u : structured_fields(base)) {
    check(u, u);
    ValueField v = u;
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v.target_mask[k]) v.values[k] = std::min(1.0, v.values[k] + 0.1);
    check(u, v);
  }
  for (int t = 0; t < trials; ++t) {
    const ValueField u = random_field(base, rng);
    ValueField v = u;
    const double scale = uni(rng);
    for (std::size_t k = 0; k < v.size(); ++k)
      if (!v.target_mask[k]) v.values[k] = std::min(1.0, v.values[k] + scale * uni(rng));
    check(u, v);
  }
  r.ok = r.worst_violation <= 1e-12;
  return r;
}

WulffReport wulff_inclusion_test(const ValueField& field, const std::vector<double>& arrival,
                                 const AnisotropyModel& model, double t, double t0,
                                 int n_dirs) {
  const double c0 = model.min_forcing();
  if (!(c0 > 0)) throw Error(ErrorCode::DegenerateForcing, "min c must be positive");
  WulffReport r;
  r.t = t;
  r.t0 = t0;
  r.slack = field.grid.spacing / c0;
  for (std::size_t k = 0; k < field.size(); ++k) {
    const Vec p = field.grid.position(k);
    if (field.target_mask[k]) {
      if (wulff_gauge(model, p, n_dirs) > t0 + 1e-12)
        throw Error(ErrorCode::BadT0, "target node outside t0 Wulff shape");
      continue;
    }
    if (!(arrival[k] < t)) continue;
    const double w = wulff_gauge(model, p, n_dirs);
    ++r.checked;
    r.max_gauge = std::max(r.max_gauge, w);
    if (w > t + t0 + r.slack) ++r.violations;
  }
  return r;
}

BoundReport capture_bound_check(const ValueField& field, const std::vector<double>& arrival,
                                const AnisotropyModel& model) {
  BoundReport r;
  const double c0 = model.min_forcing();
  r.slack = 2 * field.grid.spacing / c0;
  r.inscribed_radius =
      std::min(-field.grid.box_lo().maxCoeff(), field.grid.box_hi().minCoeff());
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (field.target_mask[k] || !std::isfinite(arrival[k])) continue;
    const Vec x = field.grid.position(k);
    const auto b = upper_bound_oracle(model, x);
    r.R = b.R;
    const double excess = arrival[k] - b.bound;
    if (x.norm() > r.inscribed_radius) {
      ++r.excluded;
      r.excluded_max_excess = std::max(r.excluded_max_excess, excess);
      if (excess > r.slack) ++r.excluded_violations;
      continue;
    }
    r.max_excess = std::max(r.max_excess, excess);
    ++r.checked;
    if (excess > r.slack) ++r.violations;
  }
  if (r.checked == 0) r.R = capture_radius(model);
  return r;
}

GridSpec regrid(const GridSpec& grid, double h) {
  GridSpec g;
  g.origin = grid.origin;
  g.spacing = h;
  const Vec hi = grid.box_hi();
  for (int i = 0; i < grid.dimension(); ++i)
    g.counts.push_back(static_cast<int>(std::lround((hi(i) - grid.origin(i)) / h)) + 1);
  return g;
}

RefinementReport refinement_study(const ProblemConfig& base,
                                  const std::vector<RefinementLevel>& levels,
                                  const RadialOracle& oracle,
                                  std::vector<SolveResult>* solutions) {
  const auto* ball = std::get_if<Ball>(&base.target.shape());
  if (ball == nullptr) throw Error(ErrorCode::InvalidConfig, "refinement needs a ball target");
  if (levels.empty()) throw Error(ErrorCode::InvalidConfig, "no refinement levels");
  // Fail early on a stalled oracle.
  radial_arrival_oracle(oracle.r0, oracle.r0, oracle.beta, oracle.gamma, oracle.n);

  RefinementReport r;
  double coarse_step = 0;
  for (const auto& lv : levels) {
    ProblemConfig c = base;
    c.epsilon = lv.eps;
    coarse_step = std::max(coarse_step, c.max_step());
  }
  r.inner_radius = ball->radius + 2 * coarse_step;
  r.collar = 2 * coarse_step;

  for (const auto& lv : levels) {
    ProblemConfig c = base;
    c.epsilon = lv.eps;
    c.n_dir = lv.n_dir;
    c.grid = regrid(base.grid, lv.h);
    const auto t0 = std::chrono::steady_clock::now();
    auto solved = solve(c);
    const auto U = arrival_field(solved.field, 1e-12);
    double err = 0;
    std::size_t used = 0;
    const Vec lo = c.grid.box_lo(), hi = c.grid.box_hi();
    for (std::size_t k = 0; k < U.size(); ++k) {
      const Vec p = c.grid.position(k);
      const double rad = (p - ball->center).norm();
      if (rad < r.inner_radius) continue;
      if (((p - lo).minCoeff() < r.collar) || ((hi - p).minCoeff() < r.collar)) continue;
      const double exact =
          radial_arrival_oracle(oracle.r0, rad, oracle.beta, oracle.gamma, oracle.n);
      err = std::max(err, std::abs(U[k] - exact));
      ++used;
    }
    r.levels.push_back(lv);
    r.sup_errors.push_back(err);
    r.nodes.push_back(used);
    r.runtimes.push_back(
        std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count());
    if (solutions != nullptr) solutions->push_back(std::move(solved));
  }
  r.decreasing = true;
  for (std::size_t i = 1; i < r.sup_errors.size(); ++i)
    r.decreasing = r.decreasing && r.sup_errors[i] < r.sup_errors[i - 1];
  return r;
}

nlohmann::ordered_json make_report(const std::string& test, nlohmann::ordered_json params,
                                   nlohmann::ordered_json metrics, bool pass) {
  nlohmann::ordered_json j;
  j["test"] = test;
  j["params"] = std::move(params);
  j["metrics"] = std::move(metrics);
  j["pass"] = pass;
  return j;
}

}  // namespace frontgame
