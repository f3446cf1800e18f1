#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include <nlohmann/json.hpp>

#include "frontgame/dpp_solver.hpp"

namespace frontgame {

/// Arrival time of an isotropic spherical front from radius r0 to r under
/// dr/dt = gamma - beta (n-1) / r, by adaptive Gauss-Kronrod quadrature.
double radial_arrival_oracle(double r0, double r, double beta, double gamma, int n);

struct CaptureBound {
  double R;
  double bound;
};

/// R = 2 C0^2 / c0 + 1 and the capture-time bound (2/c0)|x| - 4 C0^2 / c0^2.
CaptureBound upper_bound_oracle(const AnisotropyModel& model, const Vec& x);

/// phi(y) = value + gradient.(y - x) + (y - x)^T hessian (y - x) / 2.
struct Quadratic {
  double value = 0;
  Vec gradient;
  Mat hessian;

  double operator()(const Vec& x0, const Vec& y) const;
};

struct ConsistencyError {
  double upper_err;  // candidate min-max minus (phi - eps^2 F)
  double lower_err;  // (phi - eps^2 F) minus dense brute-force min-max
  double minmax;
  double brute_minmax;
  double target;     // phi(x) - eps^2 F(Dphi, D^2 phi)
};

/// Undiscounted one-step min-max of a quadratic against its second-order
/// expansion. The upper route uses the solver's candidates plus the analytic
/// seed; the lower route is an independent dense search over directions,
/// drifts and bases.
ConsistencyError consistency_error(const AnisotropyModel& model, const Quadratic& phi,
                                   const Vec& x, double eps, int n_dir, int n_basis);

struct ConsistencyReport {
  std::vector<double> eps_values;
  std::vector<double> errors_part1;  // upper_err
  std::vector<double> errors_part3;  // lower_err
  std::vector<double> ratios_upper;  // |upper_err| / eps^2
  std::vector<double> ratios_lower;  // |lower_err| / eps^2
};

struct QuadraticCase {
  Quadratic phi;
  Vec x;
};

/// Five fixed quadratics with |Dphi| >= 0.5 and Hessians coupling the
/// gradient direction to its orthogonal complement.
std::vector<QuadraticCase> reference_quadratics(int dim);

/// n_dir at each level is round(3.2 / eps).
ConsistencyReport consistency_study(const AnisotropyModel& model, const Quadratic& phi,
                                    const Vec& x, const std::vector<double>& eps_values,
                                    int n_basis);

struct ContractionResult {
  double max_ratio = 0;
  double factor = 0;  // e^{-eps^2}
  int pairs = 0;
};

/// Random and structured field pairs mapped with a shared hint source.
ContractionResult contraction_test(const ProblemConfig& config, int trials, std::uint64_t seed);

struct MonotonicityResult {
  bool ok = true;
  double worst_violation = 0;  // max over nodes of R(u) - R(v) for u <= v
  int pairs = 0;
};

MonotonicityResult monotonicity_test(const ProblemConfig& config, int trials,
                                     std::uint64_t seed);

struct WulffReport {
  double t = 0;
  double t0 = 0;
  double slack = 0;
  double max_gauge = 0;        // over nodes with U < t
  std::size_t checked = 0;
  std::size_t violations = 0;
};

/// Every node with U < t must satisfy W(node) <= t + t0 + h / c0.
WulffReport wulff_inclusion_test(const ValueField& field, const std::vector<double>& arrival,
                                 const AnisotropyModel& model, double t, double t0, int n_dirs);

struct BoundReport {
  double R = 0;
  double slack = 0;
  double inscribed_radius = 0;     // largest origin-centred ball inside the box
  double max_excess = -kInfinity;  // max of U - bound over checked nodes
  std::size_t checked = 0;
  std::size_t violations = 0;
  // Finite-U nodes beyond the inscribed radius, where the capture path may
  // leave the box and truncation inflates U. Reported, not asserted.
  std::size_t excluded = 0;
  std::size_t excluded_violations = 0;
  double excluded_max_excess = -kInfinity;
};

/// Solved arrival times against (2/c0)|x| - 4 C0^2 / c0^2 + 2h / c0 at the
/// finite-U nodes off target whose concentric capture path, which never
/// increases |y|, stays inside the box.
BoundReport capture_bound_check(const ValueField& field, const std::vector<double>& arrival,
                                const AnisotropyModel& model);

struct RefinementLevel {
  double eps;
  double h;
  int n_dir;
};

struct RadialOracle {
  double r0 = 1;
  double beta = 1;
  double gamma = 2;
  int n = 2;
};

struct RefinementReport {
  std::vector<RefinementLevel> levels;
  std::vector<double> sup_errors;
  std::vector<double> runtimes;
  std::vector<std::size_t> nodes;
  double inner_radius = 0;  // annulus is inner_radius <= |x|, box collar `collar`
  double collar = 0;
  bool decreasing = false;
};

/// Solves base at each level (box kept, spacing and n_dir replaced) and takes
/// the sup error of U against the radial oracle on a common region that
/// excludes a two-step collar of the coarsest level around the target and
/// the box. The solved fields are appended to `solutions` when given.
RefinementReport refinement_study(const ProblemConfig& base,
                                  const std::vector<RefinementLevel>& levels,
                                  const RadialOracle& oracle,
                                  std::vector<SolveResult>* solutions = nullptr);

/// Grid with the same box as `grid` and the given spacing.
GridSpec regrid(const GridSpec& grid, double h);

/// {test, params, metrics, pass}
nlohmann::ordered_json make_report(const std::string& test, nlohmann::ordered_json params,
                                   nlohmann::ordered_json metrics, bool pass);

}  // namespace frontgame
