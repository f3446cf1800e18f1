#pragma once

#include <functional>
#include <string>
#include <vector>

#include "frontgame/linalg.hpp"

namespace frontgame {

enum class DirectionKind { constant, trig2d, ellipsoid, table2d, custom };

std::string to_string(DirectionKind kind);

/// A real function on the unit sphere, described by a closed-form preset or a
/// user callable. Presets serialize to the config file; `custom` does not.
struct DirectionFunction {
  DirectionKind kind = DirectionKind::constant;
  double value = 1.0;                // constant
  double a0 = 0.0;                   // trig2d: a0 + sum_k cos_k cos(k t) + sin_k sin(k t)
  std::vector<double> cos_terms;
  std::vector<double> sin_terms;
  std::vector<double> diag;          // ellipsoid: sqrt(sum_i diag_i n_i^2)
  std::vector<double> table;         // table2d: samples at angles 2 pi k / size
  std::function<double(const Vec&)> fn;

  static DirectionFunction constant(double v);
  static DirectionFunction trig2d(double a0, std::vector<double> cos_terms,
                                  std::vector<double> sin_terms = {});
  static DirectionFunction ellipsoid(std::vector<double> diag);
  static DirectionFunction table2d(std::vector<double> samples);
  static DirectionFunction custom(std::function<double(const Vec&)> fn);

  /// Raw (unsymmetrized) value at a unit vector.
  double operator()(const Vec& unit) const;
};

/// Equally spaced directions on the half circle, angles k*pi/count.
std::vector<Vec> half_circle_directions(int count);
/// Equally spaced directions on the full circle, angles 2*k*pi/count.
std::vector<Vec> circle_directions(int count);
/// Fibonacci lattice on the unit sphere.
std::vector<Vec> sphere_directions(int count);
/// Fibonacci lattice restricted to the upper hemisphere z > 0.
std::vector<Vec> hemisphere_directions(int count);

/// Mobility b and forcing c on the unit sphere, symmetrized to be even.
///
/// sigma(p) = sqrt(b(p/|p|)) * T(p/|p|) where T is an orthonormal frame of
/// the tangent space p-perp, so sigma sigma^T = b (I - p p^T / |p|^2).
class AnisotropyModel {
 public:
  AnisotropyModel(DirectionFunction b, DirectionFunction c, int dim);

  int dimension() const { return dim_; }

  /// Even parts (f(n) + f(-n)) / 2 at a unit vector.
  double mobility(const Vec& unit) const;
  double forcing_unit(const Vec& unit) const;

  double min_mobility() const { return b_min_; }
  double max_mobility() const { return b_max_; }
  double min_forcing() const { return c_min_; }
  double max_forcing() const { return c_max_; }
  double lipschitz_sqrt_b() const { return lip_sqrt_b_; }
  double lipschitz_c() const { return lip_c_; }

  const DirectionFunction& mobility_function() const { return b_; }
  const DirectionFunction& forcing_function() const { return c_; }

  /// Largest Frobenius norm of sigma over the dense sample.
  double sigma_norm_bound() const;

 private:
  DirectionFunction b_;
  DirectionFunction c_;
  int dim_;
  double b_min_ = 0, b_max_ = 0, c_min_ = 0, c_max_ = 0;
  double lip_sqrt_b_ = 0, lip_c_ = 0;
};

/// Orthonormal frame of p-perp (n x (n-1)), even in p.
Mat tangent_frame(const Vec& p);

AnisotropyModel make_model(const DirectionFunction& b, const DirectionFunction& c,
                           int dim);
Mat sigma_of(const AnisotropyModel& model, const Vec& p);
double forcing_of(const AnisotropyModel& model, const Vec& p);
double F_eval(const AnisotropyModel& model, const Vec& p, const Mat& X);

struct AssumptionReport {
  double homogeneity = 0;       // |sigma(lp) - sigma(p)|, |c(lp) - l c(p)|/l
  double evenness = 0;          // |b(-n) - b(n)|, |c(-n) - c(n)|, |sigma(-p) - sigma(p)|
  double tangency = 0;          // |sigma^T p| / |p|
  double rank = 0;              // |sigma^T sigma / b - I|, zero iff rank n-1 orthogonal columns
  double reproduction = 0;      // |sigma sigma^T - b (I - p p^T)| / b
  double geometricity = 0;      // |F(lp, lX + mu p p^T) - l F(p,X)| / (1 + |l F|)
  int samples = 0;

  double worst() const;
};

AssumptionReport validate_assumptions(const AnisotropyModel& model, int sample_count,
                                      unsigned long long seed = 1);

/// max over sampled unit n of x.n / c(n). Circle samples in 2-D are nested
/// under doubling of n_dirs.
double wulff_gauge(const AnisotropyModel& model, const Vec& x, int n_dirs);

}  // namespace frontgame
