#pragma once

#include <functional>
#include <string>
#include <variant>
#include <vector>

#include "frontgame/grid.hpp"
#include "frontgame/linalg.hpp"

namespace frontgame {

struct Ball {
  Vec center;
  double radius = 1;
};

struct AxisBox {
  Vec lo;
  Vec hi;
};

struct BallUnion {
  std::vector<Ball> balls;
};

/// Axis-aligned ellipsoid sum_i ((x_i - center_i) / semi_axes_i)^2 <= 1.
struct Ellipsoid {
  Vec center;
  Vec semi_axes;
};

/// Target is where the interpolated signed distance is <= 0.
struct DistanceTable {
  GridSpec grid;
  std::vector<double> values;
};

using TargetShape = std::variant<Ball, AxisBox, BallUnion, Ellipsoid, DistanceTable>;

/// Arrival-time data G on the closed target, in time units.
///
/// `constant` and `on_boundary` are functions of the boundary; interior points
/// take the value at their nearest boundary point. `extension` is evaluated
/// directly at any point of the closed target.
struct BoundaryData {
  enum class Kind { constant, on_boundary, extension };
  Kind kind = Kind::constant;
  double value = 0;
  std::function<double(const Vec&)> fn;

  static BoundaryData constant(double v) { return {Kind::constant, v, {}}; }
  static BoundaryData on_boundary(std::function<double(const Vec&)> f) {
    return {Kind::on_boundary, 0, std::move(f)};
  }
  static BoundaryData extension(std::function<double(const Vec&)> f) {
    return {Kind::extension, 0, std::move(f)};
  }
};

class TargetSet {
 public:
  TargetSet() = default;
  TargetSet(TargetShape shape, BoundaryData data);

  const TargetShape& shape() const { return shape_; }
  const BoundaryData& boundary_data() const { return data_; }
  int dimension() const;

  /// Membership in the closed set.
  bool contains(const double* y) const;
  bool contains(const Vec& y) const { return contains(y.data()); }

  /// Bounding box of the closed set.
  void bounds(Vec& lo, Vec& hi) const;

  Vec nearest_boundary_point(const Vec& y) const;

  /// G at a point of the closed target.
  double G(const Vec& y) const;
  /// Transformed data psi(G(y)).
  double g(const Vec& y) const;
  bool constant_data() const { return data_.kind == BoundaryData::Kind::constant; }

 private:
  TargetShape shape_;
  BoundaryData data_;
};

std::string shape_name(const TargetShape& shape);

}  // namespace frontgame
