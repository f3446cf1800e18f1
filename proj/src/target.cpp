#include "frontgame/target.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "frontgame/error.hpp"
#include "frontgame/game_core.hpp"

namespace frontgame {

namespace {

template <class... Ts>
struct overloaded : Ts... {
  using Ts::operator()...;
};
template <class... Ts>
overloaded(Ts...) -> overloaded<Ts...>;

Vec ball_projection(const Ball& b, const Vec& y) {
  Vec d = y - b.center;
  const double n = d.norm();
  if (n == 0) {
    d = Vec::Zero(y.size());
    d(0) = 1;
    return b.center + b.radius * d;
  }
  return b.center + b.radius * d / n;
}

// Closest point on an ellipsoid surface: z_i = a_i^2 y_i / (a_i^2 + t) with t
// the root of sum (a_i y_i / (a_i^2 + t))^2 = 1, found by bisection.
Vec ellipsoid_projection(const Ellipsoid& e, const Vec& y) {
  Vec r = y - e.center;
  const Vec a2 = e.semi_axes.cwiseProduct(e.semi_axes);
  Eigen::Index kmin = 0;
  const double amin2 = a2.minCoeff(&kmin);
  // On the short axis plane the root can sit at the pole; nudge off it.
  if (std::abs(r(kmin)) < 1e-12 * e.semi_axes(kmin)) r(kmin) = 1e-12 * e.semi_axes(kmin);
  auto level = [&](double t) {
    double s = 0;
    for (Eigen::Index i = 0; i < r.size(); ++i) {
      const double q = e.semi_axes(i) * r(i) / (a2(i) + t);
      s += q * q;
    }
    return s - 1;
  };
  double lo = -amin2;
  double hi = std::max(1.0, r.norm() * e.semi_axes.maxCoeff());
  while (level(hi) > 0) hi *= 2;
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    if (mid <= lo || mid >= hi) break;
    (level(mid) > 0 ? lo : hi) = mid;
  }
  const double t = 0.5 * (lo + hi);
  Vec z(r.size());
  for (Eigen::Index i = 0; i < r.size(); ++i) z(i) = a2(i) * r(i) / (a2(i) + t);
  return e.center + z;
}

Vec box_projection(const AxisBox& b, const Vec& y) {
  Vec z = y.cwiseMax(b.lo).cwiseMin(b.hi);
  if (z != y) return z;
  // Inside: move to the nearest face.
  double best = std::numeric_limits<double>::infinity();
  Eigen::Index axis = 0;
  bool upper = false;
  for (Eigen::Index i = 0; i < y.size(); ++i) {
    if (y(i) - b.lo(i) < best) best = y(i) - b.lo(i), axis = i, upper = false;
    if (b.hi(i) - y(i) < best) best = b.hi(i) - y(i), axis = i, upper = true;
  }
  z(axis) = upper ? b.hi(axis) : b.lo(axis);
  return z;
}

double table_distance(const DistanceTable& t, const double* y) {
  return multilinear(t.grid, t.values.data(), y, std::numeric_limits<double>::infinity());
}

}  // namespace

TargetSet::TargetSet(TargetShape shape, BoundaryData data)
    : shape_(std::move(shape)), data_(std::move(data)) {
  std::visit(overloaded{
                 [](const Ball& b) {
                   if (!(b.radius > 0)) throw Error(ErrorCode::EmptyTarget, "ball radius <= 0");
                 },
                 [](const AxisBox& b) {
                   if (!((b.hi - b.lo).minCoeff() > 0))
                     throw Error(ErrorCode::EmptyTarget, "box has empty interior");
                 },
                 [](const BallUnion& u) {
                   if (u.balls.empty()) throw Error(ErrorCode::EmptyTarget, "no balls");
                   for (const auto& b : u.balls)
                     if (!(b.radius > 0)) throw Error(ErrorCode::EmptyTarget, "ball radius <= 0");
                 },
                 [](const Ellipsoid& e) {
                   if (e.semi_axes.size() != e.center.size() || !(e.semi_axes.minCoeff() > 0))
                     throw Error(ErrorCode::EmptyTarget, "bad ellipsoid axes");
                 },
                 [](const DistanceTable& t) {
                   if (t.values.size() != t.grid.node_count())
                     throw Error(ErrorCode::InvalidConfig, "distance table size mismatch");
                   if (std::none_of(t.values.begin(), t.values.end(),
                                    [](double v) { return v < 0; }))
                     throw Error(ErrorCode::EmptyTarget, "distance table has no interior");
                 },
             },
             shape_);
  if (data_.kind != BoundaryData::Kind::constant && !data_.fn)
    throw Error(ErrorCode::InvalidConfig, "boundary data function is empty");
}

int TargetSet::dimension() const {
  return std::visit(overloaded{
                        [](const Ball& b) { return static_cast<int>(b.center.size()); },
                        [](const AxisBox& b) { return static_cast<int>(b.lo.size()); },
                        [](const BallUnion& u) {
                          return static_cast<int>(u.balls.front().center.size());
                        },
                        [](const Ellipsoid& e) { return static_cast<int>(e.center.size()); },
                        [](const DistanceTable& t) { return t.grid.dimension(); },
                    },
                    shape_);
}

bool TargetSet::contains(const double* y) const {
  if (const auto* b = std::get_if<Ball>(&shape_)) {
    double s = 0;
    for (Eigen::Index i = 0; i < b->center.size(); ++i) {
      const double d = y[i] - b->center(i);
      s += d * d;
    }
    return s <= b->radius * b->radius;
  }
  return std::visit(
      overloaded{
          [&](const Ball&) { return false; },
          [&](const AxisBox& b) {
            for (Eigen::Index i = 0; i < b.lo.size(); ++i)
              if (y[i] < b.lo(i) || y[i] > b.hi(i)) return false;
            return true;
          },
          [&](const BallUnion& u) {
            for (const auto& b : u.balls) {
              double s = 0;
              for (Eigen::Index i = 0; i < b.center.size(); ++i)
                s += (y[i] - b.center(i)) * (y[i] - b.center(i));
              if (s <= b.radius * b.radius) return true;
            }
            return false;
          },
          [&](const Ellipsoid& e) {
            double s = 0;
            for (Eigen::Index i = 0; i < e.center.size(); ++i) {
              const double q = (y[i] - e.center(i)) / e.semi_axes(i);
              s += q * q;
            }
            return s <= 1;
          },
          [&](const DistanceTable& t) { return table_distance(t, y) <= 0; },
      },
      shape_);
}

void TargetSet::bounds(Vec& lo, Vec& hi) const {
  std::visit(overloaded{
                 [&](const Ball& b) {
                   lo = b.center.array() - b.radius;
                   hi = b.center.array() + b.radius;
                 },
                 [&](const AxisBox& b) {
                   lo = b.lo;
                   hi = b.hi;
                 },
                 [&](const BallUnion& u) {
                   lo = u.balls.front().center.array() - u.balls.front().radius;
                   hi = u.balls.front().center.array() + u.balls.front().radius;
                   for (const auto& b : u.balls) {
                     lo = lo.cwiseMin(Vec(b.center.array() - b.radius));
                     hi = hi.cwiseMax(Vec(b.center.array() + b.radius));
                   }
                 },
                 [&](const Ellipsoid& e) {
                   lo = e.center - e.semi_axes;
                   hi = e.center + e.semi_axes;
                 },
                 [&](const DistanceTable& t) {
                   // Conservative: any interior point lies within the table's box.
                   lo = Vec::Constant(t.grid.dimension(), std::numeric_limits<double>::infinity());
                   hi = -lo;
                   for (std::size_t k = 0; k < t.values.size(); ++k) {
                     if (t.values[k] <= 0) {
                       const Vec p = t.grid.position(k);
                       lo = lo.cwiseMin(Vec(p.array() - t.grid.spacing));
                       hi = hi.cwiseMax(Vec(p.array() + t.grid.spacing));
                     }
                   }
                   lo = lo.cwiseMax(t.grid.box_lo());
                   hi = hi.cwiseMin(t.grid.box_hi());
                 },
             },
             shape_);
}

Vec TargetSet::nearest_boundary_point(const Vec& y) const {
  return std::visit(
      overloaded{
          [&](const Ball& b) { return ball_projection(b, y); },
          [&](const AxisBox& b) { return box_projection(b, y); },
          [&](const BallUnion& u) {
            // Nearest sphere point not buried inside another ball.
            Vec best;
            double best_d = std::numeric_limits<double>::infinity();
            Vec fallback;
            double fallback_d = best_d;
            for (std::size_t k = 0; k < u.balls.size(); ++k) {
              const Vec z = ball_projection(u.balls[k], y);
              const double d = (z - y).norm();
              bool buried = false;
              for (std::size_t j = 0; j < u.balls.size() && !buried; ++j)
                if (j != k && (z - u.balls[j].center).norm() < u.balls[j].radius) buried = true;
              if (d < fallback_d) fallback = z, fallback_d = d;
              if (!buried && d < best_d) best = z, best_d = d;
            }
            return best_d < std::numeric_limits<double>::infinity() ? best : fallback;
          },
          [&](const Ellipsoid& e) { return ellipsoid_projection(e, y); },
          [&](const DistanceTable& t) {
            const double h = t.grid.spacing;
            const int dim = t.grid.dimension();
            Vec z = y;
            for (int it = 0; it < 4; ++it) {
              Vec grad(dim);
              for (int i = 0; i < dim; ++i) {
                const Vec e = Vec::Unit(dim, i) * (h / 2);
                const Vec a = z + e, b = z - e;
                grad(i) = (table_distance(t, a.data()) - table_distance(t, b.data())) / h;
              }
              const double d = table_distance(t, z.data());
              if (!std::isfinite(d) || !std::isfinite(grad.norm()) || grad.norm() == 0) break;
              z -= d * grad / grad.squaredNorm();
            }
            return z;
          },
      },
      shape_);
}

double TargetSet::G(const Vec& y) const {
  switch (data_.kind) {
    case BoundaryData::Kind::constant: return data_.value;
    case BoundaryData::Kind::on_boundary: return data_.fn(nearest_boundary_point(y));
    case BoundaryData::Kind::extension: return data_.fn(y);
  }
  return 0;
}

double TargetSet::g(const Vec& y) const { return psi(G(y)); }

std::string shape_name(const TargetShape& shape) {
  return std::visit(overloaded{
                        [](const Ball&) { return std::string("ball"); },
                        [](const AxisBox&) { return std::string("box"); },
                        [](const BallUnion&) { return std::string("balls"); },
                        [](const Ellipsoid&) { return std::string("ellipsoid"); },
                        [](const DistanceTable&) { return std::string("sdf"); },
                    },
                    shape);
}

}  // namespace frontgame
