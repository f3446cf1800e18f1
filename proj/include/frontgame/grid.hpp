#pragma once

#include <cmath>
#include <cstddef>
#include <vector>

#include "frontgame/linalg.hpp"

namespace frontgame {

/// Uniform rectilinear grid. Nodes are stored row-major: the last axis varies
/// fastest.
struct GridSpec {
  Vec origin;
  double spacing = 0;
  std::vector<int> counts;

  int dimension() const { return static_cast<int>(counts.size()); }
  std::size_t node_count() const;
  Vec box_lo() const { return origin; }
  Vec box_hi() const;
  /// Row-major stride of each axis.
  std::vector<std::size_t> strides() const;
  std::vector<int> multi_index(std::size_t linear) const;
  Vec position(std::size_t linear) const;
  /// Closed-box membership.
  bool contains(const double* y) const;

  /// Throws InvalidConfig / GridTooLarge on malformed specs.
  void validate(std::size_t max_nodes) const;
};

/// Multilinear interpolation over a fixed grid with cached strides.
class GridInterpolator {
 public:
  explicit GridInterpolator(const GridSpec& grid) : dim_(grid.dimension()), h_(grid.spacing) {
    std::size_t s = 1;
    for (int i = dim_ - 1; i >= 0; --i) {
      origin_[i] = grid.origin(i);
      last_[i] = grid.counts[i] - 1;
      stride_[i] = s;
      s *= static_cast<std::size_t>(grid.counts[i]);
    }
  }

  /// Interpolated value at y, or `outside` for points off the closed box.
  double operator()(const double* values, const double* y, double outside) const {
    double frac[3] = {0, 0, 0};
    std::size_t offset = 0;
    for (int i = 0; i < dim_; ++i) {
      const double t = (y[i] - origin_[i]) / h_;
      if (!(t >= 0.0) || t > last_[i]) return outside;
      int k = static_cast<int>(t);
      if (k >= last_[i]) k = last_[i] - 1;
      frac[i] = t - k;
      offset += static_cast<std::size_t>(k) * stride_[i];
    }
    // Nested lerps a + f (b - a) reproduce constant data exactly.
    auto lerp = [](double a, double b, double f) { return a + f * (b - a); };
    const double* v = values + offset;
    if (dim_ == 2) {
      const double a = lerp(v[0], v[1], frac[1]);
      const double b = lerp(v[stride_[0]], v[stride_[0] + 1], frac[1]);
      return lerp(a, b, frac[0]);
    }
    auto plane = [&](const double* p) {
      const double a = lerp(p[0], p[1], frac[2]);
      const double b = lerp(p[stride_[1]], p[stride_[1] + 1], frac[2]);
      return lerp(a, b, frac[1]);
    };
    return lerp(plane(v), plane(v + stride_[0]), frac[0]);
  }

 private:
  int dim_;
  double h_;
  double origin_[3] = {0, 0, 0};
  int last_[3] = {0, 0, 0};
  std::size_t stride_[3] = {0, 0, 0};
};

/// Multilinear interpolation of node values; `outside` for points off the box.
inline double multilinear(const GridSpec& grid, const double* values, const double* y,
                          double outside) {
  return GridInterpolator(grid)(values, y, outside);
}

}  // namespace frontgame
