#pragma once

#include <initializer_list>
#include <random>

#include "frontgame/anisotropy.hpp"
#include "frontgame/dpp_solver.hpp"

namespace test {

using frontgame::Mat;
using frontgame::Vec;

inline Vec vec(std::initializer_list<double> v) {
  Vec out(static_cast<Eigen::Index>(v.size()));
  Eigen::Index i = 0;
  for (double a : v) out(i++) = a;
  return out;
}

inline Mat random_symmetric(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Mat a(n, n);
  for (int i = 0; i < n; ++i)
    for (int j = 0; j < n; ++j) a(i, j) = g(rng);
  return (a + a.transpose()) / 2;
}

inline Vec random_vec(int n, std::mt19937_64& rng) {
  std::normal_distribution<double> g;
  Vec v(n);
  for (int i = 0; i < n; ++i) v(i) = g(rng);
  return v;
}

inline frontgame::AnisotropyModel isotropic(double b, double c, int n = 2) {
  return frontgame::make_model(frontgame::DirectionFunction::constant(b),
                               frontgame::DirectionFunction::constant(c), n);
}

/// Square box [-half, half]^2 with the given spacing and a ball target.
inline frontgame::ProblemConfig disk_problem(double b, double c, double radius, double half,
                                             double h, double eps, int n_dir) {
  frontgame::ProblemConfig p;
  p.model = isotropic(b, c);
  p.target = frontgame::TargetSet(frontgame::Ball{vec({0, 0}), radius},
                                  frontgame::BoundaryData::constant(0));
  const int n = static_cast<int>(std::lround(2 * half / h)) + 1;
  p.grid = frontgame::GridSpec{vec({-half, -half}), h, {n, n}};
  p.epsilon = eps;
  p.n_dir = n_dir;
  return p;
}

}  // namespace test
