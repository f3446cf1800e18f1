#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "frontgame/anisotropy.hpp"
#include "frontgame/game_core.hpp"
#include "frontgame/grid.hpp"
#include "frontgame/target.hpp"

namespace frontgame {

enum class SweepMode { jacobi, gauss_seidel };

std::string to_string(SweepMode mode);

/// Transformed game value u on the grid. Masked nodes hold psi(G) and are
/// never rewritten.
///
/// `retained` stores, per node, the seeded v1 direction that won the last
/// update there (NaN when none). Feeding it back as an extra candidate makes
/// the iteration from u = 1 nodewise nonincreasing.
struct ValueField {
  GridSpec grid;
  std::vector<double> values;
  std::vector<std::uint8_t> target_mask;
  double epsilon = 0;
  std::vector<double> retained;

  std::size_t size() const { return values.size(); }
};

struct ProblemConfig {
  AnisotropyModel model{DirectionFunction::constant(1), DirectionFunction::constant(0), 2};
  TargetSet target;
  GridSpec grid;
  double epsilon = 0.1;
  int n_dir = 32;
  int n_basis = 4;
  double tolerance = 1e-6;
  int max_iterations = 100000;
  SweepMode sweep_mode = SweepMode::jacobi;
  std::uint64_t seed = 0;
  std::size_t max_nodes = 50'000'000;

  /// Throws on violated invariants, including the grid/step coupling
  /// h <= eps * sqrt(2 min b) / 2.
  void validate() const;
  /// Largest single-step displacement eps sqrt(2 (n-1) max b) + eps^2 max c.
  double max_step() const;
};

struct SolveDiagnostics {
  int iterations = 0;
  double final_residual = 0;
  double contraction_factor_observed = 0;
  double wall_time = 0;
  bool converged = false;
};

struct SolveResult {
  ValueField field;
  SolveDiagnostics diagnostics;
};

struct Rasterized {
  std::vector<std::uint8_t> mask;
  std::vector<double> values;  // psi(G) on masked nodes, 1 elsewhere
};

Rasterized rasterize_target(const GridSpec& grid, const TargetSet& target);

/// Initial field: 1 off target, psi(G) on target.
ValueField initial_field(const ProblemConfig& config);

/// Multilinear interpolation; exactly 1 outside the box.
double interpolate(const ValueField& field, const Vec& x);

/// The sampler used inside the operator: psi(G(y)) when y lies in the closed
/// target, otherwise the interpolated field.
double sample_field(const ProblemConfig& config, const ValueField& field, const double* y);

/// Central-difference gradient of the field at a node (one-sided at faces).
Vec node_gradient(const ValueField& field, std::size_t node);

/// One application of the dynamic programming operator. Candidate seeds
/// (gradient hint and retained directions) are read from `hint_source`,
/// which defaults to `field` itself; fixing a common hint source makes the
/// operator an exact monotone contraction across different inputs.
ValueField apply_R(const ProblemConfig& config, const ValueField& field,
                   const ValueField* hint_source = nullptr);

/// Fixed-point iteration from the initial field until the sup residual is
/// below tolerance * (1 - exp(-eps^2)). On MaxIterationsExceeded the best
/// field is returned with converged = false.
SolveResult solve(const ProblemConfig& config);

/// psi_inv nodewise; nodes with u >= 1 - eta become +inf.
std::vector<double> arrival_field(const ValueField& field, double eta);

/// Nodes with U < t, together with the target mask.
std::vector<std::uint8_t> sublevel_set(const std::vector<double>& arrival,
                                       const std::vector<std::uint8_t>& target_mask, double t);

}  // namespace frontgame
