#include "frontgame/dpp_solver.hpp"

#include <chrono>
#include <cmath>
#include <limits>
#include <numbers>

#include "frontgame/error.hpp"

namespace frontgame {

namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();

// Point sampler of the operator: target branch first, then interpolation.
struct FieldSampler {
  const TargetSet* target;
  const GridSpec* grid;
  const double* values;
  bool constant_data;
  double constant_g;
  GridInterpolator interp;

  double operator()(const double* y) const {
    if (target->contains(y)) {
      if (constant_data) return constant_g;
      Vec p(grid->dimension());
      for (int i = 0; i < p.size(); ++i) p(i) = y[i];
      return target->g(p);
    }
    return interp(values, y, 1.0);
  }
};

FieldSampler make_sampler(const ProblemConfig& config, const GridSpec& grid,
                          const double* values) {
  const bool constant = config.target.constant_data();
  return FieldSampler{&config.target, &grid, values, constant,
                      constant ? psi(config.target.boundary_data().value) : 0.0,
                      GridInterpolator(grid)};
}

// Per-node candidate directions that are not in the shared uniform table:
// the gradient seed and the retained winner, each with every basis rotation.
struct SeedSteps {
  double steps[2 * 16 * 4 * kMaxDim];
  double dirs[2][kMaxDim];
  int n_dirs = 0;
  std::size_t per_dir = 0;  // candidates per direction (number of bases)
};

class NodeUpdater {
 public:
  NodeUpdater(const ProblemConfig& config)
      : config_(config), dim_(config.grid.dimension()) {
    const auto uniform = strategy_candidates(config.model, nullptr, config.n_dir, config.n_basis, true);
    table_ = StepTable(config.model, config.epsilon, uniform);
    signs_ = sign_set(dim_ - 1);
    if (dim_ == 2) {
      bases_.push_back(Mat::Identity(1, 1));
    } else {
      for (int k = 0; k < config.n_basis; ++k)
        bases_.push_back(basis_rotation(std::numbers::pi * k / config.n_basis));
    }
    if (bases_.size() * signs_.size() > 16 * 4)
      throw Error(ErrorCode::InvalidConfig, "n_basis too large for seeded candidates");
    strides_ = config.grid.strides();
  }

  struct Outcome {
    double value;
    double retained[kMaxDim];
  };

  /// New value at an unmasked node; `hint` supplies gradient and retained
  /// seeds, `sampler` the field being mapped.
  Outcome update(std::size_t node, const FieldSampler& sampler, const ValueField& hint) const {
    const GridSpec& g = config_.grid;
    double x[kMaxDim];
    Vec grad(dim_);
    {
      std::size_t rem = node;
      const double* u = hint.values.data();
      for (int i = dim_ - 1; i >= 0; --i) {
        const int n = g.counts[i];
        const int k = static_cast<int>(rem % n);
        rem /= n;
        x[i] = g.origin(i) + g.spacing * k;
        const std::size_t s = strides_[i];
        if (k > 0 && k < n - 1)
          grad(i) = (u[node + s] - u[node - s]) / (2 * g.spacing);
        else if (k == 0)
          grad(i) = (u[node + s] - u[node]) / g.spacing;
        else
          grad(i) = (u[node] - u[node - s]) / g.spacing;
      }
    }

    SeedSteps seeds;
    seeds.per_dir = bases_.size();
    if (grad.norm() >= 1e-10 / config_.grid.spacing) add_seed(seeds, grad.normalized());
    const double* kept = hint.retained.empty() ? nullptr : hint.retained.data() + node * dim_;
    if (kept != nullptr && !std::isnan(kept[0])) {
      bool same = seeds.n_dirs == 1;
      for (int i = 0; i < dim_ && same; ++i) same = seeds.dirs[0][i] == kept[i];
      if (!same) {
        Vec v(dim_);
        for (int i = 0; i < dim_; ++i) v(i) = kept[i];
        add_seed(seeds, v);
      }
    }

    const std::size_t n_sign = signs_.size();
    double best = kInfinity;
    std::size_t best_cand = 0;
    double y[kMaxDim];
    auto scan = [&](const double* steps, std::size_t n_cand, std::size_t offset) {
      for (std::size_t c = 0; c < n_cand; ++c) {
        double worst = -kInfinity;
        bool pruned = false;
        for (std::size_t s = 0; s < n_sign; ++s) {
          const double* d = steps + (c * n_sign + s) * dim_;
          for (int i = 0; i < dim_; ++i) y[i] = x[i] + d[i];
          worst = std::max(worst, sampler(y));
          if (worst >= best) {
            pruned = true;
            break;
          }
        }
        if (!pruned && worst < best) {
          best = worst;
          best_cand = offset + c;
        }
      }
    };
    const std::size_t n_seed = static_cast<std::size_t>(seeds.n_dirs) * seeds.per_dir;
    scan(seeds.steps, n_seed, 0);
    scan(table_.step(0, 0), table_.candidates(), n_seed);

    Outcome out;
    out.value = discounted(config_.epsilon, best);
    out.retained[0] = kNaN;
    if (best_cand < n_seed) {
      const int k = static_cast<int>(best_cand / seeds.per_dir);
      for (int i = 0; i < dim_; ++i) out.retained[i] = seeds.dirs[k][i];
    }
    return out;
  }

  int dimension() const { return dim_; }

 private:
  void add_seed(SeedSteps& seeds, const Vec& v) const {
    const int k = seeds.n_dirs++;
    for (int i = 0; i < dim_; ++i) seeds.dirs[k][i] = v(i);
    const Mat sigma = sigma_of(config_.model, v);
    const double eps = config_.epsilon;
    const Vec drift = -(eps * eps * forcing_of(config_.model, v)) * v;
    double* out = seeds.steps + static_cast<std::size_t>(k) * seeds.per_dir * signs_.size() * dim_;
    for (const Mat& w : bases_) {
      for (const auto& s : signs_) {
        Vec b(dim_ - 1);
        for (int i = 0; i < dim_ - 1; ++i) b(i) = s.signs[i];
        const Vec d = eps * std::numbers::sqrt2 * (sigma * (w * b)) + drift;
        for (int i = 0; i < dim_; ++i) *out++ = d(i);
      }
    }
  }

  const ProblemConfig& config_;
  int dim_;
  StepTable table_;
  std::vector<StrategyII> signs_;
  std::vector<Mat> bases_;
  std::vector<std::size_t> strides_;
};

// Chebyshev dilation of a 0/1 mask by `radius` nodes, separable per axis.
std::vector<std::uint8_t> dilate(const GridSpec& grid, const std::vector<std::uint8_t>& mask,
                                 int radius) {
  std::vector<std::uint8_t> cur = mask;
  std::vector<std::uint8_t> next(mask.size());
  const auto strides = grid.strides();
  const int dim = grid.dimension();
  for (int axis = 0; axis < dim; ++axis) {
    const std::size_t stride = strides[axis];
    const int len = grid.counts[axis];
    const std::size_t block = stride * static_cast<std::size_t>(len);
    for (std::size_t base = 0; base < cur.size(); base += block) {
      for (std::size_t inner = 0; inner < stride; ++inner) {
        const std::size_t start = base + inner;
        // Distance to the most recent set entry, scanned in both directions.
        int last = -1 << 30;
        for (int k = 0; k < len; ++k) {
          if (cur[start + k * stride]) last = k;
          next[start + k * stride] = k - last <= radius;
        }
        last = 1 << 30;
        for (int k = len - 1; k >= 0; --k) {
          if (cur[start + k * stride]) last = k;
          if (last - k <= radius) next[start + k * stride] = 1;
        }
      }
    }
    std::swap(cur, next);
  }
  return cur;
}

int stencil_radius(const ProblemConfig& config) {
  return static_cast<int>(std::ceil(config.max_step() / config.grid.spacing)) + 1;
}

}  // namespace

std::string to_string(SweepMode mode) {
  return mode == SweepMode::jacobi ? "jacobi" : "gauss_seidel";
}

double ProblemConfig::max_step() const {
  const int n = model.dimension();
  return epsilon * std::sqrt(2.0 * (n - 1) * model.max_mobility()) +
         epsilon * epsilon * model.max_forcing();
}

void ProblemConfig::validate() const {
  const int n = model.dimension();
  if (grid.dimension() != n || target.dimension() != n)
    throw Error(ErrorCode::InvalidConfig, "model, grid and target dimensions differ");
  grid.validate(max_nodes);
  if (!(epsilon > 0)) throw Error(ErrorCode::InvalidConfig, "epsilon must be positive");
  if (!(tolerance > 0)) throw Error(ErrorCode::InvalidConfig, "tolerance must be positive");
  if (max_iterations < 1) throw Error(ErrorCode::InvalidConfig, "max_iterations must be >= 1");
  if (n_dir < 4) throw Error(ErrorCode::InvalidConfig, "n_dir must be >= 4");
  if (n_basis < 1) throw Error(ErrorCode::InvalidConfig, "n_basis must be >= 1");
  const double limit = 0.5 * epsilon * std::sqrt(2.0 * model.min_mobility());
  if (grid.spacing > limit)
    throw Error(ErrorCode::StepUnresolved,
                "grid spacing h = " + std::to_string(grid.spacing) +
                    " exceeds eps*sqrt(2 min b)/2 = " + std::to_string(limit));
  Vec lo, hi;
  target.bounds(lo, hi);
  if ((lo.array() <= grid.box_lo().array()).any() || (hi.array() >= grid.box_hi().array()).any())
    throw Error(ErrorCode::TargetOutsideBox, "target closure must lie strictly inside the box");
}

Rasterized rasterize_target(const GridSpec& grid, const TargetSet& target) {
  Vec lo, hi;
  target.bounds(lo, hi);
  if ((lo.array() <= grid.box_lo().array()).any() || (hi.array() >= grid.box_hi().array()).any())
    throw Error(ErrorCode::TargetOutsideBox, "target closure must lie strictly inside the box");
  Rasterized out;
  const std::size_t count = grid.node_count();
  out.mask.assign(count, 0);
  out.values.assign(count, 1.0);
  bool any = false;
  for (std::size_t k = 0; k < count; ++k) {
    const Vec p = grid.position(k);
    if (target.contains(p)) {
      out.mask[k] = 1;
      out.values[k] = target.g(p);
      any = true;
    }
  }
  if (!any) throw Error(ErrorCode::EmptyTarget, "no grid node lies in the target");
  return out;
}

ValueField initial_field(const ProblemConfig& config) {
  auto raster = rasterize_target(config.grid, config.target);
  ValueField f;
  f.grid = config.grid;
  f.values = std::move(raster.values);
  f.target_mask = std::move(raster.mask);
  f.epsilon = config.epsilon;
  f.retained.assign(f.values.size() * config.grid.dimension(), kNaN);
  return f;
}

double interpolate(const ValueField& field, const Vec& x) {
  return multilinear(field.grid, field.values.data(), x.data(), 1.0);
}

double sample_field(const ProblemConfig& config, const ValueField& field, const double* y) {
  return make_sampler(config, field.grid, field.values.data())(y);
}

Vec node_gradient(const ValueField& field, std::size_t node) {
  const GridSpec& g = field.grid;
  const int dim = g.dimension();
  const auto strides = g.strides();
  const auto idx = g.multi_index(node);
  const double* u = field.values.data();
  Vec grad(dim);
  for (int i = 0; i < dim; ++i) {
    const std::size_t s = strides[i];
    const int k = idx[i];
    const int last = g.counts[i] - 1;
    if (k > 0 && k < last)
      grad(i) = (u[node + s] - u[node - s]) / (2 * g.spacing);
    else if (k == 0)
      grad(i) = (u[node + s] - u[node]) / g.spacing;
    else
      grad(i) = (u[node] - u[node - s]) / g.spacing;
  }
  return grad;
}

ValueField apply_R(const ProblemConfig& config, const ValueField& field,
                   const ValueField* hint_source) {
  const ValueField& hint = hint_source != nullptr ? *hint_source : field;
  const NodeUpdater updater(config);
  const FieldSampler sampler = make_sampler(config, field.grid, field.values.data());
  const int dim = field.grid.dimension();
  ValueField out = field;
  if (out.retained.size() != out.values.size() * dim) out.retained.assign(out.values.size() * dim, kNaN);
  for (std::size_t k = 0; k < field.size(); ++k) {
    if (field.target_mask[k]) continue;
    const auto r = updater.update(k, sampler, hint);
    out.values[k] = r.value;
    std::copy(r.retained, r.retained + dim, out.retained.begin() + k * dim);
  }
  return out;
}

SolveResult solve(const ProblemConfig& config) {
  config.validate();
  const auto start = std::chrono::steady_clock::now();
  const NodeUpdater updater(config);
  const int dim = config.grid.dimension();
  const double threshold = config.tolerance * -std::expm1(-config.epsilon * config.epsilon);
  const int radius = stencil_radius(config);

  SolveResult result;
  ValueField cur = initial_field(config);
  const std::size_t count = cur.size();
  std::vector<std::uint8_t> active(count, 1);
  std::vector<std::uint8_t> changed(count, 0);
  double prev_residual = -1;
  auto& diag = result.diagnostics;

  // Jacobi step over the active nodes; inactive nodes provably keep their value.
  auto jacobi = [&](const ValueField& in, ValueField& out) {
    const FieldSampler sampler = make_sampler(config, in.grid, in.values.data());
    double residual = 0;
    std::fill(changed.begin(), changed.end(), 0);
    for (std::size_t k = 0; k < count; ++k) {
      if (in.target_mask[k] || !active[k]) continue;
      const auto r = updater.update(k, sampler, in);
      const double delta = std::abs(r.value - in.values[k]);
      residual = std::max(residual, delta);
      if (r.value != in.values[k]) changed[k] = 1;
      out.values[k] = r.value;
      std::copy(r.retained, r.retained + dim, out.retained.begin() + k * dim);
    }
    return residual;
  };

  auto finish = [&](ValueField field, int iterations, double residual, bool converged) {
    diag.iterations = iterations;
    diag.final_residual = residual;
    diag.converged = converged;
    diag.wall_time =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    result.field = std::move(field);
    return result;
  };

  if (config.sweep_mode == SweepMode::jacobi) {
    ValueField next = cur;
    for (int it = 1; it <= config.max_iterations; ++it) {
      const double residual = jacobi(cur, next);
      // Carry the skipped nodes' state forward unchanged.
      std::swap(cur, next);
      for (std::size_t k = 0; k < count; ++k) {
        if (!active[k]) continue;
        next.values[k] = cur.values[k];
        std::copy(cur.retained.begin() + k * dim, cur.retained.begin() + (k + 1) * dim,
                  next.retained.begin() + k * dim);
      }
      if (prev_residual > 0) diag.contraction_factor_observed = residual / prev_residual;
      prev_residual = residual;
      if (residual <= threshold) return finish(std::move(cur), it, residual, true);
      active = dilate(config.grid, changed, radius);
    }
    return finish(std::move(cur), config.max_iterations, prev_residual, false);
  }

  // Gauss-Seidel: cycle through every axis-direction ordering of the nodes.
  const auto strides = config.grid.strides();
  const int n_orders = 1 << dim;
  ValueField scratch = cur;
  for (int it = 1; it <= config.max_iterations; ++it) {
    const int order = (it - 1) % n_orders;
    const FieldSampler sampler = make_sampler(config, cur.grid, cur.values.data());
    double change = 0;
    std::vector<int> idx(dim);
    for (std::size_t step = 0; step < count; ++step) {
      std::size_t rem = step;
      std::size_t k = 0;
      for (int i = dim - 1; i >= 0; --i) {
        const int n = config.grid.counts[i];
        int j = static_cast<int>(rem % n);
        rem /= n;
        if ((order >> i) & 1) j = n - 1 - j;
        k += static_cast<std::size_t>(j) * strides[i];
      }
      if (cur.target_mask[k]) continue;
      const auto r = updater.update(k, sampler, cur);
      change = std::max(change, std::abs(r.value - cur.values[k]));
      cur.values[k] = r.value;
      std::copy(r.retained, r.retained + dim, cur.retained.begin() + k * dim);
    }
    if (prev_residual > 0) diag.contraction_factor_observed = change / prev_residual;
    prev_residual = change;
    if (change <= threshold) {
      // Confirm with a true residual before stopping.
      std::fill(active.begin(), active.end(), 1);
      const double residual = jacobi(cur, scratch);
      if (residual <= threshold) return finish(std::move(cur), it, residual, true);
      std::swap(cur, scratch);
      scratch = cur;
      prev_residual = residual;
    }
  }
  return finish(std::move(cur), config.max_iterations, prev_residual, false);
}

std::vector<double> arrival_field(const ValueField& field, double eta) {
  std::vector<double> out(field.size());
  for (std::size_t k = 0; k < field.size(); ++k) {
    const double u = field.values[k];
    out[k] = u >= 1.0 - eta ? kInfinity : psi_inv(u);
  }
  return out;
}

std::vector<std::uint8_t> sublevel_set(const std::vector<double>& arrival,
                                       const std::vector<std::uint8_t>& target_mask, double t) {
  std::vector<std::uint8_t> out(arrival.size());
  for (std::size_t k = 0; k < arrival.size(); ++k)
    out[k] = target_mask[k] || arrival[k] < t;
  return out;
}

}  // namespace frontgame
