#include "frontgame/anisotropy.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>

#include "frontgame/error.hpp"

namespace frontgame {

namespace {

constexpr int kDenseSamples = 10000;
constexpr double kZeroGradient = 1e-14;

std::vector<Vec> dense_sample(int dim) {
  return dim == 2 ? circle_directions(kDenseSamples) : sphere_directions(kDenseSamples);
}

// Flips p so that its largest-magnitude component is positive; the frame is
// then a function of the line through p, which makes sigma even.
Vec canonical_direction(const Vec& p) {
  Eigen::Index k = 0;
  p.cwiseAbs().maxCoeff(&k);
  Vec u = p / p.norm();
  if (u(k) < 0) u = -u;
  return u;
}

double table_lookup(const std::vector<double>& table, double theta) {
  const int size = static_cast<int>(table.size());
  double t = theta / (2 * std::numbers::pi) * size;
  t -= std::floor(t / size) * size;
  int i = static_cast<int>(std::floor(t));
  const double f = t - i;
  i %= size;
  return (1 - f) * table[i] + f * table[(i + 1) % size];
}

Mat random_symmetric(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Mat a(dim, dim);
  for (int i = 0; i < dim; ++i)
    for (int j = 0; j < dim; ++j) a(i, j) = normal(rng);
  return (a + a.transpose()) / 2;
}

Vec random_vector(int dim, std::mt19937_64& rng) {
  std::normal_distribution<double> normal;
  Vec v(dim);
  for (int i = 0; i < dim; ++i) v(i) = normal(rng);
  return v;
}

}  // namespace

std::string to_string(DirectionKind kind) {
  switch (kind) {
    case DirectionKind::constant: return "constant";
    case DirectionKind::trig2d: return "trig2d";
    case DirectionKind::ellipsoid: return "ellipsoid";
    case DirectionKind::table2d: return "table2d";
    case DirectionKind::custom: return "custom";
  }
  return "unknown";
}

DirectionFunction DirectionFunction::constant(double v) {
  DirectionFunction f;
  f.kind = DirectionKind::constant;
  f.value = v;
  return f;
}

DirectionFunction DirectionFunction::trig2d(double a0, std::vector<double> cos_terms,
                                            std::vector<double> sin_terms) {
  DirectionFunction f;
  f.kind = DirectionKind::trig2d;
  f.a0 = a0;
  f.cos_terms = std::move(cos_terms);
  f.sin_terms = std::move(sin_terms);
  return f;
}

DirectionFunction DirectionFunction::ellipsoid(std::vector<double> diag) {
  DirectionFunction f;
  f.kind = DirectionKind::ellipsoid;
  f.diag = std::move(diag);
  return f;
}

DirectionFunction DirectionFunction::table2d(std::vector<double> samples) {
  if (samples.size() < 2)
    throw Error(ErrorCode::InvalidConfig, "table2d needs at least two samples");
  DirectionFunction f;
  f.kind = DirectionKind::table2d;
  f.table = std::move(samples);
  return f;
}

DirectionFunction DirectionFunction::custom(std::function<double(const Vec&)> fn) {
  DirectionFunction f;
  f.kind = DirectionKind::custom;
  f.fn = std::move(fn);
  return f;
}

double DirectionFunction::operator()(const Vec& unit) const {
  switch (kind) {
    case DirectionKind::constant:
      return value;
    case DirectionKind::trig2d: {
      const double theta = std::atan2(unit(1), unit(0));
      double s = a0;
      for (std::size_t k = 0; k < cos_terms.size(); ++k)
        s += cos_terms[k] * std::cos(static_cast<double>(k + 1) * theta);
      for (std::size_t k = 0; k < sin_terms.size(); ++k)
        s += sin_terms[k] * std::sin(static_cast<double>(k + 1) * theta);
      return s;
    }
    case DirectionKind::ellipsoid: {
      double s = 0;
      for (Eigen::Index i = 0; i < unit.size(); ++i) s += diag[i] * unit(i) * unit(i);
      return std::sqrt(s);
    }
    case DirectionKind::table2d:
      return table_lookup(table, std::atan2(unit(1), unit(0)));
    case DirectionKind::custom:
      return fn(unit);
  }
  return 0;
}

std::vector<Vec> half_circle_directions(int count) {
  std::vector<Vec> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double t = std::numbers::pi * k / count;
    out.push_back(Vec{{std::cos(t), std::sin(t)}});
  }
  return out;
}

std::vector<Vec> circle_directions(int count) {
  std::vector<Vec> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double t = 2 * std::numbers::pi * k / count;
    out.push_back(Vec{{std::cos(t), std::sin(t)}});
  }
  return out;
}

std::vector<Vec> sphere_directions(int count) {
  const double golden = std::numbers::pi * (3 - std::sqrt(5.0));
  std::vector<Vec> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double z = 1 - 2 * (k + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1 - z * z));
    out.push_back(Vec{{r * std::cos(golden * k), r * std::sin(golden * k), z}});
  }
  return out;
}

std::vector<Vec> hemisphere_directions(int count) {
  const double golden = std::numbers::pi * (3 - std::sqrt(5.0));
  std::vector<Vec> out;
  out.reserve(count);
  for (int k = 0; k < count; ++k) {
    const double z = 1 - (k + 0.5) / count;
    const double r = std::sqrt(std::max(0.0, 1 - z * z));
    out.push_back(Vec{{r * std::cos(golden * k), r * std::sin(golden * k), z}});
  }
  return out;
}

Mat tangent_frame(const Vec& p) {
  const Vec u = canonical_direction(p);
  if (u.size() == 2) {
    Mat t(2, 1);
    t << -u(1), u(0);
    return t;
  }
  Eigen::Index k = 0;
  u.cwiseAbs().minCoeff(&k);
  Vec axis = Vec::Zero(3);
  axis(k) = 1;
  Vec t1 = axis - u(k) * u;
  t1.normalize();
  const Eigen::Vector3d u3 = u;
  const Eigen::Vector3d t13 = t1;
  const Eigen::Vector3d t2 = u3.cross(t13);
  Mat t(3, 2);
  t.col(0) = t1;
  t.col(1) = Vec(t2);
  return t;
}

AnisotropyModel::AnisotropyModel(DirectionFunction b, DirectionFunction c, int dim)
    : b_(std::move(b)), c_(std::move(c)), dim_(dim) {
  if (dim < 2 || dim > 3)
    throw Error(ErrorCode::UnsupportedDimension,
                "dimension " + std::to_string(dim) + " (supported: 2, 3)");
  for (const auto* f : {&b_, &c_}) {
    if ((f->kind == DirectionKind::trig2d || f->kind == DirectionKind::table2d) && dim != 2)
      throw Error(ErrorCode::UnsupportedDimension, to_string(f->kind) + " is 2-D only");
    if (f->kind == DirectionKind::ellipsoid && static_cast<int>(f->diag.size()) != dim)
      throw Error(ErrorCode::InvalidConfig, "ellipsoid needs one coefficient per axis");
    if (f->kind == DirectionKind::custom && !f->fn)
      throw Error(ErrorCode::InvalidConfig, "custom direction function is empty");
  }

  const auto dirs = dense_sample(dim);
  b_min_ = c_min_ = std::numeric_limits<double>::infinity();
  b_max_ = c_max_ = -std::numeric_limits<double>::infinity();
  for (const Vec& n : dirs) {
    const double bn = mobility(n);
    const double cn = forcing_unit(n);
    if (!(bn > 0))
      throw Error(ErrorCode::NonPositiveMobility, "b = " + std::to_string(bn));
    if (!(cn >= 0))
      throw Error(ErrorCode::NegativeForcing, "c = " + std::to_string(cn));
    b_min_ = std::min(b_min_, bn);
    b_max_ = std::max(b_max_, bn);
    c_min_ = std::min(c_min_, cn);
    c_max_ = std::max(c_max_, cn);
  }

  // Lipschitz estimates from small tangential perturbations.
  constexpr double step = 1e-4;
  for (const Vec& n : dirs) {
    const Mat frame = tangent_frame(n);
    for (Eigen::Index j = 0; j < frame.cols(); ++j) {
      Vec m = n + step * frame.col(j);
      const double dist = (m.normalized() - n).norm();
      m.normalize();
      lip_sqrt_b_ = std::max(lip_sqrt_b_,
                             std::abs(std::sqrt(mobility(m)) - std::sqrt(mobility(n))) / dist);
      lip_c_ = std::max(lip_c_, std::abs(forcing_unit(m) - forcing_unit(n)) / dist);
    }
  }
}

double AnisotropyModel::mobility(const Vec& unit) const {
  return (b_(unit) + b_(Vec(-unit))) / 2;
}

double AnisotropyModel::forcing_unit(const Vec& unit) const {
  return (c_(unit) + c_(Vec(-unit))) / 2;
}

double AnisotropyModel::sigma_norm_bound() const {
  // ||sqrt(b) T||_F = sqrt(b (n - 1)) for an orthonormal frame T.
  return std::sqrt(b_max_ * (dim_ - 1));
}

AnisotropyModel make_model(const DirectionFunction& b, const DirectionFunction& c, int dim) {
  return AnisotropyModel(b, c, dim);
}

Mat sigma_of(const AnisotropyModel& model, const Vec& p) {
  const double norm = p.norm();
  if (!(norm >= kZeroGradient)) throw Error(ErrorCode::ZeroGradient, "sigma at |p| ~ 0");
  const Vec u = canonical_direction(p);
  return std::sqrt(model.mobility(u)) * tangent_frame(u);
}

double forcing_of(const AnisotropyModel& model, const Vec& p) {
  const double norm = p.norm();
  if (!(norm >= kZeroGradient)) throw Error(ErrorCode::ZeroGradient, "forcing at |p| ~ 0");
  return norm * model.forcing_unit(p / norm);
}

double F_eval(const AnisotropyModel& model, const Vec& p, const Mat& X) {
  const double scale = std::max(1.0, X.cwiseAbs().maxCoeff());
  if ((X - X.transpose()).cwiseAbs().maxCoeff() > 1e-12 * scale)
    throw Error(ErrorCode::AsymmetricMatrix, "F requires a symmetric Hessian");
  const Mat sigma = sigma_of(model, p);
  double trace = 0;
  for (Eigen::Index j = 0; j < sigma.cols(); ++j)
    trace += sigma.col(j).dot(X * sigma.col(j));
  return -trace + forcing_of(model, p);
}

double AssumptionReport::worst() const {
  return std::max({homogeneity, evenness, tangency, rank, reproduction, geometricity});
}

AssumptionReport validate_assumptions(const AnisotropyModel& model, int sample_count,
                                      unsigned long long seed) {
  if (sample_count < 100)
    throw Error(ErrorCode::OutOfRange, "validate_assumptions needs >= 100 samples");
  const int dim = model.dimension();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> lambda_dist(0.1, 10.0);
  std::uniform_real_distribution<double> mu_dist(-5.0, 5.0);

  AssumptionReport r;
  r.samples = sample_count;
  for (int s = 0; s < sample_count; ++s) {
    Vec p = random_vector(dim, rng);
    if (p.norm() < 1e-6) continue;
    const Vec u = p.normalized();
    const double lambda = lambda_dist(rng);
    const double mu = mu_dist(rng);
    const Mat X = random_symmetric(dim, rng);

    const Mat sig = sigma_of(model, p);
    const double b = model.mobility(u);
    r.homogeneity = std::max(r.homogeneity, (sigma_of(model, lambda * p) - sig).norm());
    r.homogeneity = std::max(
        r.homogeneity,
        std::abs(forcing_of(model, lambda * p) - lambda * forcing_of(model, p)) / lambda /
            (1 + std::abs(forcing_of(model, p))));

    r.evenness = std::max({r.evenness, std::abs(model.mobility(Vec(-u)) - b),
                           std::abs(model.forcing_unit(Vec(-u)) - model.forcing_unit(u)),
                           (sigma_of(model, Vec(-p)) - sig).norm()});

    r.tangency = std::max(r.tangency, (sig.transpose() * u).norm());
    const Mat gram = sig.transpose() * sig / b - Mat::Identity(dim - 1, dim - 1);
    r.rank = std::max(r.rank, gram.norm());
    const Mat proj = Mat::Identity(dim, dim) - u * u.transpose();
    r.reproduction = std::max(r.reproduction, (sig * sig.transpose() - b * proj).norm() / b);

    const double f = F_eval(model, p, X);
    const Mat Y = lambda * X + mu * p * p.transpose();
    const double g = F_eval(model, lambda * p, Mat((Y + Y.transpose()) / 2));
    r.geometricity =
        std::max(r.geometricity, std::abs(g - lambda * f) / (1 + std::abs(lambda * f)));
  }
  return r;
}

double wulff_gauge(const AnisotropyModel& model, const Vec& x, int n_dirs) {
  if (!(model.min_forcing() > 0))
    throw Error(ErrorCode::DegenerateForcing, "Wulff gauge needs min c > 0");
  if (n_dirs < 16) throw Error(ErrorCode::OutOfRange, "wulff_gauge needs n_dirs >= 16");
  const auto dirs = model.dimension() == 2 ? circle_directions(n_dirs)
                                           : sphere_directions(n_dirs);
  double best = -std::numeric_limits<double>::infinity();
  for (const Vec& n : dirs) best = std::max(best, x.dot(n) / model.forcing_unit(n));
  return best;
}

}  // namespace frontgame
