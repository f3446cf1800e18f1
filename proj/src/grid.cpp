#include "frontgame/grid.hpp"

#include "frontgame/error.hpp"

namespace frontgame {

std::size_t GridSpec::node_count() const {
  std::size_t total = 1;
  for (int c : counts) total *= static_cast<std::size_t>(c);
  return total;
}

Vec GridSpec::box_hi() const {
  Vec hi = origin;
  for (int i = 0; i < dimension(); ++i) hi(i) += spacing * (counts[i] - 1);
  return hi;
}

std::vector<std::size_t> GridSpec::strides() const {
  std::vector<std::size_t> s(counts.size());
  std::size_t acc = 1;
  for (int i = dimension() - 1; i >= 0; --i) {
    s[i] = acc;
    acc *= static_cast<std::size_t>(counts[i]);
  }
  return s;
}

std::vector<int> GridSpec::multi_index(std::size_t linear) const {
  std::vector<int> idx(counts.size());
  for (int i = dimension() - 1; i >= 0; --i) {
    idx[i] = static_cast<int>(linear % counts[i]);
    linear /= counts[i];
  }
  return idx;
}

Vec GridSpec::position(std::size_t linear) const {
  const auto idx = multi_index(linear);
  Vec x(dimension());
  for (int i = 0; i < dimension(); ++i) x(i) = origin(i) + spacing * idx[i];
  return x;
}

bool GridSpec::contains(const double* y) const {
  for (int i = 0; i < dimension(); ++i) {
    const double t = (y[i] - origin(i)) / spacing;
    if (!(t >= 0.0) || t > counts[i] - 1) return false;
  }
  return true;
}

void GridSpec::validate(std::size_t max_nodes) const {
  if (counts.size() < 2 || counts.size() > 3)
    throw Error(ErrorCode::UnsupportedDimension, "grid must be 2-D or 3-D");
  if (origin.size() != dimension())
    throw Error(ErrorCode::InvalidConfig, "grid origin has wrong dimension");
  if (!(spacing > 0)) throw Error(ErrorCode::InvalidConfig, "grid spacing must be positive");
  for (int c : counts)
    if (c < 2) throw Error(ErrorCode::InvalidConfig, "grid needs >= 2 nodes per axis");
  if (node_count() > max_nodes)
    throw Error(ErrorCode::GridTooLarge, std::to_string(node_count()) + " nodes exceeds cap " +
                                             std::to_string(max_nodes));
}

}  // namespace frontgame
