#pragma once

#include <iosfwd>
#include <string>
#include <vector>

#include "frontgame/dpp_solver.hpp"

namespace frontgame {

/// Shortest round-trip decimal form; +inf prints as `inf`.
std::string format_double(double v);

/// CSV with header x0,...,x{n-1},u,U, one node per row in storage order.
void write_field_csv(std::ostream& out, const ValueField& field, const std::vector<double>& arrival);
void write_field_csv(const std::string& path, const ValueField& field,
                     const std::vector<double>& arrival);

/// Little-endian f64 values in row-major order followed by one mask byte per
/// node, plus a JSON sidecar {dims, origin, spacing, epsilon, model_digest,
/// mask_offset}.
void write_field_raw(const std::string& bin_path, const std::string& sidecar_path,
                     const ValueField& field, const std::string& model_digest);

struct LoadedField {
  ValueField field;
  std::string model_digest;
};

LoadedField read_field_raw(const std::string& bin_path, const std::string& sidecar_path);

}  // namespace frontgame
