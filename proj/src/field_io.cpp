#include "frontgame/field_io.hpp"

#include <bit>
#include <charconv>
#include <cmath>
#include <cstring>
#include <fstream>
#include <limits>
#include <nlohmann/json.hpp>

#include "frontgame/error.hpp"

namespace frontgame {

namespace {

static_assert(std::endian::native == std::endian::little,
              "raw field export assumes a little-endian host");

std::ofstream open_out(const std::string& path, std::ios::openmode mode = std::ios::out) {
  std::ofstream out(path, mode);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path + " for writing");
  return out;
}

}  // namespace

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  return std::string(buf, res.ptr);
}

void write_field_csv(std::ostream& out, const ValueField& field,
                     const std::vector<double>& arrival) {
  const int dim = field.grid.dimension();
  for (int i = 0; i < dim; ++i) out << 'x' << i << ',';
  out << "u,U\n";
  std::string line;
  for (std::size_t k = 0; k < field.size(); ++k) {
    const Vec p = field.grid.position(k);
    line.clear();
    for (int i = 0; i < dim; ++i) {
      line += format_double(p(i));
      line += ',';
    }
    line += format_double(field.values[k]);
    line += ',';
    line += format_double(arrival[k]);
    line += '\n';
    out << line;
  }
}

void write_field_csv(const std::string& path, const ValueField& field,
                     const std::vector<double>& arrival) {
  auto out = open_out(path);
  write_field_csv(out, field, arrival);
  if (!out) throw Error(ErrorCode::Io, "write failed: " + path);
}

void write_field_raw(const std::string& bin_path, const std::string& sidecar_path,
                     const ValueField& field, const std::string& model_digest) {
  {
    auto out = open_out(bin_path, std::ios::out | std::ios::binary);
    out.write(reinterpret_cast<const char*>(field.values.data()),
              static_cast<std::streamsize>(field.values.size() * sizeof(double)));
    out.write(reinterpret_cast<const char*>(field.target_mask.data()),
              static_cast<std::streamsize>(field.target_mask.size()));
    if (!out) throw Error(ErrorCode::Io, "write failed: " + bin_path);
  }
  nlohmann::ordered_json j;
  j["dims"] = field.grid.counts;
  j["origin"] = std::vector<double>(field.grid.origin.data(),
                                    field.grid.origin.data() + field.grid.origin.size());
  j["spacing"] = field.grid.spacing;
  j["epsilon"] = field.epsilon;
  j["model_digest"] = model_digest;
  j["mask_offset"] = field.values.size() * sizeof(double);
  auto out = open_out(sidecar_path);
  out << j.dump(2) << '\n';
}

LoadedField read_field_raw(const std::string& bin_path, const std::string& sidecar_path) {
  std::ifstream side(sidecar_path);
  if (!side) throw Error(ErrorCode::Io, "cannot open " + sidecar_path);
  nlohmann::json j;
  try {
    side >> j;
  } catch (const nlohmann::json::exception& e) {
    throw Error(ErrorCode::Io, "bad sidecar " + sidecar_path + ": " + e.what());
  }
  LoadedField out;
  auto& f = out.field;
  f.grid.counts = j.at("dims").get<std::vector<int>>();
  const auto origin = j.at("origin").get<std::vector<double>>();
  f.grid.origin = Vec::Map(origin.data(), static_cast<Eigen::Index>(origin.size()));
  f.grid.spacing = j.at("spacing").get<double>();
  f.epsilon = j.at("epsilon").get<double>();
  out.model_digest = j.at("model_digest").get<std::string>();
  const std::size_t offset = j.at("mask_offset").get<std::size_t>();

  const std::size_t count = f.grid.node_count();
  if (offset != count * sizeof(double)) throw Error(ErrorCode::Io, "mask_offset mismatch");
  std::ifstream in(bin_path, std::ios::binary);
  if (!in) throw Error(ErrorCode::Io, "cannot open " + bin_path);
  f.values.resize(count);
  f.target_mask.resize(count);
  in.read(reinterpret_cast<char*>(f.values.data()), static_cast<std::streamsize>(offset));
  in.read(reinterpret_cast<char*>(f.target_mask.data()), static_cast<std::streamsize>(count));
  if (!in) throw Error(ErrorCode::Io, "truncated field file " + bin_path);
  f.retained.assign(count * f.grid.dimension(), std::numeric_limits<double>::quiet_NaN());
  return out;
}

}  // namespace frontgame
