#include "frontgame/config.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <openssl/evp.h>
#include <sstream>

#include "frontgame/error.hpp"

namespace frontgame {

namespace {

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return "";
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

double parse_number(const std::string& key, const std::string& raw) {
  const std::string s = trim(raw);
  if (s == "inf" || s == "+inf") return kInfinity;
  double v = 0;
  const auto res = std::from_chars(s.data(), s.data() + s.size(), v);
  if (res.ec != std::errc() || res.ptr != s.data() + s.size())
    throw Error(ErrorCode::ConfigParse, key + ": not a number: '" + s + "'");
  return v;
}

std::vector<double> parse_list(const std::string& key, const std::string& raw) {
  std::vector<double> out;
  std::string item;
  std::istringstream in(raw);
  while (std::getline(in, item, ',')) {
    if (trim(item).empty()) continue;
    out.push_back(parse_number(key, item));
  }
  return out;
}

Vec to_vec(const std::vector<double>& v) {
  return Vec::Map(v.data(), static_cast<Eigen::Index>(v.size()));
}

DirectionFunction direction_function(const ConfigFile& cfg, const std::string& prefix) {
  const std::string kind = cfg.get(prefix + ".kind");
  if (kind == "constant") return DirectionFunction::constant(cfg.number(prefix + ".value"));
  if (kind == "trig2d")
    return DirectionFunction::trig2d(cfg.number(prefix + ".a0"),
                                     cfg.numbers_or(prefix + ".cos", {}),
                                     cfg.numbers_or(prefix + ".sin", {}));
  if (kind == "ellipsoid") return DirectionFunction::ellipsoid(cfg.numbers(prefix + ".diag"));
  if (kind == "table2d") return DirectionFunction::table2d(cfg.numbers(prefix + ".table"));
  throw Error(ErrorCode::ConfigParse, prefix + ".kind: unknown kind '" + kind + "'");
}

TargetShape target_shape(const ConfigFile& cfg, int n) {
  const std::string shape = cfg.get("target.shape");
  auto sized = [&](const std::string& key) {
    const auto v = cfg.numbers(key);
    if (static_cast<int>(v.size()) != n)
      throw Error(ErrorCode::ConfigParse, key + ": expected " + std::to_string(n) + " values");
    return to_vec(v);
  };
  if (shape == "ball") return Ball{sized("target.center"), cfg.number("target.radius")};
  if (shape == "box") return AxisBox{sized("target.lo"), sized("target.hi")};
  if (shape == "ellipsoid") return Ellipsoid{sized("target.center"), sized("target.semi_axes")};
  if (shape == "balls") {
    const auto centers = cfg.numbers("target.centers");
    const auto radii = cfg.numbers("target.radii");
    if (centers.size() != radii.size() * n)
      throw Error(ErrorCode::ConfigParse, "target.centers must hold n values per radius");
    BallUnion u;
    for (std::size_t k = 0; k < radii.size(); ++k)
      u.balls.push_back(Ball{to_vec({centers.begin() + k * n, centers.begin() + (k + 1) * n}),
                             radii[k]});
    return u;
  }
  throw Error(ErrorCode::ConfigParse, "target.shape: unknown shape '" + shape + "'");
}

}  // namespace

ConfigFile ConfigFile::parse(const std::string& text) {
  ConfigFile cfg;
  std::istringstream in(text);
  std::string line;
  int lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
    line = trim(line);
    if (line.empty()) continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw Error(ErrorCode::ConfigParse, "line " + std::to_string(lineno) + ": missing '='");
    const std::string key = trim(line.substr(0, eq));
    const std::string value = trim(line.substr(eq + 1));
    if (key.empty())
      throw Error(ErrorCode::ConfigParse, "line " + std::to_string(lineno) + ": empty key");
    if (cfg.entries_.count(key))
      throw Error(ErrorCode::ConfigParse, "line " + std::to_string(lineno) + ": duplicate " + key);
    cfg.entries_[key] = value;
  }
  return cfg;
}

ConfigFile ConfigFile::load(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw Error(ErrorCode::ConfigParse, "cannot read " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

std::string ConfigFile::get(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw Error(ErrorCode::ConfigParse, "missing key " + key);
  return it->second;
}

std::string ConfigFile::get_or(const std::string& key, const std::string& fallback) const {
  return has(key) ? get(key) : fallback;
}

double ConfigFile::number(const std::string& key) const { return parse_number(key, get(key)); }

double ConfigFile::number_or(const std::string& key, double fallback) const {
  return has(key) ? number(key) : fallback;
}

long ConfigFile::integer(const std::string& key) const {
  const double v = number(key);
  if (v != std::floor(v) || std::abs(v) > 1e15)
    throw Error(ErrorCode::ConfigParse, key + ": not an integer");
  return static_cast<long>(v);
}

long ConfigFile::integer_or(const std::string& key, long fallback) const {
  return has(key) ? integer(key) : fallback;
}

std::vector<double> ConfigFile::numbers(const std::string& key) const {
  return parse_list(key, get(key));
}

std::vector<double> ConfigFile::numbers_or(const std::string& key,
                                           std::vector<double> fallback) const {
  return has(key) ? numbers(key) : fallback;
}

std::string ConfigFile::problem_text() const {
  std::string out;
  for (const auto& [k, v] : entries_) {
    if (k.rfind("check.", 0) == 0 || k.rfind("rollout.", 0) == 0) continue;
    out += k + " = " + v + "\n";
  }
  return out;
}

std::string ConfigFile::problem_digest() const { return sha256_hex(problem_text()); }

std::string sha256_hex(const std::string& data) {
  unsigned char md[EVP_MAX_MD_SIZE];
  unsigned int len = 0;
  if (EVP_Digest(data.data(), data.size(), md, &len, EVP_sha256(), nullptr) != 1)
    throw Error(ErrorCode::Io, "SHA-256 failed");
  static const char* hex = "0123456789abcdef";
  std::string out;
  for (unsigned int i = 0; i < len; ++i) {
    out += hex[md[i] >> 4];
    out += hex[md[i] & 15];
  }
  return out;
}

ProblemConfig build_problem(const ConfigFile& cfg) {
  const int n = static_cast<int>(cfg.integer("model.n"));
  ProblemConfig c;
  c.model = make_model(direction_function(cfg, "model.b"), direction_function(cfg, "model.c"), n);
  c.target = TargetSet(target_shape(cfg, n), BoundaryData::constant(cfg.number_or("target.G", 0)));

  const auto origin = cfg.numbers("grid.origin");
  std::vector<int> counts;
  for (double v : cfg.numbers("grid.counts")) {
    if (v != std::floor(v)) throw Error(ErrorCode::ConfigParse, "grid.counts must be integers");
    counts.push_back(static_cast<int>(v));
  }
  if (static_cast<int>(origin.size()) != n || static_cast<int>(counts.size()) != n)
    throw Error(ErrorCode::ConfigParse, "grid.origin and grid.counts need n entries");
  c.grid = GridSpec{to_vec(origin), cfg.number("grid.h"), counts};

  c.epsilon = cfg.number("game.epsilon");
  c.n_dir = static_cast<int>(cfg.integer_or("game.n_dir", c.n_dir));
  c.n_basis = static_cast<int>(cfg.integer_or("game.n_basis", c.n_basis));
  c.tolerance = cfg.number_or("solve.tolerance", c.tolerance);
  c.max_iterations = static_cast<int>(cfg.integer_or("solve.max_iterations", c.max_iterations));
  const std::string mode = cfg.get_or("solve.sweep_mode", "jacobi");
  if (mode == "jacobi")
    c.sweep_mode = SweepMode::jacobi;
  else if (mode == "gauss_seidel")
    c.sweep_mode = SweepMode::gauss_seidel;
  else
    throw Error(ErrorCode::ConfigParse, "solve.sweep_mode: unknown mode '" + mode + "'");
  c.seed = static_cast<std::uint64_t>(cfg.integer_or("seed", 0));
  c.validate();
  return c;
}

std::vector<RefinementLevel> parse_levels(const std::string& text) {
  std::vector<RefinementLevel> out;
  std::istringstream in(text);
  std::string item;
  while (std::getline(in, item, ';')) {
    if (trim(item).empty()) continue;
    std::istringstream fields(item);
    std::string a, b, c, extra;
    if (!(fields >> a >> b >> c) || (fields >> extra))
      throw Error(ErrorCode::ConfigParse, "check.levels: expected 'eps h n_dir' triples");
    out.push_back({parse_number("check.levels", a), parse_number("check.levels", b),
                   static_cast<int>(parse_number("check.levels", c))});
  }
  if (out.empty()) throw Error(ErrorCode::ConfigParse, "check.levels is empty");
  return out;
}

}  // namespace frontgame
