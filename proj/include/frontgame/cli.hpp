#pragma once

#include <iosfwd>
#include <string>
#include <vector>

namespace frontgame {

enum ExitCode : int {
  kExitOk = 0,
  kExitConfig = 1,
  kExitInvariant = 2,
  kExitNotConverged = 3,
  kExitNoCapture = 4,
  kExitDigest = 5,
};

/// Writes field.csv, field.bin, field.json, diagnostics.json, manifest.json.
int cmd_solve(const std::string& config_path, const std::string& out_dir, std::ostream& log);

/// suite: contraction, monotonicity, consistency, bound, wulff or refine.
int cmd_check(const std::string& config_path, const std::string& suite,
              const std::string& out_dir, std::ostream& log);

/// mode: optimal (needs a solved field.bin with its .json sidecar) or concentric.
int cmd_rollout(const std::string& config_path, const std::string& field_path,
                const std::vector<double>& x, const std::string& mode, const std::string& out_dir,
                std::ostream& log);

/// Raw field to CSV.
int cmd_export(const std::string& field_path, const std::string& csv_path, double eta,
               std::ostream& log);

}  // namespace frontgame
