#include "frontgame/cli.hpp"

#include <filesystem>
#include <fstream>
#include <functional>
#include <ostream>

#include <nlohmann/json.hpp>

#include "frontgame/config.hpp"
#include "frontgame/error.hpp"
#include "frontgame/field_io.hpp"
#include "frontgame/rollout.hpp"
#include "frontgame/verification.hpp"

namespace frontgame {

namespace fs = std::filesystem;
using json = nlohmann::ordered_json;

namespace {

constexpr double kArrivalEta = 1e-12;

int exit_code_for(const Error& e) {
  return e.code() == ErrorCode::ConfigParse ? kExitConfig : kExitInvariant;
}

// Runs body and maps library errors onto the exit-code contract.
int guarded(std::ostream& log, const std::function<int()>& body) {
  try {
    return body();
  } catch (const Error& e) {
    log << "error: " << e.what() << '\n';
    return exit_code_for(e);
  } catch (const std::exception& e) {
    log << "error: " << e.what() << '\n';
    return kExitInvariant;
  }
}

void write_json(const fs::path& path, const json& j) {
  std::ofstream out(path);
  if (!out) throw Error(ErrorCode::Io, "cannot open " + path.string() + " for writing");
  out << j.dump(2) << '\n';
}

void write_manifest(const fs::path& dir, const std::string& command, const ConfigFile& cfg,
                    std::vector<std::string> outputs, int status) {
  outputs.push_back((dir / "manifest.json").string());
  json j;
  j["command"] = command;
  j["config_digest"] = cfg.problem_digest();
  j["outputs"] = outputs;
  j["exit_status"] = status;
  write_json(dir / "manifest.json", j);
}

fs::path prepare_dir(const std::string& out_dir) {
  fs::path dir(out_dir);
  std::error_code ec;
  fs::create_directories(dir, ec);
  if (ec) throw Error(ErrorCode::Io, "cannot create " + out_dir + ": " + ec.message());
  return dir;
}

fs::path sidecar_for(const std::string& field_path) {
  return fs::path(field_path).replace_extension(".json");
}

json vec_json(const Vec& v) { return std::vector<double>(v.data(), v.data() + v.size()); }

}  // namespace

int cmd_solve(const std::string& config_path, const std::string& out_dir, std::ostream& log) {
  return guarded(log, [&] {
    const ConfigFile cfg = ConfigFile::load(config_path);
    const ProblemConfig problem = build_problem(cfg);
    const fs::path dir = prepare_dir(out_dir);

    const SolveResult res = solve(problem);
    const auto U = arrival_field(res.field, kArrivalEta);
    const auto& d = res.diagnostics;
    const int status = d.converged ? kExitOk : kExitNotConverged;

    std::vector<std::string> outputs;
    const fs::path csv = dir / "field.csv", bin = dir / "field.bin", side = dir / "field.json",
                   diag = dir / "diagnostics.json";
    write_field_csv(csv.string(), res.field, U);
    write_field_raw(bin.string(), side.string(), res.field, cfg.problem_digest());
    json j;
    j["iterations"] = d.iterations;
    j["final_residual"] = d.final_residual;
    j["stop_threshold"] = problem.tolerance * -std::expm1(-problem.epsilon * problem.epsilon);
    j["contraction_factor_observed"] = d.contraction_factor_observed;
    j["contraction_factor"] = std::exp(-problem.epsilon * problem.epsilon);
    j["wall_time"] = d.wall_time;
    j["converged"] = d.converged;
    j["sweep_mode"] = to_string(problem.sweep_mode);
    write_json(diag, j);
    outputs = {csv.string(), bin.string(), side.string(), diag.string()};
    write_manifest(dir, "solve", cfg, outputs, status);
    if (!d.converged)
      log << "MaxIterationsExceeded: residual " << d.final_residual << " after " << d.iterations
          << " iterations\n";
    else
      log << "converged in " << d.iterations << " iterations (" << d.wall_time << " s)\n";
    return status;
  });
}

int cmd_check(const std::string& config_path, const std::string& suite,
              const std::string& out_dir, std::ostream& log) {
  return guarded(log, [&] {
    const ConfigFile cfg = ConfigFile::load(config_path);
    const ProblemConfig problem = build_problem(cfg);
    const int trials = static_cast<int>(cfg.integer_or("check.trials", 100));
    json params;
    params["config_digest"] = cfg.problem_digest();
    json metrics;
    bool pass = false;

    if (suite == "contraction") {
      const auto r = contraction_test(problem, trials, problem.seed);
      params["trials"] = trials;
      metrics["max_ratio"] = r.max_ratio;
      metrics["factor"] = r.factor;
      metrics["pairs"] = r.pairs;
      pass = r.max_ratio <= r.factor + 1e-12;
    } else if (suite == "monotonicity") {
      const auto r = monotonicity_test(problem, trials, problem.seed);
      params["trials"] = trials;
      metrics["worst_violation"] = r.worst_violation;
      metrics["pairs"] = r.pairs;
      pass = r.ok;
    } else if (suite == "consistency") {
      const auto eps = cfg.numbers_or("check.eps", {0.2, 0.1, 0.05, 0.025});
      params["eps"] = eps;
      pass = true;
      json cases = json::array();
      for (const auto& qc : reference_quadratics(problem.model.dimension())) {
        const auto r = consistency_study(problem.model, qc.phi, qc.x, eps, problem.n_basis);
        const bool ok = r.ratios_upper.back() <= 0.5 * r.ratios_upper.front() &&
                        r.ratios_lower.back() <= 0.5 * r.ratios_lower.front();
        pass = pass && ok;
        json c;
        c["x"] = vec_json(qc.x);
        c["upper_err"] = r.errors_part1;
        c["lower_err"] = r.errors_part3;
        c["ratio_upper"] = r.ratios_upper;
        c["ratio_lower"] = r.ratios_lower;
        c["halved"] = ok;
        cases.push_back(c);
      }
      metrics["cases"] = cases;
    } else if (suite == "bound") {
      capture_radius(problem.model);
      const auto res = solve(problem);
      const auto U = arrival_field(res.field, kArrivalEta);
      const auto r = capture_bound_check(res.field, U, problem.model);
      metrics["R"] = r.R;
      metrics["slack"] = r.slack;
      metrics["inscribed_radius"] = r.inscribed_radius;
      metrics["max_excess"] = r.max_excess;
      metrics["checked"] = r.checked;
      metrics["violations"] = r.violations;
      metrics["excluded"] = r.excluded;
      metrics["excluded_violations"] = r.excluded_violations;
      metrics["excluded_max_excess"] = r.excluded_max_excess;
      pass = r.violations == 0;
    } else if (suite == "wulff") {
      const auto times = cfg.numbers_or("check.times", {1, 2, 4});
      const double t0 = cfg.number_or("check.t0", 1.0);
      const int n_dirs = static_cast<int>(cfg.integer_or("check.n_dirs", 720));
      params["t0"] = t0;
      params["times"] = times;
      params["n_dirs"] = n_dirs;
      capture_radius(problem.model);
      const auto res = solve(problem);
      const auto U = arrival_field(res.field, kArrivalEta);
      pass = true;
      json rows = json::array();
      for (double t : times) {
        const auto r = wulff_inclusion_test(res.field, U, problem.model, t, t0, n_dirs);
        rows.push_back({{"t", t},
                        {"max_gauge", r.max_gauge},
                        {"bound", t + t0 + r.slack},
                        {"checked", r.checked},
                        {"violations", r.violations}});
        pass = pass && r.violations == 0;
      }
      metrics["levels"] = rows;
    } else if (suite == "refine") {
      const auto levels = parse_levels(cfg.get("check.levels"));
      const auto& b = problem.model.mobility_function();
      const auto& c = problem.model.forcing_function();
      const auto* ball = std::get_if<Ball>(&problem.target.shape());
      if (b.kind != DirectionKind::constant || c.kind != DirectionKind::constant || !ball)
        throw Error(ErrorCode::InvalidConfig, "refine needs constant b, c and a ball target");
      const RadialOracle oracle{ball->radius, b.value, c.value, problem.model.dimension()};
      const auto r = refinement_study(problem, levels, oracle);
      json rows = json::array();
      for (std::size_t i = 0; i < r.levels.size(); ++i)
        rows.push_back({{"eps", r.levels[i].eps},
                        {"h", r.levels[i].h},
                        {"n_dir", r.levels[i].n_dir},
                        {"sup_error", r.sup_errors[i]},
                        {"nodes", r.nodes[i]},
                        {"runtime", r.runtimes[i]}});
      metrics["levels"] = rows;
      metrics["inner_radius"] = r.inner_radius;
      metrics["collar"] = r.collar;
      metrics["decreasing"] = r.decreasing;
      pass = true;  // the trend is reported, not enforced
    } else {
      throw Error(ErrorCode::ConfigParse, "unknown suite '" + suite + "'");
    }

    const fs::path dir = prepare_dir(out_dir);
    const fs::path report = dir / ("report_" + suite + ".json");
    write_json(report, make_report(suite, params, metrics, pass));
    const int status = pass ? kExitOk : kExitInvariant;
    write_manifest(dir, "check " + suite, cfg, {report.string()}, status);
    log << suite << ": " << (pass ? "pass" : "FAIL") << '\n';
    return status;
  });
}

int cmd_rollout(const std::string& config_path, const std::string& field_path,
                const std::vector<double>& x, const std::string& mode, const std::string& out_dir,
                std::ostream& log) {
  return guarded(log, [&] {
    const ConfigFile cfg = ConfigFile::load(config_path);
    const ProblemConfig problem = build_problem(cfg);
    if (static_cast<int>(x.size()) != problem.model.dimension())
      throw Error(ErrorCode::ConfigParse, "start point needs n coordinates");
    const Vec start = Vec::Map(x.data(), static_cast<Eigen::Index>(x.size()));

    std::optional<LoadedField> loaded;
    if (!field_path.empty()) {
      loaded = read_field_raw(field_path, sidecar_for(field_path).string());
      const auto& g = loaded->field.grid;
      if (loaded->model_digest != cfg.problem_digest() || g.counts != problem.grid.counts ||
          g.spacing != problem.grid.spacing || g.origin != problem.grid.origin) {
        log << "DigestMismatch: field was solved for a different configuration\n";
        return static_cast<int>(kExitDigest);
      }
      loaded->field.epsilon = problem.epsilon;
    }

    Trajectory t;
    json summary;
    if (mode == "optimal") {
      if (!loaded) throw Error(ErrorCode::ConfigParse, "optimal rollout needs --field");
      const double alpha = cfg.number_or("rollout.alpha", 1e-3);
      const Vec span = problem.grid.box_hi() - problem.grid.box_lo();
      const long cap =
          cfg.integer_or("rollout.step_cap", default_step_cap(problem.model, span.norm(),
                                                              problem.epsilon));
      t = epsilon_optimal_rollout(problem, loaded->field, start, alpha, cap);
      const double u = t.start_value;
      summary["alpha"] = alpha;
      summary["start_value"] = u;
      summary["interpolation_slack"] = t.interpolation_slack;
      summary["selection_slack"] = t.selection_slack;
      if (t.terminated == Termination::hit_target)
        summary["bracket_ok"] =
            t.payoff_transformed - alpha - t.interpolation_slack <= u &&
            u <= t.payoff_transformed + t.interpolation_slack;
    } else if (mode == "concentric") {
      const double radius = cfg.number_or("rollout.target_radius", capture_radius(problem.model));
      const long cap = cfg.integer_or(
          "rollout.step_cap",
          default_step_cap(problem.model, start.norm() - radius, problem.epsilon));
      t = concentric_rollout(problem.model, radius, start, problem.epsilon, cap);
      summary["target_radius"] = radius;
      summary["step_bound"] = static_cast<long>(
          std::ceil((start.norm() - radius) / (problem.epsilon * problem.epsilon *
                                               problem.model.min_forcing() / 2)));
    } else {
      throw Error(ErrorCode::ConfigParse, "unknown rollout mode '" + mode + "'");
    }
    summary["mode"] = mode;
    summary["start"] = x;
    summary["terminated"] = to_string(t.terminated);
    summary["steps"] = t.steps();
    summary["payoff_transformed"] = t.payoff_transformed;
    summary["payoff_time"] = std::isfinite(t.payoff_time) ? json(t.payoff_time) : json("inf");

    const fs::path dir = prepare_dir(out_dir);
    const fs::path traj = dir / "trajectory.csv", pay = dir / "payoff.json";
    write_trajectory_csv(traj.string(), t);
    write_json(pay, summary);
    const int status = t.terminated == Termination::hit_target ? kExitOk : kExitNoCapture;
    write_manifest(dir, "rollout " + mode, cfg, {traj.string(), pay.string()}, status);
    log << "rollout " << mode << ": " << to_string(t.terminated) << " after " << t.steps()
        << " steps\n";
    return status;
  });
}

int cmd_export(const std::string& field_path, const std::string& csv_path, double eta,
               std::ostream& log) {
  return guarded(log, [&] {
    const auto loaded = read_field_raw(field_path, sidecar_for(field_path).string());
    write_field_csv(csv_path, loaded.field, arrival_field(loaded.field, eta));
    log << "wrote " << csv_path << '\n';
    return static_cast<int>(kExitOk);
  });
}

}  // namespace frontgame
