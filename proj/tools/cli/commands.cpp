#include "commands.hpp"

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <map>
#include <ostream>

#include "eqp/euler_solver.hpp"
#include "eqp/verification.hpp"
#include "field_io.hpp"

namespace eqp::cli {

namespace fs = std::filesystem;

namespace {

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream os(path, std::ios::trunc);
  if (!os) throw Error("cannot open " + path.string() + " for writing");
  os << text;
  if (!os) throw Error("failed writing " + path.string());
}

void check_run_parameters(const RunConfig& c) {
  if (c.grid < 16 || c.grid % 2 != 0) throw ConfigError("grid", "must be even and at least 16");
  if (!(c.dt > 0.0)) throw ConfigError("dt", "must be positive");
  if (!(c.t_end >= 0.0)) throw ConfigError("t_end", "must be non-negative");
  if (!(c.cfl_cap > 0.0)) throw ConfigError("cfl_cap", "must be positive");
}

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6e", v);
  return buf;
}

void print_warnings(const ShearFlow& flow, std::ostream& err) {
  for (const auto& w : flow.warnings()) err << "warning: " << w << '\n';
}

}  // namespace

RunConfig resolve_config(const CommandOptions& options) {
  RunConfig c = options.config ? load_config(*options.config) : default_config();
  if (options.grid) c.grid = *options.grid;
  if (options.dt) c.dt = *options.dt;
  if (options.t_end) c.t_end = *options.t_end;
  if (options.snapshot_stride) c.snapshot_stride = *options.snapshot_stride;
  if (options.out) c.output_dir = options.out->string();
  return c;
}

fs::path resolve_output_dir(const CommandOptions& options, const RunConfig& config) {
  if (options.out) return *options.out;
  if (!config.output_dir.empty()) return config.output_dir;
  if (const char* env = std::getenv("EQP_OUT"); env && *env) return env;
  return "eqp_out";
}

std::string snapshot_name(std::size_t step) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "omega_%08zu.eqpf", step);
  return buf;
}

int cmd_build(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const RunConfig config = resolve_config(options);
  check_run_parameters(config);
  const auto solution = build_solution(config);
  print_warnings(solution.flow(), err);
  const TorusGrid grid(config.grid);
  const fs::path dir = resolve_output_dir(options, config);
  fs::create_directories(dir);
  write_field(dir / "omega_init.eqpf", solution.vorticity(0.0, grid, options.workers), 0.0);
  write_field(dir / "psi_init.eqpf", solution.stream(0.0, grid, options.workers), 0.0);
  write_text(dir / "manifest.cfg", serialize_manifest({config, derive_info(solution, options.workers)}));
  out << "wrote " << (dir / "omega_init.eqpf").string() << ", " << (dir / "psi_init.eqpf").string() << ", "
      << (dir / "manifest.cfg").string() << '\n';
  return kExitOk;
}

int cmd_run(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const RunConfig config = resolve_config(options);
  check_run_parameters(config);
  const auto solution = build_solution(config);
  print_warnings(solution.flow(), err);
  const TorusGrid grid(config.grid);
  const fs::path dir = resolve_output_dir(options, config);
  const fs::path snapshots = dir / "snapshots";
  fs::create_directories(snapshots);
  write_text(dir / "manifest.cfg", serialize_manifest({config, derive_info(solution, options.workers)}));

  EulerSolver solver(grid);
  SolverConfig sc;
  sc.dt = config.dt;
  sc.t_end = config.t_end;
  sc.cfl_cap = config.cfl_cap;
  sc.snapshot_stride = config.snapshot_stride;
  sc.allow_cfl_violation = options.allow_cfl_violation;

  const auto total_steps = static_cast<std::size_t>(std::ceil(config.t_end / config.dt - 1e-9));
  std::ofstream csv(dir / "diagnostics.csv", std::ios::trunc);
  if (!csv) throw Error("cannot open diagnostics.csv for writing");
  csv << "t,energy,enstrophy,casimir3,mean_omega,max_velocity,l2_err_vs_analytic,linf_err_vs_analytic\n";
  csv.precision(17);

  const auto start = std::chrono::steady_clock::now();
  EvolutionError last{};
  auto observer = [&](const SolverState& state, const Diagnostics& d) {
    write_field(snapshots / snapshot_name(state.step), state.omega, state.t);
    last = evolution_error(solution, state.omega, state.t, options.workers);
    csv << d.t << ',' << d.energy << ',' << d.enstrophy << ',' << d.casimir3 << ',' << d.mean_omega << ','
        << d.max_velocity << ',' << last.l2 << ',' << last.linf << '\n';
    const double elapsed = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    char line[128];
    std::snprintf(line, sizeof line, "[%8.2f s] step %zu/%zu t=%.6f l2_err=%.3e", elapsed, state.step,
                  total_steps, state.t, last.l2);
    err << line << '\n';
  };
  auto initial = solution.vorticity(0.0, grid, options.workers);
  if (!options.allow_cfl_violation) {
    const double cfl = solver.cfl_number(initial, config.dt);
    if (cfl > config.cfl_cap) {
      throw ConfigError("dt", "violates the CFL cap: max|u| dt / dx = " + format_double(cfl) + " > " +
                                  format_double(config.cfl_cap) + " (override with --allow-cfl-violation)");
    }
  }
  const auto result = solver.run(sc, std::move(initial), observer);
  csv.flush();
  if (!csv) throw Error("failed writing diagnostics.csv");
  out << "final t=" << format_double(result.final_state.t) << " steps=" << result.final_state.step
      << " l2_err_vs_analytic=" << sci(last.l2) << " linf_err_vs_analytic=" << sci(last.linf) << '\n';
  return kExitOk;
}

int cmd_verify(const CommandOptions& options, std::ostream& out, std::ostream& err) {
  const RunConfig config = resolve_config(options);
  check_run_parameters(config);
  const auto flow = build_flow(config);
  print_warnings(flow, err);
  const auto profiles = build_profiles(config);
  if (!profiles.empty() && profiles.size() != flow.strips().size()) {
    throw ConfigError("profile", "expected 0 or " + std::to_string(flow.strips().size()) + " profiles, got " +
                                     std::to_string(profiles.size()));
  }
  for (std::size_t k = 0; k < profiles.size(); ++k) {
    if (!flow.strips()[k].contains(profiles[k].center().x) || profiles[k].center().x == flow.strips()[k].a ||
        profiles[k].center().x == flow.strips()[k].b) {
      throw ConfigError("profile[" + std::to_string(k) + "].x", "center lies outside strip " + std::to_string(k));
    }
  }

  SuiteOptions so;
  so.n = config.grid;
  so.dt = config.dt;
  so.t_end = config.t_end;
  so.workers = options.workers;
  const auto report = run_verification_suite(flow, profiles, so);

  std::string csv = "name,n,residual,tolerance,passed,negative_control\n";
  for (const auto& r : report.records) {
    csv += r.name + ',' + std::to_string(r.n) + ',' + format_double(r.residual) + ',' + format_double(r.tolerance) +
           ',' + (r.passed ? "pass" : "fail") + ',' + (r.negative_control ? "1" : "0") + '\n';
    char line[160];
    std::snprintf(line, sizeof line, "%-40s N=%-4zu residual=%.3e tol=%.3e %s", r.name.c_str(), r.n, r.residual,
                  r.tolerance, r.passed ? "PASS" : "FAIL");
    out << line << '\n';
  }
  const fs::path dir = resolve_output_dir(options, config);
  fs::create_directories(dir);
  write_text(dir / "verification_report.csv", csv);
  const bool ok = report.all_passed();
  out << (ok ? "all checks passed" : "verification FAILED") << '\n';
  return ok ? kExitOk : kExitVerificationFailed;
}

int cmd_compare(const fs::path& run_dir, const std::vector<double>& times, unsigned workers, std::ostream& out,
                std::ostream&) {
  const Manifest manifest = load_manifest(run_dir / "manifest.cfg");
  auto solution = build_solution(manifest.config);
  if (manifest.derived.velocities.size() != solution.mode_count()) {
    throw ConfigError("derived.velocities", "expected " + std::to_string(solution.mode_count()) + " values");
  }
  solution = solution.with_velocities(manifest.derived.velocities);

  std::map<double, fs::path> stored;
  const fs::path snapshots = run_dir / "snapshots";
  if (fs::is_directory(snapshots)) {
    for (const auto& entry : fs::directory_iterator(snapshots)) {
      if (entry.path().extension() != ".eqpf") continue;
      stored.emplace(read_field(entry.path()).t, entry.path());
    }
  }

  std::vector<fs::path> selected;
  if (times.empty()) {
    for (const auto& [t, path] : stored) selected.push_back(path);
  } else {
    for (double t : times) {
      const fs::path* match = nullptr;
      for (const auto& [ts, path] : stored) {
        if (std::abs(ts - t) <= 1e-9 * std::max(1.0, std::abs(t))) match = &path;
      }
      if (!match) throw ConfigError("times", "no snapshot at t = " + format_double(t));
      selected.push_back(*match);
    }
  }

  // The last column measures the error against the traveling part alone,
  // which the background would otherwise dwarf.
  std::string csv = "t,l2_err_vs_analytic,linf_err_vs_analytic,linf_err_vs_traveling\n";
  for (const auto& path : selected) {
    const auto dump = read_field(path);
    const auto& grid = dump.field.grid();
    const auto e = evolution_error(solution, dump.field, dump.t, workers);
    ScalarField traveling(grid);
    for (std::size_t k = 0; k < solution.mode_count(); ++k) traveling += solution.traveling_vorticity(k, dump.t, grid);
    const double scale = traveling.max_abs();
    const double abs_err = (dump.field - solution.vorticity(dump.t, grid, workers)).max_abs();
    const double rel = scale > 0.0 ? abs_err / scale : abs_err;
    csv += format_double(dump.t) + ',' + format_double(e.l2) + ',' + format_double(e.linf) + ',' +
           format_double(rel) + '\n';
  }
  write_text(run_dir / "compare.csv", csv);
  out << csv;
  return kExitOk;
}

}  // namespace eqp::cli
