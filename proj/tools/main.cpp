#include <iostream>

#include <CLI11.hpp>

#include "cli/commands.hpp"

int main(int argc, char** argv) {
  using namespace eqp::cli;
  CLI::App app{"Quasi-periodic Euler solutions on the torus: build, evolve, verify"};
  app.require_subcommand(1);

  CommandOptions opts;
  std::size_t grid = 0;
  double dt = 0.0;
  double t_end = 0.0;
  std::size_t stride = 0;
  std::string config_path;
  std::string out_dir;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "Config file (built-in default when omitted)");
    sub->add_option("--out", out_dir, "Output directory (default $EQP_OUT)");
    sub->add_option("--grid", grid, "Grid size N override");
    sub->add_option("--dt", dt, "Time step override");
    sub->add_option("--t-end", t_end, "Final time override");
    sub->add_option("--snapshot-stride", stride, "Steps between field dumps");
    sub->add_flag("--allow-cfl-violation", opts.allow_cfl_violation, "Skip the initial CFL check");
    sub->add_option("--workers", opts.workers, "Worker threads")->check(CLI::PositiveNumber);
  };
  auto* build = app.add_subcommand("build", "Write initial fields and a manifest");
  auto* run = app.add_subcommand("run", "Evolve with RK4, dump snapshots and diagnostics");
  auto* verify = app.add_subcommand("verify", "Run every verification check");
  add_common(build);
  add_common(run);
  add_common(verify);

  auto* compare = app.add_subcommand("compare", "Compare stored snapshots with the analytic solution");
  std::string run_dir;
  std::vector<double> times;
  compare->add_option("--run-dir", run_dir, "Directory written by 'run'")->required();
  compare->add_option("--times", times, "Snapshot times (default: all)")->delimiter(',');
  compare->add_option("--workers", opts.workers, "Worker threads")->check(CLI::PositiveNumber);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitConfigError;
  }

  auto set = [](auto& target, auto* sub, const char* name, auto value) {
    if (sub->count(name)) target = value;
  };
  for (auto* sub : {build, run, verify}) {
    if (!sub->parsed()) continue;
    if (sub->count("--config")) opts.config = config_path;
    if (sub->count("--out")) opts.out = out_dir;
    set(opts.grid, sub, "--grid", grid);
    set(opts.dt, sub, "--dt", dt);
    set(opts.t_end, sub, "--t-end", t_end);
    set(opts.snapshot_stride, sub, "--snapshot-stride", stride);
  }

  return run_command(std::cerr, [&] {
    if (build->parsed()) return cmd_build(opts, std::cout, std::cerr);
    if (run->parsed()) return cmd_run(opts, std::cout, std::cerr);
    if (verify->parsed()) return cmd_verify(opts, std::cout, std::cerr);
    return cmd_compare(run_dir, times, opts.workers, std::cout, std::cerr);
  });
}
