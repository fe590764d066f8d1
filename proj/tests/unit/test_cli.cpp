#include <doctest.h>

#include <sys/wait.h>

#include <cmath>
#include <cstdlib>
#include <cstring>
#include <unistd.h>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <sstream>

#include "cli/commands.hpp"
#include "cli/field_io.hpp"
#include "cli/run_config.hpp"

using namespace eqp;
using namespace eqp::cli;
namespace fs = std::filesystem;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int counter = 0;
    path = fs::temp_directory_path() /
           ("eqp_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(counter++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() { fs::remove_all(path); }
};

std::string slurp(const fs::path& p) {
  std::ifstream is(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(is), std::istreambuf_iterator<char>()};
}

void spit(const fs::path& p, const std::string& text) { std::ofstream(p) << text; }

int run_cli(const std::string& args, const fs::path& log) {
  const std::string cmd = std::string(EQP_CLI_EXE) + " " + args + " > " + log.string() + " 2>&1";
  const int status = std::system(cmd.c_str());
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

/// Default layout on a small grid and short horizon.
RunConfig small_config() {
  RunConfig c = default_config();
  c.grid = 64;
  c.t_end = 0.01;
  c.snapshot_stride = 5;
  return c;
}

CommandOptions options_for(const fs::path& cfg, const fs::path& out) {
  CommandOptions o;
  o.config = cfg;
  o.out = out;
  return o;
}

}  // namespace

TEST_CASE("config round trip is lossless") {
  auto c = default_config();
  c.dt = 0.1 + 0.2;
  c.cfl_cap = 1.0 / 3.0;
  c.output_dir = "runs/a";
  c.profiles[1].amplitude = -std::nextafter(0.4, 1.0);
  const auto text = serialize_config(c);
  CHECK(parse_config(text) == c);
  CHECK(serialize_config(parse_config(text)) == text);
}

TEST_CASE("config parser accepts comments, blank lines and spacing") {
  const auto c = parse_config(
      "# comment\n"
      "grid=32   # trailing\n"
      "  dt =  0.01\n"
      "\n"
      "gap_amplitudes = 1 , -1\n"
      "[strip]\n a = 0.5\nb = 2.5\n"
      "[ strip ]\na = 3.5\nb = 5.5\n");
  CHECK(c.grid == 32);
  CHECK(c.dt == 0.01);
  CHECK(c.gap_amplitudes == std::vector<double>{1.0, -1.0});
  REQUIRE(c.strips.size() == 2);
  CHECK(c.strips[1].b == 5.5);
  CHECK(c.profiles.empty());
}

TEST_CASE("config errors carry key paths") {
  const auto key_of = [](const std::string& text) {
    try {
      parse_config(text);
    } catch (const ConfigError& e) {
      return e.key_path();
    }
    return std::string("<none>");
  };
  CHECK(key_of("grid = 64\nfoo = 1\n") == "foo");
  CHECK(key_of("dt = abc\n") == "dt");
  CHECK(key_of("dt = 1\ndt = 2\n") == "dt");
  CHECK(key_of("[strip]\na = 1\n") == "strip[0].b");
  CHECK(key_of("[strip]\na = 1\nb = 2\n[strip]\na = 3\nb = x\n") == "strip[1].b");
  CHECK(key_of("[profile]\nx = 1\ny = 1\nr_max = 0.1\n") == "profile[0].amplitude");
  CHECK(key_of("gap_amplitudes = 1, zz\n") == "gap_amplitudes[1]");
  CHECK(key_of("[bogus]\n") == "line 1");
  CHECK(key_of("grid = -4\n") == "grid");
  CHECK(key_of("dt = inf\n") == "dt");
}

TEST_CASE("building reports precondition failures by key") {
  auto c = default_config();
  c.profiles[1].r_max = 1.5;
  CHECK_THROWS_WITH_AS(build_solution(c), doctest::Contains("profile[1].r_max"), ConfigError);
  c = default_config();
  c.profiles[0].x = 3.0;
  CHECK_THROWS_WITH_AS(build_solution(c), doctest::Contains("profile[0].x"), ConfigError);
  c = default_config();
  c.profiles.pop_back();
  CHECK_THROWS_AS(build_solution(c), ConfigError);
  c = default_config();
  c.gap_amplitudes = {1.0};
  CHECK_THROWS_WITH_AS(build_solution(c), doctest::Contains("gap_amplitudes"), ConfigError);
  c = default_config();
  c.profiles[0].r_max = -1.0;
  CHECK_THROWS_WITH_AS(build_solution(c), doctest::Contains("profile[0]"), ConfigError);
}

TEST_CASE("field dump layout is bit exact") {
  const TorusGrid g(16);
  const auto f = ScalarField::sample(g, [](double x, double y) { return std::sin(x) + 0.25 * y; });
  const auto bytes = encode_field(f, 0.125);
  REQUIRE(bytes.size() == 20 + 8 * 256);
  CHECK(bytes.substr(0, 4) == "EQPF");
  CHECK(bytes.substr(4, 4) == std::string("\x01\x00\x00\x00", 4));
  CHECK(bytes.substr(8, 4) == std::string("\x10\x00\x00\x00", 4));
  // 0.125 = 0x3FC0000000000000
  CHECK(bytes.substr(12, 8) == std::string("\x00\x00\x00\x00\x00\x00\xC0\x3F", 8));
  // Second value is (i = 0, j = 1).
  double v = 0.0;
  std::uint64_t u = 0;
  for (int b = 7; b >= 0; --b) u = (u << 8) | static_cast<unsigned char>(bytes[28 + b]);
  std::memcpy(&v, &u, 8);
  CHECK(v == f(0, 1));

  const auto back = decode_field(bytes);
  CHECK(back.t == 0.125);
  CHECK(std::equal(back.field.values().begin(), back.field.values().end(), f.values().begin()));

  CHECK_THROWS(decode_field("EQPX" + bytes.substr(4)));
  CHECK_THROWS(decode_field(bytes.substr(0, bytes.size() - 1)));
  auto wrong_version = bytes;
  wrong_version[4] = 2;
  CHECK_THROWS(decode_field(wrong_version));
}

TEST_CASE("build writes two fields and a manifest that re-parses to the resolved config") {
  TempDir tmp;
  const auto cfg = tmp.path / "run.cfg";
  spit(cfg, serialize_config(small_config()));
  std::ostringstream out;
  std::ostringstream err;
  const auto opts = options_for(cfg, tmp.path / "b");
  REQUIRE(cmd_build(opts, out, err) == kExitOk);
  CHECK(fs::exists(tmp.path / "b" / "omega_init.eqpf"));
  CHECK(fs::exists(tmp.path / "b" / "psi_init.eqpf"));
  const auto manifest = load_manifest(tmp.path / "b" / "manifest.cfg");
  CHECK(manifest.config == resolve_config(opts));
  REQUIRE(manifest.derived.velocities.size() == 2);
  CHECK(manifest.derived.velocities[0] == build_solution(manifest.config).velocities()[0]);
  CHECK(manifest.derived.commensurate_pairs.size() == 1);
  CHECK(manifest.derived.workers == 1);
  CHECK(read_field(tmp.path / "b" / "omega_init.eqpf").field.grid().n() == 64);
}

TEST_CASE("build with no profiles writes the pure shear fields") {
  TempDir tmp;
  auto c = small_config();
  c.profiles.clear();
  spit(tmp.path / "k0.cfg", serialize_config(c));
  std::ostringstream out, err;
  REQUIRE(cmd_build(options_for(tmp.path / "k0.cfg", tmp.path / "o"), out, err) == kExitOk);
  const auto w = read_field(tmp.path / "o" / "omega_init.eqpf");
  const auto psi = read_field(tmp.path / "o" / "psi_init.eqpf");
  const auto flow = build_flow(c);
  const TorusGrid g(64);
  for (std::size_t i = 0; i < 64; ++i) {
    for (std::size_t j = 0; j < 64; j += 7) {
      CHECK(w.field(i, j) == flow.vorticity(g.node(i)));
      CHECK(psi.field(i, j) == flow.stream(g.node(i)));
    }
  }
}

TEST_CASE("exit codes of the executable") {
  TempDir tmp;
  const auto log = tmp.path / "log.txt";

  spit(tmp.path / "overlap.cfg", "gap_amplitudes = 1, -1\n[strip]\na = 1\nb = 2\n[strip]\na = 1.5\nb = 3\n");
  CHECK(run_cli("build --config " + (tmp.path / "overlap.cfg").string() + " --out " + (tmp.path / "o1").string(),
                log) == 2);
  CHECK(slurp(log).find("strips") != std::string::npos);

  spit(tmp.path / "small.cfg", serialize_config(small_config()));
  const std::string small = " --config " + (tmp.path / "small.cfg").string();
  CHECK(run_cli("run" + small + " --out " + (tmp.path / "cfl").string() + " --dt 0.5", log) == 2);
  CHECK(slurp(log).find("dt") != std::string::npos);

  auto big = small_config();
  big.profiles[0].r_max = 0.9;
  spit(tmp.path / "big.cfg", serialize_config(big));
  CHECK(run_cli("verify --config " + (tmp.path / "big.cfg").string() + " --out " + (tmp.path / "v").string(), log) ==
        1);
  CHECK(slurp(tmp.path / "v" / "verification_report.csv").find("support_fits[0],64,") != std::string::npos);

  CHECK(run_cli("run" + small + " --out " + (tmp.path / "r").string() + " --t-end 0", log) == 0);
  CHECK(run_cli("bogus", log) == 2);
  CHECK(run_cli("run --config " + (tmp.path / "missing.cfg").string(), log) == 2);
  CHECK(run_cli("run" + small + " --grid 17 --out " + (tmp.path / "g").string(), log) == 2);
}

TEST_CASE("EQP_OUT is the default output root") {
  TempDir tmp;
  spit(tmp.path / "small.cfg", serialize_config(small_config()));
  const std::string cmd = "EQP_OUT=" + (tmp.path / "env").string() + " " + EQP_CLI_EXE + " build --config " +
                          (tmp.path / "small.cfg").string() + " > /dev/null 2>&1";
  CHECK(std::system(cmd.c_str()) == 0);
  CHECK(fs::exists(tmp.path / "env" / "manifest.cfg"));
}

TEST_CASE("run with t_end = 0 writes one diagnostics row") {
  TempDir tmp;
  auto c = small_config();
  c.t_end = 0.0;
  spit(tmp.path / "c.cfg", serialize_config(c));
  std::ostringstream out, err;
  REQUIRE(cmd_run(options_for(tmp.path / "c.cfg", tmp.path / "r"), out, err) == kExitOk);
  std::ifstream csv(tmp.path / "r" / "diagnostics.csv");
  std::string header;
  std::getline(csv, header);
  CHECK(header == "t,energy,enstrophy,casimir3,mean_omega,max_velocity,l2_err_vs_analytic,linf_err_vs_analytic");
  int rows = 0;
  for (std::string line; std::getline(csv, line);) ++rows;
  CHECK(rows == 1);
}

TEST_CASE("run logs progress, reports the final error and supports compare") {
  TempDir tmp;
  spit(tmp.path / "c.cfg", serialize_config(small_config()));
  std::ostringstream out, err;
  const auto dir = tmp.path / "r";
  REQUIRE(cmd_run(options_for(tmp.path / "c.cfg", dir), out, err) == kExitOk);
  CHECK(out.str().find("l2_err_vs_analytic=") != std::string::npos);

  std::istringstream log(err.str());
  double last = -1.0;
  int lines = 0;
  for (std::string line; std::getline(log, line);) {
    if (line.rfind("[", 0) != 0) continue;
    const double secs = std::stod(line.substr(1));
    CHECK(secs >= last);
    last = secs;
    ++lines;
  }
  CHECK(lines == 3);

  std::vector<fs::path> snaps;
  for (const auto& e : fs::directory_iterator(dir / "snapshots")) snaps.push_back(e.path());
  CHECK(snaps.size() == 3);

  std::ostringstream cmp;
  REQUIRE(cmd_compare(dir, {0.0}, 1, cmp, err) == kExitOk);
  CHECK(cmp.str() == "t,l2_err_vs_analytic,linf_err_vs_analytic,linf_err_vs_traveling\n0,0,0,0\n");

  std::ostringstream all;
  REQUIRE(cmd_compare(dir, {}, 1, all, err) == kExitOk);
  std::istringstream rows(all.str());
  std::string line;
  std::getline(rows, line);
  int count = 0;
  while (std::getline(rows, line)) {
    const double l2 = std::stod(line.substr(line.find(',') + 1));
    CHECK(l2 < 1e-2);
    ++count;
  }
  CHECK(count == 3);

  CHECK_THROWS_WITH_AS(cmd_compare(dir, {0.5}, 1, cmp, err), doctest::Contains("t = 0.5"), ConfigError);
}

TEST_CASE("tampered manifest velocity gives order-one errors") {
  TempDir tmp;
  auto c = small_config();
  c.grid = 192;
  c.t_end = 0.05;
  c.snapshot_stride = 50;
  spit(tmp.path / "c.cfg", serialize_config(c));
  std::ostringstream out, err;
  const auto dir = tmp.path / "r";
  REQUIRE(cmd_run(options_for(tmp.path / "c.cfg", dir), out, err) == kExitOk);

  auto m = load_manifest(dir / "manifest.cfg");
  std::ostringstream honest;
  REQUIRE(cmd_compare(dir, {0.05}, 1, honest, err) == kExitOk);
  for (auto& v : m.derived.velocities) v = -v;
  spit(dir / "manifest.cfg", serialize_manifest(m));
  std::ostringstream tampered;
  REQUIRE(cmd_compare(dir, {0.05}, 1, tampered, err) == kExitOk);

  const auto linf = [](const std::string& csv) {
    const auto row = csv.substr(csv.find('\n') + 1);
    return std::stod(row.substr(row.rfind(',') + 1));
  };
  CHECK(linf(honest.str()) < 1e-4);
  CHECK(linf(tampered.str()) > 0.5);
}

TEST_CASE("repeated runs produce bitwise identical dumps") {
  TempDir tmp;
  spit(tmp.path / "c.cfg", serialize_config(small_config()));
  for (unsigned workers : {1u, 3u}) {
    std::ostringstream out, err;
    auto a = options_for(tmp.path / "c.cfg", tmp.path / ("a" + std::to_string(workers)));
    auto b = options_for(tmp.path / "c.cfg", tmp.path / ("b" + std::to_string(workers)));
    a.workers = b.workers = workers;
    REQUIRE(cmd_run(a, out, err) == kExitOk);
    REQUIRE(cmd_run(b, out, err) == kExitOk);
    for (const auto& e : fs::directory_iterator(*a.out / "snapshots")) {
      CHECK(slurp(e.path()) == slurp(*b.out / "snapshots" / e.path().filename()));
    }
  }
  for (const auto& e : fs::directory_iterator(tmp.path / "a1" / "snapshots")) {
    CHECK(slurp(e.path()) == slurp(tmp.path / "a3" / "snapshots" / e.path().filename()));
  }
}

TEST_CASE("verify at N = 64 still reports every residual") {
  TempDir tmp;
  spit(tmp.path / "c.cfg", serialize_config(small_config()));
  std::ostringstream out, err;
  cmd_verify(options_for(tmp.path / "c.cfg", tmp.path / "v"), out, err);
  const auto csv = slurp(tmp.path / "v" / "verification_report.csv");
  CHECK(csv.rfind("name,n,residual,tolerance,passed,negative_control\n", 0) == 0);
  CHECK(csv.find("pde_residual") != std::string::npos);
  CHECK(csv.find("quasi_period[1],64,") != std::string::npos);
}

TEST_CASE("overrides and output resolution") {
  CommandOptions o;
  o.grid = 128;
  o.dt = 5e-4;
  o.t_end = 0.3;
  o.snapshot_stride = 7;
  const auto c = resolve_config(o);
  CHECK(c.grid == 128);
  CHECK(c.dt == 5e-4);
  CHECK(c.t_end == 0.3);
  CHECK(c.snapshot_stride == 7);
  CHECK(c.strips == default_config().strips);
  CHECK(snapshot_name(42) == "omega_00000042.eqpf");
  o.out = "x/y";
  CHECK(resolve_output_dir(o, c) == fs::path("x/y"));
}
