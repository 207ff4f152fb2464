#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "shearlab/checkpoint.hpp"
#include "shearlab/config.hpp"
#include "shearlab/errors.hpp"
#include "shearlab/io.hpp"
#include "shearlab/kelvin.hpp"
#include "shearlab/plots.hpp"
#include "shearlab/run.hpp"
#include "support/oracles.hpp"

namespace fs = std::filesystem;
using namespace shearlab;
using doctest::Approx;

namespace {

fs::path scratch(const std::string& name) {
  auto p = fs::temp_directory_path() / ("shearlab_test_" + name);
  fs::remove_all(p);
  return p;
}

}  // namespace

TEST_CASE("config parsing") {
  const auto cfg = parse_config(R"(
# comment
[grid]
nz = 16
nv = 128
[physics]
nu = 0.003
nonlinear = false
[sweep]
a_list = 0.02, 0.05,0.1
profiles = couette, gauss_bump
seeds = 1,2,3
)");
  CHECK(cfg.grid.nz == 16);
  CHECK(cfg.grid.lv == 32.0);
  CHECK(cfg.physics.nu == 0.003);
  CHECK_FALSE(cfg.physics.nonlinear);
  CHECK(cfg.sweep.a_list == std::vector<double>{0.02, 0.05, 0.1});
  CHECK(cfg.sweep.profiles == std::vector<std::string>{"couette", "gauss_bump"});
  CHECK(cfg.sweep.seeds.size() == 3);
  CHECK(cfg.resolved_t_final() == Approx(3.0 / std::cbrt(0.003)));
  CHECK(cfg.resolved_s() == 4.0);

  CHECK_THROWS_AS(parse_config("[grid]\nnzz = 4\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[grid]\nnz = four\n"), ValidationError);
  CHECK_THROWS_AS(parse_config("[bogus]\nx = 1\n"), ValidationError);
}

TEST_CASE("overrides and echo round trip") {
  RunConfig cfg;
  apply_override(cfg, "physics.nu=0.02");
  apply_override(cfg, "shear.profile=gauss_bump");
  apply_override(cfg, "shear.frame=general");
  apply_override(cfg, "sweep.nu_list=0.001,0.01");
  CHECK(cfg.physics.nu == 0.02);
  CHECK(cfg.general_frame());
  CHECK_THROWS_AS(apply_override(cfg, "physics.nu"), ValidationError);
  CHECK_THROWS_AS(apply_override(cfg, "physics.mu=1"), ValidationError);
  const auto text = to_ini(cfg);
  const auto back = parse_config(text);
  CHECK(to_ini(back) == text);
  CHECK(back.sweep.nu_list == cfg.sweep.nu_list);
}

TEST_CASE("config validation") {
  RunConfig c;
  c.grid.nz = 10 + 1;
  CHECK_THROWS_AS(c.validate(), ValidationError);
  c = RunConfig{};
  c.physics.nu = 0.0;
  CHECK_THROWS_AS(c.validate(), ValidationError);  // no default T without viscosity
  c.time.t_final = 1.0;
  CHECK_NOTHROW(c.validate());
  c.shear.profile = "gauss_bump";
  c.shear.frame = "couette";
  CHECK_THROWS_AS(c.validate(), ValidationError);
}

TEST_CASE("checkpoint round trip is bit exact") {
  const FrequencyGrid g(16, 64, 12.5);
  Checkpoint ck{g, 3e-3, 2.5, 17.25, Frame::general, oracle::random_field(g, 12, false)};
  ck.f.mode(1, 1) = {std::nextafter(1.0, 2.0), -0.0};
  const auto bytes = encode_checkpoint(ck);
  CHECK(bytes.size() == 8 + 4 * 3 + 8 * 4 + 4 + 16 * g.size());
  CHECK(bytes.substr(0, 8) == "SHLBCKPT");
  const auto back = decode_checkpoint(bytes);
  CHECK(back.grid == g);
  CHECK(back.nu == ck.nu);
  CHECK(back.regularity == ck.regularity);
  CHECK(back.t == ck.t);
  CHECK(back.frame == Frame::general);
  CHECK(encode_checkpoint(back) == bytes);
  CHECK(std::signbit(back.f.mode(1, 1).imag()));

  const auto dir = scratch("ckpt");
  const auto path = (dir / "a" / "ck.bin").string();
  write_checkpoint(path, ck);
  CHECK(encode_checkpoint(read_checkpoint(path)) == bytes);
  fs::remove_all(dir);

  CHECK_THROWS_AS(decode_checkpoint("NOTACKPT" + bytes.substr(8)), ValidationError);
  CHECK_THROWS_AS(decode_checkpoint(bytes.substr(0, bytes.size() - 3)), ValidationError);
  CHECK_THROWS_AS(decode_checkpoint(bytes + "x"), ValidationError);
}

TEST_CASE("csv and atomic writes") {
  const auto t = parse_csv("a,b\n1,2\n3,4.5\n");
  CHECK(t.header.size() == 2);
  CHECK(t.numbers("b") == std::vector<double>{2.0, 4.5});
  CHECK_THROWS_AS(t.column("c"), ValidationError);
  CHECK(to_csv(t) == "a,b\n1,2\n3,4.5\n");
  CHECK(std::stod(format_double(0.1)) == 0.1);

  const auto dir = scratch("io");
  const auto path = (dir / "x" / "f.txt").string();
  atomic_write(path, "one");
  atomic_write(path, "two");
  CHECK(read_file(path) == "two");
  std::size_t files = 0;
  for ([[maybe_unused]] const auto& e : fs::directory_iterator(dir / "x")) ++files;
  CHECK(files == 1);
  fs::remove_all(dir);
}

TEST_CASE("run_single") {
  SUBCASE("zero data is stable with an all-zero series") {
    const auto dir = scratch("run_zero");
    RunConfig cfg;
    cfg.grid = {16, 128, 16.0};
    cfg.data.eps = 0.0;
    cfg.data.width = 1.0;
    cfg.time.t_final = 1.0;
    const auto r = run_single(cfg, dir.string());
    CHECK(r.exit_code == kExitStable);
    for (const char* f : {"config.ini", "series.csv", "summary.json", "checkpoint.bin"}) {
      CHECK(fs::exists(dir / f));
    }
    const auto csv = read_csv((dir / "series.csv").string());
    for (double e : csv.numbers("E_A")) CHECK(e == 0.0);
    CHECK(to_ini(parse_config(read_file((dir / "config.ini").string()))) ==
          read_file((dir / "config.ini").string()));
    fs::remove_all(dir);
  }
  SUBCASE("tiny single mode matches the linear oracle") {
    const auto dir = scratch("run_single_mode");
    RunConfig cfg;
    cfg.grid = {16, 256, 32.0};
    cfg.data.kind = "single_mode";
    cfg.data.eps = 1e-6;
    cfg.time.t_final = 2.0 / std::cbrt(1e-2);
    cfg.output.plots = true;
    const auto r = run_single(cfg, dir.string());
    CHECK(r.exit_code == kExitStable);
    const auto ck = read_checkpoint((dir / "checkpoint.bin").string());
    CHECK(ck.t == Approx(cfg.time.t_final));
    const double amp = std::abs(ck.f.mode(1, 0)) / (1e-6 / std::sqrt(8.0));  // 2 (1+1)^N c^2 = eps^2
    CHECK(amp == Approx(std::abs(kelvin_evolve({1, 0.0, 1.0, 1e-2}, ck.t).omega_hat)).epsilon(1e-3));
    CHECK(fs::exists(dir / "plot_decay.py"));
    CHECK(fs::exists(dir / "plot_budget.py"));
    fs::remove_all(dir);
  }
  SUBCASE("band violation is rejected before any compute") {
    const auto dir = scratch("run_band");
    RunConfig cfg;
    cfg.data.k_max = 40;
    const auto r = run_single(cfg, dir.string());
    CHECK(r.exit_code == kExitValidation);
    CHECK(r.steps == 0);
    CHECK(r.frames.empty());
    fs::remove_all(dir);
  }
  SUBCASE("resolution exhaustion has its own code") {
    RunConfig cfg;
    cfg.grid = {16, 64, 16.0};
    cfg.data.width = 1.0;
    cfg.physics.nu = 0.0;
    cfg.time.t_final = 50.0;
    const auto r = simulate(cfg);
    CHECK(r.exit_code == kExitResolution);
    CHECK(r.message.find("shear-resolution exhausted") != std::string::npos);
  }
  SUBCASE("elliptic failure has its own code") {
    RunConfig cfg;
    cfg.grid = {16, 128, 16.0};
    cfg.data.width = 1.0;
    cfg.time.t_final = 0.5;
    cfg.shear.profile = "gauss_bump";
    cfg.shear.amplitude = 0.9;
    cfg.shear.delta_max = 1e9;
    const auto r = simulate(cfg);
    CHECK(r.exit_code == kExitElliptic);
  }
}

TEST_CASE("plot emission") {
  const auto dir = scratch("plots_empty");
  fs::create_directories(dir);
  CHECK_THROWS_WITH_AS(emit_plots(dir.string()), doctest::Contains("missing file"), ValidationError);
  atomic_write((dir / "series.csv").string(), "t,E_A\n0,1\n");
  CHECK_THROWS_AS(emit_plots(dir.string()), ValidationError);
  fs::remove_all(dir);
}
