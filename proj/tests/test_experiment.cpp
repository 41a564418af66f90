#include <doctest.h>

#include <cstdio>
#include <fstream>
#include <sstream>

#include "rbbound/experiment.hpp"

using namespace rb;

namespace {

ExperimentConfig coarse_transport() {
  ExperimentConfig cfg;
  cfg.dx = 0.2;
  cfg.dt = 0.2;
  cfg.basis_sizes = {2, 4};
  cfg.pod_snapshots = 15;
  cfg.bound_snapshots = 20;
  cfg.N = 5;
  cfg.eval_sample = 10;
  return cfg;
}

}  // namespace

TEST_CASE("config file parsing with comments and overrides") {
  const std::string path = "cfg_parse_test.txt";
  {
    std::ofstream f(path);
    f << "# a comment\n\nbenchmark=transport\ndx=0.2\ndt=0.2\n"
      << "basis_sizes=2,4,6\nalpha=0.001\nseed_train=99\ncorrected=true\n";
  }
  auto cfg = parse_config_file(path);
  std::remove(path.c_str());
  CHECK(cfg.benchmark == "transport");
  CHECK(cfg.dx == 0.2);
  CHECK(cfg.basis_sizes == std::vector<int>{2, 4, 6});
  CHECK(cfg.alpha == 0.001);
  CHECK(cfg.seed_train == 99);
  CHECK(cfg.corrected);

  apply_override(cfg, "eval_sample", "33");
  CHECK(cfg.eval_sample == 33);
  CHECK_THROWS_AS(apply_override(cfg, "no_such_key", "1"), ConfigError);
  CHECK_THROWS_AS(apply_override(cfg, "eval_sample", "abc"), ConfigError);
}

TEST_CASE("effective truncation defaults per benchmark") {
  ExperimentConfig cfg;
  CHECK(cfg.effective_N() == 10);
  cfg.benchmark = "diffusion";
  CHECK(cfg.effective_N() == 20);
  cfg.N = 7;
  CHECK(cfg.effective_N() == 7);
}

TEST_CASE("build_model dispatches on the benchmark name") {
  ExperimentConfig cfg;
  cfg.dx = 0.2;
  cfg.dt = 0.2;
  CHECK(cfg.build_model().dim_x == 36);
  cfg.benchmark = "diffusion";
  cfg.blocks = 3;
  cfg.grid_n = 30;
  CHECK(cfg.build_model().dim_x == 30);
  cfg.benchmark = "unknown";
  CHECK_THROWS_AS(cfg.build_model(), ConfigError);
}

TEST_CASE("convergence CSV embeds the config and repeats bitwise") {
  auto cfg = coarse_transport();
  std::ostringstream a, b;
  run_convergence(cfg, a);
  run_convergence(cfg, b);
  CHECK(a.str() == b.str());
  CHECK(a.str().find("# benchmark=transport") != std::string::npos);
  CHECK(a.str().find("# seed_train=2") != std::string::npos);
  CHECK(a.str().find("basis_size,equivalent_size_dual,") != std::string::npos);

  // one header line, one column line, one row per basis size
  int rows = 0;
  std::istringstream in(a.str());
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == 1 + static_cast<int>(cfg.basis_sizes.size()));
}

TEST_CASE("different seeds change the convergence output") {
  auto cfg = coarse_transport();
  std::ostringstream a, b;
  run_convergence(cfg, a);
  cfg.seed_eval = 77;
  run_convergence(cfg, b);
  CHECK(a.str() != b.str());
}

TEST_CASE("sobol runs on the diffusion benchmark") {
  ExperimentConfig cfg;
  cfg.benchmark = "diffusion";
  cfg.blocks = 3;
  cfg.grid_n = 30;
  cfg.pod_snapshots = 20;
  cfg.bound_snapshots = 20;
  cfg.sobol_M = 60;
  cfg.sobol_B = 100;
  cfg.sobol_basis = 4;
  std::ostringstream out;
  run_sobol(cfg, out);
  int rows = 0;
  std::istringstream in(out.str());
  std::string line;
  while (std::getline(in, line))
    if (!line.empty() && line[0] != '#') ++rows;
  CHECK(rows == 1 + cfg.blocks);
  CHECK(out.str().find("input_index,s_hat,meta_lo,meta_hi") !=
        std::string::npos);
}

TEST_CASE("sobol rejects single-parameter benchmarks") {
  ExperimentConfig cfg;  // transport: p = 1
  cfg.dx = 0.2;
  cfg.dt = 0.2;
  std::ostringstream out;
  CHECK_THROWS_AS(run_sobol(cfg, out), ConfigError);
}

TEST_CASE("artifact save and load round trip") {
  auto cfg = coarse_transport();
  cfg.basis_sizes = {4};
  auto art = train_artifact(cfg);
  const std::string path = "artifact_roundtrip.bin";
  save_artifact(path, art);
  auto back = load_artifact(path);
  std::remove(path.c_str());
  std::remove((path + ".bound").c_str());

  CHECK(back.basis_size == art.basis_size);
  CHECK(back.config.benchmark == art.config.benchmark);
  CHECK(back.data.t2_hat == art.data.t2_hat);
  CHECK((back.rm.basis.Z.array() == art.rm.basis.Z.array()).all());

  // the rebound model evaluates identically
  auto model = back.config.build_model();
  auto mu = model.box.sample_many(1, 5)[0];
  const double s1 = reduced_output(art.rm, solve_reduced(art.rm, mu));
  const double s2 = reduced_output(back.rm, solve_reduced(back.rm, mu));
  CHECK(s1 == s2);
  CHECK(rb::bound(art.data, art.rm, mu, 1e-4) ==
        rb::bound(back.data, back.rm, mu, 1e-4));
}
