// Experiment runner: convergence sweeps, certified Sobol tables, and
// offline bound-artifact training/evaluation on the built-in benchmarks.

#include <CLI11.hpp>
#include <fstream>
#include <iostream>
#include <sstream>

#include "rbbound/experiment.hpp"

namespace {

struct CommonArgs {
  std::string config_path;
  std::string out_path;
  std::vector<std::string> overrides;
};

void add_common(CLI::App* cmd, CommonArgs& args) {
  cmd->add_option("--config", args.config_path, "flat key=value config file");
  cmd->add_option("--out", args.out_path, "output path (default: stdout)");
  cmd->add_option("--override", args.overrides,
                  "config override, key=value (repeatable)");
  cmd->allow_extras();
}

rb::ExperimentConfig build_config(const CLI::App* cmd, const CommonArgs& args) {
  rb::ExperimentConfig cfg;
  if (!args.config_path.empty()) cfg = rb::parse_config_file(args.config_path);
  auto apply_kv = [&cfg](const std::string& kv) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos)
      throw rb::ConfigError("override must be key=value: " + kv);
    rb::apply_override(cfg, kv.substr(0, eq), kv.substr(eq + 1));
  };
  for (const std::string& kv : args.overrides) apply_kv(kv);
  // Bare --key=value extras are also accepted as overrides.
  for (std::string extra : cmd->remaining()) {
    if (extra.rfind("--", 0) == 0) extra = extra.substr(2);
    apply_kv(extra);
  }
  return cfg;
}

int run_to_stream(const CommonArgs& args,
                  const std::function<void(std::ostream&)>& fn) {
  if (args.out_path.empty()) {
    fn(std::cout);
    return 0;
  }
  std::ofstream os(args.out_path);
  if (!os) {
    std::cerr << "error: cannot open output file " << args.out_path << "\n";
    return 2;
  }
  fn(os);
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"certified reduced-basis error bounds and sensitivity analysis"};
  app.require_subcommand(1);

  CommonArgs conv_args, sobol_args, train_args, eval_args;

  CLI::App* conv = app.add_subcommand(
      "convergence", "sweep basis sizes, write the bound-comparison CSV");
  add_common(conv, conv_args);

  CLI::App* sobol = app.add_subcommand(
      "sobol", "certified Sobol index table for every input parameter");
  add_common(sobol, sobol_args);

  CLI::App* train = app.add_subcommand(
      "train", "train and persist a goal-oriented bound artifact");
  add_common(train, train_args);
  bool corrected = false;
  train->add_flag("--corrected", corrected, "train the corrected-output bound");

  CLI::App* eval = app.add_subcommand(
      "eval", "load an artifact and bound the output error at a single mu");
  add_common(eval, eval_args);
  std::string artifact_path, mu_str;
  double risk = 1e-4;
  eval->add_option("--artifact", artifact_path, "artifact path written by train")
      ->required();
  eval->add_option("--mu", mu_str, "parameter point, comma separated")
      ->required();
  eval->add_option("--risk", risk, "bound risk alpha");

  // Seed flags mirror the config keys on every subcommand.
  for (auto* cmd : {conv, sobol, train, eval}) {
    CommonArgs* args = cmd == conv    ? &conv_args
                       : cmd == sobol ? &sobol_args
                       : cmd == train ? &train_args
                                      : &eval_args;
    cmd->add_option_function<std::uint64_t>(
        "--seed-snapshot", [args](std::uint64_t v) {
          args->overrides.push_back("seed_snapshot=" + std::to_string(v));
        });
    cmd->add_option_function<std::uint64_t>(
        "--seed-train", [args](std::uint64_t v) {
          args->overrides.push_back("seed_train=" + std::to_string(v));
        });
    cmd->add_option_function<std::uint64_t>(
        "--seed-eval", [args](std::uint64_t v) {
          args->overrides.push_back("seed_eval=" + std::to_string(v));
        });
    if (cmd != eval)
      cmd->add_option_function<double>("--risk", [args](double v) {
        args->overrides.push_back("alpha=" + std::to_string(v));
      });
  }

  CLI11_PARSE(app, argc, argv);

  try {
    if (conv->parsed()) {
      const rb::ExperimentConfig cfg = build_config(conv, conv_args);
      return run_to_stream(conv_args,
                           [&](std::ostream& os) { rb::run_convergence(cfg, os); });
    }
    if (sobol->parsed()) {
      const rb::ExperimentConfig cfg = build_config(sobol, sobol_args);
      return run_to_stream(sobol_args,
                           [&](std::ostream& os) { rb::run_sobol(cfg, os); });
    }
    if (train->parsed()) {
      rb::ExperimentConfig cfg = build_config(train, train_args);
      if (corrected) cfg.corrected = true;
      if (train_args.out_path.empty()) {
        std::cerr << "error: train requires --out PATH\n";
        return 2;
      }
      const rb::Artifact art = rb::train_artifact(cfg);
      rb::save_artifact(train_args.out_path, art);
      std::cout << "artifact written to " << train_args.out_path
                << " (basis size " << art.basis_size
                << ", t2_hat=" << art.data.t2_hat << ")\n";
      return 0;
    }
    if (eval->parsed()) {
      const rb::Artifact art = rb::load_artifact(artifact_path);
      std::vector<double> coords;
      std::stringstream ss(mu_str);
      std::string tok;
      while (std::getline(ss, tok, ',')) coords.push_back(std::stod(tok));
      rb::ParameterPoint mu{Eigen::Map<rb::Vector>(
          coords.data(), static_cast<rb::Index>(coords.size()))};
      const double t1v = rb::t1(art.data, art.rm, mu);
      const double b = rb::bound(art.data, art.rm, mu, risk);
      const rb::ReducedSolution sol = rb::solve_reduced(art.rm, mu);
      std::cout << "s_tilde=" << rb::reduced_output(art.rm, sol) << "\n";
      if (art.rm.has_dual)
        std::cout << "s_tilde_corrected=" << rb::corrected_output(art.rm, mu)
                  << "\n";
      std::cout << "t1=" << t1v << "\nt2_hat=" << art.data.t2_hat
                << " (se=" << art.data.t2_se << ")\nrisk=" << risk
                << "\nbound=" << b << "\n";
      return 0;
    }
  } catch (const rb::ConfigError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const rb::ContractError& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "numeric failure: " << e.what() << "\n";
    return 3;
  }
  return 0;
}
