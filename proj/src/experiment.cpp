#include "rbbound/experiment.hpp"

#include <cmath>
#include <fstream>
#include <iomanip>
#include <ostream>
#include <sstream>

#include "blob_io.hpp"
#include "rbbound/sensitivity.hpp"

namespace rb {

namespace {

std::string join_ints(const std::vector<int>& v) {
  std::ostringstream os;
  for (size_t i = 0; i < v.size(); ++i) os << (i ? "," : "") << v[i];
  return os.str();
}

std::vector<int> parse_int_list(const std::string& s) {
  std::vector<int> out;
  std::stringstream ss(s);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      out.push_back(std::stoi(tok));
    } catch (const std::exception&) {
      throw ConfigError("bad integer list entry: " + tok);
    }
  }
  if (out.empty()) throw ConfigError("empty integer list");
  return out;
}

bool parse_bool(const std::string& s) {
  if (s == "true" || s == "1" || s == "yes") return true;
  if (s == "false" || s == "0" || s == "no") return false;
  throw ConfigError("bad boolean value: " + s);
}

template <typename T>
T parse_num(const std::string& s) {
  std::istringstream is(s);
  T v;
  is >> v;
  if (is.fail() || !is.eof()) throw ConfigError("bad numeric value: " + s);
  return v;
}

void write_config_header(const ExperimentConfig& cfg, std::ostream& out) {
  for (const auto& [k, v] : cfg.to_map()) out << "# " << k << "=" << v << "\n";
}

std::string fmt(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

}  // namespace

int ExperimentConfig::effective_N() const {
  if (N) return *N;
  return benchmark == "diffusion" ? 20 : 10;
}

AffineModel ExperimentConfig::build_model() const {
  if (benchmark == "transport") {
    TransportConfig tc;
    tc.dx = dx;
    tc.dt = dt;
    return build_transport(tc);
  }
  if (benchmark == "diffusion") {
    return build_diffusion(DiffusionConfig(blocks, grid_n));
  }
  throw ConfigError("unknown benchmark: " + benchmark);
}

std::map<std::string, std::string> ExperimentConfig::to_map() const {
  std::map<std::string, std::string> m;
  m["benchmark"] = benchmark;
  m["dx"] = fmt(dx);
  m["dt"] = fmt(dt);
  m["blocks"] = std::to_string(blocks);
  m["grid_n"] = std::to_string(grid_n);
  m["basis_sizes"] = join_ints(basis_sizes);
  m["pod_snapshots"] = std::to_string(pod_snapshots);
  m["bound_snapshots"] = std::to_string(bound_snapshots);
  m["N"] = std::to_string(effective_N());
  m["partition_per_dim"] = std::to_string(partition_per_dim);
  m["alpha"] = fmt(alpha);
  m["eval_sample"] = std::to_string(eval_sample);
  m["corrected"] = corrected ? "true" : "false";
  m["t2_halved"] = t2_halved ? "true" : "false";
  m["seed_snapshot"] = std::to_string(seed_snapshot);
  m["seed_train"] = std::to_string(seed_train);
  m["seed_eval"] = std::to_string(seed_eval);
  m["sobol_M"] = std::to_string(sobol_M);
  m["sobol_B"] = std::to_string(sobol_B);
  m["sobol_alpha"] = fmt(sobol_alpha);
  m["sobol_alpha_as"] = fmt(sobol_alpha_as);
  m["sobol_basis"] = std::to_string(sobol_basis);
  m["sobol_eps_zero"] = sobol_eps_zero ? "true" : "false";
  return m;
}

void apply_override(ExperimentConfig& cfg, const std::string& key,
                    const std::string& value) {
  if (key == "benchmark")
    cfg.benchmark = value;
  else if (key == "dx")
    cfg.dx = parse_num<double>(value);
  else if (key == "dt")
    cfg.dt = parse_num<double>(value);
  else if (key == "blocks")
    cfg.blocks = parse_num<int>(value);
  else if (key == "grid_n")
    cfg.grid_n = parse_num<int>(value);
  else if (key == "basis_sizes")
    cfg.basis_sizes = parse_int_list(value);
  else if (key == "pod_snapshots")
    cfg.pod_snapshots = parse_num<int>(value);
  else if (key == "bound_snapshots")
    cfg.bound_snapshots = parse_num<int>(value);
  else if (key == "N")
    cfg.N = parse_num<int>(value);
  else if (key == "partition_per_dim")
    cfg.partition_per_dim = parse_num<int>(value);
  else if (key == "alpha")
    cfg.alpha = parse_num<double>(value);
  else if (key == "eval_sample")
    cfg.eval_sample = parse_num<int>(value);
  else if (key == "corrected")
    cfg.corrected = parse_bool(value);
  else if (key == "t2_halved")
    cfg.t2_halved = parse_bool(value);
  else if (key == "seed_snapshot")
    cfg.seed_snapshot = parse_num<std::uint64_t>(value);
  else if (key == "seed_train")
    cfg.seed_train = parse_num<std::uint64_t>(value);
  else if (key == "seed_eval")
    cfg.seed_eval = parse_num<std::uint64_t>(value);
  else if (key == "sobol_M")
    cfg.sobol_M = parse_num<int>(value);
  else if (key == "sobol_B")
    cfg.sobol_B = parse_num<int>(value);
  else if (key == "sobol_alpha")
    cfg.sobol_alpha = parse_num<double>(value);
  else if (key == "sobol_alpha_as")
    cfg.sobol_alpha_as = parse_num<double>(value);
  else if (key == "sobol_basis")
    cfg.sobol_basis = parse_num<int>(value);
  else if (key == "sobol_eps_zero")
    cfg.sobol_eps_zero = parse_bool(value);
  else
    throw ConfigError("unknown config key: " + key);

  if (cfg.alpha <= 0.0 || cfg.alpha >= 1.0)
    throw ConfigError("alpha must lie in (0, 1)");
}

ExperimentConfig parse_config_file(const std::string& path) {
  std::ifstream is(path);
  if (!is) throw ConfigError("cannot open config file: " + path);
  ExperimentConfig cfg;
  std::string line;
  int lineno = 0;
  while (std::getline(is, line)) {
    ++lineno;
    const auto first = line.find_first_not_of(" \t");
    if (first == std::string::npos || line[first] == '#') continue;
    const auto eq = line.find('=');
    if (eq == std::string::npos)
      throw ConfigError("config line " + std::to_string(lineno) +
                        ": expected key=value");
    auto trim = [](std::string s) {
      const auto a = s.find_first_not_of(" \t");
      const auto b = s.find_last_not_of(" \t\r");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    apply_override(cfg, trim(line.substr(0, eq)), trim(line.substr(eq + 1)));
  }
  return cfg;
}

void run_convergence(const ExperimentConfig& cfg, std::ostream& out) {
  const AffineModel model = cfg.build_model();
  const Partition partition =
      Partition::uniform_grid(model.box, cfg.partition_per_dim);

  // Snapshot solves (primal + adjoint from one factorization per mu).
  const std::vector<FullSample> snaps =
      draw_full_samples(model, cfg.pod_snapshots, cfg.seed_snapshot);
  std::vector<Vector> primal_snaps, dual_snaps;
  for (const FullSample& fs : snaps) {
    primal_snaps.push_back(fs.u);
    dual_snaps.push_back(fs.w);
  }

  // Training solves, shared by every basis size and both bound variants.
  const std::vector<FullSample> train_samples =
      draw_full_samples(model, cfg.bound_snapshots, cfg.seed_train);

  // Evaluation sample: truth, adjoint, and exact stability constants are
  // reduced-model independent, so compute them once.
  const std::vector<ParameterPoint> eval_mus =
      model.box.sample_many(cfg.eval_sample, cfg.seed_eval);
  std::vector<double> s_true(eval_mus.size()), alpha_mu(eval_mus.size());
  for (size_t j = 0; j < eval_mus.size(); ++j) {
    s_true[j] = model.l.dot(solve_full(model, eval_mus[j]).u);
    alpha_mu[j] = stability_constant(model, eval_mus[j]);
  }

  write_config_header(cfg, out);
  out << "basis_size,equivalent_size_dual,mean_true_err_uncorrected,"
         "mean_true_err_corrected,mean_lipschitz,mean_dual_based,"
         "mean_goal_uncorrected,mean_goal_corrected,t2_hat\n";

  for (int n : cfg.basis_sizes) {
    try {
      const ReducedBasis Z = pod_basis(primal_snaps, n);
      const ReducedBasis Zd = pod_basis(dual_snaps, n);
      const ReducedModel rm = project(model, Z, Zd);

      TrainOptions topts;
      topts.sample_size = cfg.bound_snapshots;
      topts.N = cfg.effective_N();
      topts.seed = cfg.seed_train;
      topts.t2_halved = cfg.t2_halved;
      topts.corrected = false;
      const GoalOrientedBoundData data_u =
          train_goal_oriented(model, rm, partition, topts, train_samples);
      topts.corrected = true;
      const GoalOrientedBoundData data_c =
          train_goal_oriented(model, rm, partition, topts, train_samples);

      double e_u = 0, e_c = 0, b_lip = 0, b_dual = 0, b_gu = 0, b_gc = 0;
      for (size_t j = 0; j < eval_mus.size(); ++j) {
        const ParameterPoint& mu = eval_mus[j];
        const ReducedSolution sol = solve_reduced(rm, mu);
        const double st = reduced_output(rm, sol);
        const double sc = corrected_output(rm, mu);
        e_u += std::abs(s_true[j] - st);
        e_c += std::abs(s_true[j] - sc);
        b_lip += lipschitz_bound(model, rm, mu, alpha_mu[j]);
        b_dual += dual_based_bound(model, rm, mu, alpha_mu[j]);
        b_gu += bound(data_u, rm, mu, cfg.alpha);
        b_gc += bound(data_c, rm, mu, cfg.alpha);
      }
      const double inv = 1.0 / static_cast<double>(eval_mus.size());
      out << n << "," << fmt(n * std::cbrt(2.0)) << "," << fmt(e_u * inv) << ","
          << fmt(e_c * inv) << "," << fmt(b_lip * inv) << ","
          << fmt(b_dual * inv) << "," << fmt(b_gu * inv) << ","
          << fmt(b_gc * inv) << "," << fmt(data_u.t2_hat) << "\n";
    } catch (const std::exception& e) {
      throw NumericError("convergence run failed at basis size " +
                         std::to_string(n) + ": " + e.what());
    }
  }
}

void run_sobol(const ExperimentConfig& cfg, std::ostream& out) {
  const AffineModel model = cfg.build_model();
  if (model.box.dim() < 2)
    throw ConfigError("run_sobol: benchmark must have at least 2 parameters");
  const Partition partition =
      Partition::uniform_grid(model.box, cfg.partition_per_dim);

  const std::vector<FullSample> snaps =
      draw_full_samples(model, cfg.pod_snapshots, cfg.seed_snapshot);
  std::vector<Vector> primal_snaps;
  for (const FullSample& fs : snaps) primal_snaps.push_back(fs.u);
  const ReducedBasis Z = pod_basis(primal_snaps, cfg.sobol_basis);
  const ReducedModel rm = project(model, Z);

  TrainOptions topts;
  topts.sample_size = cfg.bound_snapshots;
  topts.N = cfg.effective_N();
  topts.seed = cfg.seed_train;
  topts.t2_halved = cfg.t2_halved;
  topts.corrected = false;
  const GoalOrientedBoundData data =
      train_goal_oriented(model, rm, partition, topts);

  const auto out_fn = [&](const ParameterPoint& mu) {
    return reduced_output(rm, solve_reduced(rm, mu));
  };
  const auto eps_fn = [&](const ParameterPoint& mu) {
    return cfg.sobol_eps_zero ? 0.0 : bound(data, rm, mu, cfg.sobol_alpha);
  };

  write_config_header(cfg, out);
  out << "input_index,s_hat,meta_lo,meta_hi,combined_lo,combined_hi,level\n";
  for (int i = 0; i < model.box.dim(); ++i) {
    const PickFreezeSample sample =
        make_pick_freeze(model.box, i, cfg.sobol_M,
                         cfg.seed_eval + static_cast<std::uint64_t>(i), out_fn,
                         eps_fn);
    const SobolResult res =
        sobol_certified(sample, cfg.sobol_alpha_as, cfg.sobol_B,
                        cfg.sobol_alpha,
                        cfg.seed_eval + 1000 + static_cast<std::uint64_t>(i));
    out << (i + 1) << "," << fmt(res.s_hat) << ","
        << fmt(res.meta_interval.first) << "," << fmt(res.meta_interval.second)
        << "," << fmt(res.combined_interval.first) << ","
        << fmt(res.combined_interval.second) << "," << fmt(res.level) << "\n";
  }
}

Artifact train_artifact(const ExperimentConfig& cfg) {
  const AffineModel model = cfg.build_model();
  const Partition partition =
      Partition::uniform_grid(model.box, cfg.partition_per_dim);
  const std::vector<FullSample> snaps =
      draw_full_samples(model, cfg.pod_snapshots, cfg.seed_snapshot);
  std::vector<Vector> primal_snaps, dual_snaps;
  for (const FullSample& fs : snaps) {
    primal_snaps.push_back(fs.u);
    dual_snaps.push_back(fs.w);
  }
  Artifact art;
  art.config = cfg;
  art.basis_size = cfg.basis_sizes.front();
  const ReducedBasis Z = pod_basis(primal_snaps, art.basis_size);
  const ReducedBasis Zd = pod_basis(dual_snaps, art.basis_size);
  art.rm = project(model, Z, Zd);

  TrainOptions topts;
  topts.sample_size = cfg.bound_snapshots;
  topts.N = cfg.effective_N();
  topts.seed = cfg.seed_train;
  topts.t2_halved = cfg.t2_halved;
  topts.corrected = cfg.corrected;
  art.data = train_goal_oriented(model, art.rm, partition, topts);
  return art;
}

namespace {
constexpr const char kArtifactMagic[] = "RBARTF01";
}

void save_artifact(const std::string& path, const Artifact& artifact) {
  // The bound data travels in a sibling block of the same container.
  detail::BlobWriter w;
  w.meta["version"] = 1;
  w.meta["basis_size"] = artifact.basis_size;
  w.meta["config"] = artifact.config.to_map();
  w.meta["has_dual"] = artifact.rm.has_dual;
  w.meta["Q"] = artifact.rm.At_q.size();
  w.meta["Qp"] = artifact.rm.ft_q.size();

  const ReducedModel& rm = artifact.rm;
  w.add("Z", rm.basis.Z);
  for (size_t q = 0; q < rm.At_q.size(); ++q)
    w.add("At_" + std::to_string(q), rm.At_q[q]);
  for (size_t q = 0; q < rm.ft_q.size(); ++q)
    w.add("ft_" + std::to_string(q), rm.ft_q[q]);
  w.add("lt", rm.lt);
  if (rm.has_dual) {
    w.add("Zd", rm.dual_basis.Z);
    for (size_t q = 0; q < rm.Atd_q.size(); ++q) {
      w.add("Atd_" + std::to_string(q), rm.Atd_q[q]);
      w.add("C_" + std::to_string(q), rm.C_q[q]);
    }
    for (size_t q = 0; q < rm.d_q.size(); ++q)
      w.add("d_" + std::to_string(q), rm.d_q[q]);
    w.add("ltd", rm.ltd);
  }
  w.write(path, kArtifactMagic);

  save_bound_data(path + ".bound", artifact.data);
}

Artifact load_artifact(const std::string& path) {
  detail::BlobReader r(path, kArtifactMagic);
  Artifact art;
  for (const auto& [k, v] :
       r.meta.at("config").get<std::map<std::string, std::string>>())
    apply_override(art.config, k, v);
  art.basis_size = r.meta.at("basis_size").get<int>();

  // Coefficient callbacks are rebound from the benchmark named in the config.
  const AffineModel model = art.config.build_model();
  ReducedModel& rm = art.rm;
  rm.basis.Z = r.matrix("Z");
  const auto Q = r.meta.at("Q").get<size_t>();
  const auto Qp = r.meta.at("Qp").get<size_t>();
  if (Q != model.A_q.size() || Qp != model.f_q.size())
    throw ConfigError("artifact does not match the configured benchmark");
  for (size_t q = 0; q < Q; ++q)
    rm.At_q.push_back(r.matrix("At_" + std::to_string(q)));
  for (size_t q = 0; q < Qp; ++q)
    rm.ft_q.push_back(r.vector("ft_" + std::to_string(q)));
  rm.lt = r.vector("lt");
  rm.theta = model.theta;
  rm.gamma = model.gamma;
  rm.box = model.box;
  rm.has_dual = r.meta.at("has_dual").get<bool>();
  if (rm.has_dual) {
    rm.dual_basis.Z = r.matrix("Zd");
    for (size_t q = 0; q < Q; ++q) {
      rm.Atd_q.push_back(r.matrix("Atd_" + std::to_string(q)));
      rm.C_q.push_back(r.matrix("C_" + std::to_string(q)));
    }
    for (size_t q = 0; q < Qp; ++q)
      rm.d_q.push_back(r.vector("d_" + std::to_string(q)));
    rm.ltd = r.vector("ltd");
  }

  art.data = load_bound_data(path + ".bound");
  return art;
}

}  // namespace rb
