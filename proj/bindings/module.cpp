#include <pybind11/eigen.h>
#include <pybind11/functional.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "rbbound/benchmarks.hpp"
#include "rbbound/error_bounds.hpp"
#include "rbbound/sensitivity.hpp"

namespace py = pybind11;
using namespace rb;

namespace {

ParameterPoint to_point(const Vector& coords) { return ParameterPoint{coords}; }

PickFreezeSample sample_from_arrays(const std::vector<double>& s,
                                    const std::vector<double>& sp,
                                    const std::vector<double>& eps,
                                    const std::vector<double>& eps_prime,
                                    int input_index) {
  PickFreezeSample out;
  out.M = static_cast<int>(s.size());
  out.input_index = input_index;
  out.s_tilde = s;
  out.s_tilde_prime = sp;
  out.eps = eps;
  out.eps_prime = eps_prime;
  out.validate();
  return out;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "certified reduced-basis error bounds";

  py::register_exception<DomainError>(m, "DomainError", PyExc_ValueError);
  py::register_exception<ContractError>(m, "ContractError", PyExc_ValueError);
  py::register_exception<RankError>(m, "RankError", PyExc_ValueError);
  py::register_exception<ConfigError>(m, "ConfigError", PyExc_ValueError);
  py::register_exception<NumericError>(m, "NumericError", PyExc_RuntimeError);

  py::class_<ParameterBox>(m, "ParameterBox")
      .def(py::init<Vector, Vector>(), py::arg("lo"), py::arg("hi"))
      .def_property_readonly("dim", &ParameterBox::dim)
      .def("contains",
           [](const ParameterBox& b, const Vector& mu) {
             return b.contains(to_point(mu));
           })
      .def("sample_many", [](const ParameterBox& b, int n, std::uint64_t seed) {
        std::vector<Vector> out;
        for (const ParameterPoint& p : b.sample_many(n, seed))
          out.push_back(p.coords);
        return out;
      });

  py::class_<Partition>(m, "Partition")
      .def_static(
          "uniform_grid",
          [](const ParameterBox& box, int per_dim) {
            return Partition::uniform_grid(box, per_dim);
          },
          py::arg("box"), py::arg("cells_per_dim") = 1)
      .def_property_readonly("size", &Partition::size)
      .def("cell_of", [](const Partition& p, const Vector& mu) {
        return p.cell_of(to_point(mu));
      });

  py::class_<AffineModel>(m, "AffineModel")
      .def_readonly("dim_x", &AffineModel::dim_x)
      .def_readonly("box", &AffineModel::box)
      .def_readonly("l", &AffineModel::l)
      .def_property_readonly("Q", &AffineModel::Q)
      .def_property_readonly("Qp", &AffineModel::Qp)
      .def("assemble",
           [](const AffineModel& mm, const Vector& mu) {
             return assemble(mm, to_point(mu));
           })
      .def("solve_full",
           [](const AffineModel& mm, const Vector& mu) {
             return solve_full(mm, to_point(mu)).u;
           })
      .def("solve_adjoint",
           [](const AffineModel& mm, const Vector& mu) {
             return solve_adjoint(mm, to_point(mu));
           })
      .def("output", [](const AffineModel& mm, const Vector& u) {
        return output(mm, u);
      });

  m.def(
      "build_transport",
      [](double dx, double dt) {
        TransportConfig cfg;
        cfg.dx = dx;
        cfg.dt = dt;
        return build_transport(cfg);
      },
      py::arg("dx") = 0.05, py::arg("dt") = 0.02);
  m.def(
      "transport_time_march",
      [](double dx, double dt, const Vector& mu) {
        TransportConfig cfg;
        cfg.dx = dx;
        cfg.dt = dt;
        return transport_time_march(cfg, to_point(mu));
      },
      py::arg("dx"), py::arg("dt"), py::arg("mu"));
  m.def(
      "build_diffusion",
      [](int blocks, int grid_n) {
        return build_diffusion(DiffusionConfig(blocks, grid_n));
      },
      py::arg("blocks") = 3, py::arg("grid_n") = 60);

  py::class_<ReducedBasis>(m, "ReducedBasis")
      .def_property_readonly("n", &ReducedBasis::n)
      .def_readonly("Z", &ReducedBasis::Z);

  py::class_<ReducedModel>(m, "ReducedModel")
      .def_property_readonly("n", &ReducedModel::n)
      .def_readonly("has_dual", &ReducedModel::has_dual);

  m.def("pod_basis", &pod_basis, py::arg("snapshots"), py::arg("n"));
  m.def(
      "project",
      [](const AffineModel& model, const ReducedBasis& Z,
         const ReducedBasis* dual) {
        return project(model, Z,
                       dual ? std::optional<ReducedBasis>(*dual)
                            : std::nullopt);
      },
      py::arg("model"), py::arg("basis"), py::arg("dual_basis") = nullptr);
  m.def("solve_reduced",
        [](const ReducedModel& rm, const Vector& mu) {
          return solve_reduced(rm, to_point(mu)).u_tilde;
        });
  m.def("reduced_output", [](const ReducedModel& rm, const Vector& mu) {
    return reduced_output(rm, solve_reduced(rm, to_point(mu)));
  });
  m.def("residual",
        [](const AffineModel& model, const ReducedModel& rm, const Vector& mu) {
          return residual(model, rm, solve_reduced(rm, to_point(mu)));
        });
  m.def("corrected_output", [](const ReducedModel& rm, const Vector& mu) {
    return corrected_output(rm, to_point(mu));
  });

  m.def("stability_constant",
        [](const AffineModel& model, const Vector& mu) {
          return stability_constant(model, to_point(mu));
        });
  m.def("lipschitz_bound",
        [](const AffineModel& model, const ReducedModel& rm, const Vector& mu) {
          return lipschitz_bound(model, rm, to_point(mu));
        });
  m.def("dual_based_bound",
        [](const AffineModel& model, const ReducedModel& rm, const Vector& mu) {
          return dual_based_bound(model, rm, to_point(mu));
        });

  py::class_<GoalOrientedBoundData>(m, "GoalOrientedBoundData")
      .def_readonly("t2_hat", &GoalOrientedBoundData::t2_hat)
      .def_readonly("t2_se", &GoalOrientedBoundData::t2_se)
      .def_readonly("eigvals", &GoalOrientedBoundData::eigvals)
      .def_readonly("corrected", &GoalOrientedBoundData::corrected)
      .def_readonly("rank_truncated", &GoalOrientedBoundData::rank_truncated)
      .def_property_readonly("N", &GoalOrientedBoundData::N)
      .def("save", [](const GoalOrientedBoundData& d, const std::string& path) {
        save_bound_data(path, d);
      });
  m.def("load_bound_data", &load_bound_data, py::arg("path"));

  m.def(
      "train_goal_oriented",
      [](const AffineModel& model, const ReducedModel& rm,
         const Partition& partition, int sample_size, int N, bool corrected,
         std::uint64_t seed) {
        TrainOptions opts;
        opts.sample_size = sample_size;
        opts.N = N;
        opts.corrected = corrected;
        opts.seed = seed;
        return train_goal_oriented(model, rm, partition, opts);
      },
      py::arg("model"), py::arg("rm"), py::arg("partition"),
      py::arg("sample_size") = 200, py::arg("N") = 10,
      py::arg("corrected") = false, py::arg("seed") = 0);
  m.def("t1", [](const GoalOrientedBoundData& d, const ReducedModel& rm,
                 const Vector& mu) { return t1(d, rm, to_point(mu)); });
  m.def("bound",
        [](const GoalOrientedBoundData& d, const ReducedModel& rm,
           const Vector& mu, double alpha) {
          return bound(d, rm, to_point(mu), alpha);
        },
        py::arg("data"), py::arg("rm"), py::arg("mu"), py::arg("alpha"));

  py::class_<SobolResult>(m, "SobolResult")
      .def_readonly("input_index", &SobolResult::input_index)
      .def_readonly("s_hat", &SobolResult::s_hat)
      .def_readonly("meta_interval", &SobolResult::meta_interval)
      .def_readonly("combined_interval", &SobolResult::combined_interval)
      .def_readonly("level", &SobolResult::level);

  m.def("sobol_point_estimate", &sobol_point_estimate, py::arg("s"),
        py::arg("s_prime"));
  m.def(
      "sobol_meta_interval",
      [](const std::vector<double>& s, const std::vector<double>& sp,
         const std::vector<double>& eps, const std::vector<double>& eps_prime) {
        return sobol_meta_interval(
            sample_from_arrays(s, sp, eps, eps_prime, 0));
      },
      py::arg("s"), py::arg("s_prime"), py::arg("eps"), py::arg("eps_prime"));
  m.def(
      "sobol_certified",
      [](const std::vector<double>& s, const std::vector<double>& sp,
         const std::vector<double>& eps, const std::vector<double>& eps_prime,
         double alpha_as, int B, double alpha, std::uint64_t seed,
         int input_index) {
        return sobol_certified(
            sample_from_arrays(s, sp, eps, eps_prime, input_index), alpha_as,
            B, alpha, seed);
      },
      py::arg("s"), py::arg("s_prime"), py::arg("eps"), py::arg("eps_prime"),
      py::arg("alpha_as") = 0.05, py::arg("B") = 500, py::arg("alpha") = 1e-5,
      py::arg("seed") = 0, py::arg("input_index") = 0);
}
