#include <pybind11/numpy.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>

#include "sbgk/batteries.hpp"
#include "sbgk/bgk.hpp"
#include "sbgk/errors.hpp"
#include "sbgk/experiment.hpp"
#include "sbgk/stochastic.hpp"
#include "sbgk/verify.hpp"

namespace py = pybind11;
using namespace sbgk;

namespace {

py::array_t<double> array(std::span<const double> v) {
  py::array_t<double> a(static_cast<py::ssize_t>(v.size()));
  std::copy(v.begin(), v.end(), a.mutable_data());
  return a;
}

py::array_t<double> array(const std::vector<double>& v) { return array(std::span<const double>(v)); }

py::array_t<double> matrix(const std::vector<std::vector<double>>& rows, std::size_t cols) {
  py::array_t<double> a({static_cast<py::ssize_t>(rows.size()), static_cast<py::ssize_t>(cols)});
  double* p = a.mutable_data();
  for (const auto& r : rows) p = std::copy(r.begin(), r.end(), p);
  return a;
}

Boundary boundary_from(const std::string& s) {
  if (s == "zero_inflow") return Boundary::ZeroInflow;
  if (s == "extrapolate") return Boundary::Extrapolate;
  throw ConfigError("boundary must be zero_inflow or extrapolate (got '" + s + "')");
}

// Solver configuration keyed by catalog identifiers.
struct BoundConfig {
  SolverConfig c;
  std::string flux_id, forcing_id;
};

}  // namespace

PYBIND11_MODULE(_sbgk, m) {
  m.doc() = "BGK relaxation solver for stochastic scalar balance laws";
  m.attr("__version__") = kVersion;

  static py::exception<Error> base(m, "SbgkError", PyExc_RuntimeError);
  static py::exception<ConfigError> config_error(m, "ConfigError", PyExc_ValueError);
  py::register_exception_translator([](std::exception_ptr p) {
    try {
      if (p) std::rethrow_exception(p);
    } catch (const ConfigError& e) {
      py::set_error(config_error, e.what());
    } catch (const Error& e) {
      py::set_error(base, e.what());
    }
  });

  py::class_<SpaceGrid>(m, "SpaceGrid")
      .def(py::init<double, double, int>(), py::arg("x_min"), py::arg("x_max"), py::arg("n_cells"))
      .def_property_readonly("x_min", &SpaceGrid::x_min)
      .def_property_readonly("x_max", &SpaceGrid::x_max)
      .def_property_readonly("size", &SpaceGrid::size)
      .def_property_readonly("dx", &SpaceGrid::dx)
      .def_property_readonly("centers", [](const SpaceGrid& g) {
        std::vector<double> c;
        for (int i = 0; i < g.size(); ++i) c.push_back(g.center(i));
        return array(c);
      });

  py::class_<VelocityGrid>(m, "VelocityGrid")
      .def(py::init<double, double, int>(), py::arg("v_min"), py::arg("v_max"), py::arg("n_cells"))
      .def_static("symmetric", &VelocityGrid::symmetric, py::arg("v_max"), py::arg("n_cells"))
      .def_static("for_support", &VelocityGrid::for_support, py::arg("k"), py::arg("growth"), py::arg("n_cells"))
      .def_property_readonly("v_min", &VelocityGrid::v_min)
      .def_property_readonly("v_max", &VelocityGrid::v_max)
      .def_property_readonly("size", &VelocityGrid::size)
      .def_property_readonly("dv", &VelocityGrid::dv);

  py::class_<DensityField>(m, "DensityField")
      .def(py::init([](const SpaceGrid& g, const std::vector<double>& v) { return DensityField(g, v); }),
           py::arg("grid"), py::arg("values"))
      .def_property_readonly("grid", &DensityField::grid)
      .def_property_readonly("values", [](const DensityField& d) { return array(d.values()); })
      .def("mass", &DensityField::mass)
      .def("l1", &DensityField::l1)
      .def("linf", &DensityField::linf)
      .def("__len__", &DensityField::size);

  py::class_<Profile>(m, "Profile")
      .def_static("riemann", &Profile::riemann, py::arg("left"), py::arg("right"), py::arg("x0") = 0.0)
      .def_static("bump", &Profile::bump, py::arg("center"), py::arg("width"), py::arg("height"))
      .def_static("box", &Profile::box, py::arg("lo"), py::arg("hi"), py::arg("height"))
      .def_property_readonly("name", &Profile::name)
      .def("average", &Profile::average, py::arg("lo"), py::arg("hi"))
      .def("on", &Profile::on, py::arg("grid"))
      .def("__call__", &Profile::operator(), py::arg("x"));

  py::class_<BoundConfig>(m, "SolverConfig")
      .def(py::init([](const SpaceGrid& space, const VelocityGrid& velocity, const std::string& flux,
                       const std::string& forcing, double eps, double t_final, double dt, double cfl, int record_every,
                       const std::string& boundary, bool strang) {
             BoundConfig p;
             p.flux_id = flux;
             p.forcing_id = forcing;
             p.c.space = space;
             p.c.velocity = velocity;
             p.c.flux = flux_from_id(flux);
             p.c.forcing = forcing_from_id(forcing);
             p.c.eps = eps;
             p.c.t_final = t_final;
             p.c.dt = dt;
             p.c.cfl_target = cfl;
             p.c.record_every = record_every;
             p.c.boundary = boundary_from(boundary);
             p.c.splitting = strang ? Splitting::Strang : Splitting::Lie;
             p.c.record_kinetic = false;
             validate(p.c);
             return p;
           }),
           py::arg("space"), py::arg("velocity"), py::arg("flux") = "burgers", py::arg("forcing") = "zero",
           py::arg("eps") = 1e-3, py::arg("t_final") = 0.5, py::arg("dt") = 0.0, py::arg("cfl") = 0.9,
           py::arg("record_every") = 1, py::arg("boundary") = "zero_inflow", py::arg("strang") = false)
      .def_property_readonly("flux", [](const BoundConfig& p) { return p.flux_id; })
      .def_property_readonly("forcing", [](const BoundConfig& p) { return p.forcing_id; })
      .def_property_readonly("space", [](const BoundConfig& p) { return p.c.space; })
      .def_property_readonly("velocity", [](const BoundConfig& p) { return p.c.velocity; })
      .def_property_readonly("eps", [](const BoundConfig& p) { return p.c.eps; })
      .def_property_readonly("t_final", [](const BoundConfig& p) { return p.c.t_final; })
      .def("time_step", [](const BoundConfig& p) {
        const TimeStep ts = select_time_step(p.c);
        return py::make_tuple(ts.dt, ts.n_steps);
      });

  py::class_<Trajectory>(m, "Trajectory")
      .def_readonly("dt", &Trajectory::dt)
      .def_property_readonly("times", [](const Trajectory& t) { return array(t.times); })
      .def_property_readonly("mass", [](const Trajectory& t) { return array(t.mass); })
      .def_property_readonly("l1", [](const Trajectory& t) { return array(t.l1); })
      .def_property_readonly("linf", [](const Trajectory& t) { return array(t.linf); })
      .def_property_readonly("total_defect", [](const Trajectory& t) { return array(t.total_defect); })
      .def_property_readonly("min_defect",
                             [](const Trajectory& t) {
                               std::vector<double> v;
                               for (const Snapshot& s : t.snapshots) v.push_back(s.m ? s.m->min_value() : 0.0);
                               return array(v);
                             })
      .def_property_readonly("rho",
                             [](const Trajectory& t) {
                               std::vector<std::vector<double>> rows;
                               for (const Snapshot& s : t.snapshots)
                                 rows.emplace_back(s.rho.values().begin(), s.rho.values().end());
                               return matrix(rows, t.snapshots.empty() ? 0 : rows.front().size());
                             })
      .def("final", [](const Trajectory& t) { return t.back().rho; })
      .def("__len__", &Trajectory::size);

  m.def(
      "run", [](const BoundConfig& p, const DensityField& rho0) { return run(p.c, rho0); }, py::arg("config"),
      py::arg("rho0"), py::call_guard<py::gil_scoped_release>());

  m.def(
      "godunov_reference",
      [](const std::string& flux, const std::string& forcing, const DensityField& rho0, double t_final,
         const std::string& boundary) {
        return godunov_reference(flux_from_id(flux), forcing_from_id(forcing), rho0, 0.0, t_final,
                                 boundary_from(boundary));
      },
      py::arg("flux"), py::arg("forcing"), py::arg("rho0"), py::arg("t_final"), py::arg("boundary") = "extrapolate");

  m.def(
      "sample_shift",
      [](const std::string& noise_id, std::uint64_t seed, double dt_path, double t_final) {
        const ShiftPath s = sample_shift(noise_from_id(noise_id), seed, dt_path, t_final);
        return py::make_tuple(array(s.wiener.w), array(s.m));
      },
      py::arg("noise"), py::arg("seed"), py::arg("dt_path"), py::arg("t_final"),
      "Returns (W(t_k), M(t_k)) on the path grid.");

  m.def(
      "solve_pathwise_shift",
      [](const BoundConfig& p, const DensityField& rho0, const std::string& noise_id, std::uint64_t seed) {
        const TimeStep ts = select_time_step(p.c);
        const ShiftPath s = sample_shift(noise_from_id(noise_id), seed, ts.dt, p.c.t_final);
        return solve_pathwise_shift(p.c, rho0, s);
      },
      py::arg("config"), py::arg("rho0"), py::arg("noise"), py::arg("seed"));

  py::class_<EnsembleStats>(m, "EnsembleStats")
      .def_readonly("n_paths", &EnsembleStats::n_paths)
      .def_readonly("decay_rate_l1", &EnsembleStats::decay_rate_l1)
      .def_readonly("decay_power_l1", &EnsembleStats::decay_power_l1)
      .def_property_readonly("times", [](const EnsembleStats& s) { return array(s.times); })
      .def_property_readonly("mean", [](const EnsembleStats& s) { return matrix(s.mean, s.grid.size()); })
      .def_property_readonly("variance", [](const EnsembleStats& s) { return matrix(s.variance, s.grid.size()); })
      .def_property_readonly("mean_l1", [](const EnsembleStats& s) { return array(s.mean_l1); })
      .def_property_readonly("mean_linf", [](const EnsembleStats& s) { return array(s.mean_linf); });

  m.def(
      "ensemble",
      [](const BoundConfig& p, const DensityField& rho0, const std::string& noise_id, int n_paths,
         std::uint64_t base_seed, int n_threads) {
        return ensemble(p.c, rho0, noise_from_id(noise_id), n_paths, base_seed, n_threads);
      },
      py::arg("config"), py::arg("rho0"), py::arg("noise"), py::arg("n_paths"), py::arg("base_seed"),
      py::arg("n_threads") = 0, py::call_guard<py::gil_scoped_release>());

  m.def("suite_names", &suite_names);
  m.def("entropy_tolerance", &entropy_tolerance);
  m.def(
      "run_suite",
      [](const std::string& name, int n_threads) {
        std::vector<CheckResult> rs;
        {
          py::gil_scoped_release release;
          rs = run_suite(name, n_threads);
        }
        py::list out;
        for (const CheckResult& r : rs) {
          py::dict metrics;
          for (const auto& [k, v] : r.metrics) metrics[py::str(k)] = v;
          py::dict d;
          d["suite"] = r.suite;
          d["name"] = r.name;
          d["pass"] = r.pass;
          d["metrics"] = metrics;
          d["detail"] = r.detail;
          out.append(d);
        }
        return out;
      },
      py::arg("name"), py::arg("n_threads") = 0);
}
