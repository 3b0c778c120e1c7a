#include <limits>

#include <pybind11/eigen.h>
#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "tickfever/analysis.hpp"
#include "tickfever/errors.hpp"
#include "tickfever/experiments.hpp"
#include "tickfever/integrator.hpp"
#include "tickfever/model.hpp"
#include "tickfever/optimal_control.hpp"

namespace py = pybind11;
namespace tf = tickfever;

namespace {

// Samples as an (n, width) array.
template <typename Sample, typename Row>
Eigen::MatrixXd to_matrix(const tf::Trajectory<Sample>& traj, int width, Row row) {
    Eigen::MatrixXd out(static_cast<Eigen::Index>(traj.samples.size()), width);
    for (std::size_t k = 0; k < traj.samples.size(); ++k) out.row(static_cast<Eigen::Index>(k)) = row(traj.samples[k]);
    return out;
}

Eigen::VectorXd times(const tf::TimeGrid& g) {
    Eigen::VectorXd t(static_cast<Eigen::Index>(g.size()));
    for (std::size_t k = 0; k < g.size(); ++k) t[static_cast<Eigen::Index>(k)] = g.at(k);
    return t;
}

Eigen::MatrixXd states(const tf::StateTrajectory& s) {
    return to_matrix(s, tf::kNumCompartments, [](const tf::Vec7& x) { return x.transpose(); });
}

Eigen::MatrixXd controls(const tf::ControlTrajectory& c) {
    return to_matrix(c, 3, [](const tf::ControlVector& u) { return Eigen::RowVector3d(u[0], u[1], u[2]); });
}

}  // namespace

PYBIND11_MODULE(_core, m) {
    m.doc() = "Bird-tick spirochaetosis model core";

    py::register_exception<tf::InputError>(m, "InputError", PyExc_ValueError);
    py::register_exception<tf::NumericalFailure>(m, "NumericalFailure", PyExc_RuntimeError);

    py::enum_<tf::RecruitmentMode>(m, "RecruitmentMode")
        .value("ConstantInflow", tf::RecruitmentMode::ConstantInflow)
        .value("Proportional", tf::RecruitmentMode::Proportional);
    py::enum_<tf::ModelVariant>(m, "ModelVariant")
        .value("PaperExact", tf::ModelVariant::PaperExact)
        .value("Consistent", tf::ModelVariant::Consistent);
    py::enum_<tf::EquilibriumKind>(m, "EquilibriumKind")
        .value("DiseaseFree", tf::EquilibriumKind::DiseaseFree)
        .value("Endemic", tf::EquilibriumKind::Endemic);

    py::class_<tf::ModelParams>(m, "ModelParams")
        .def(py::init<>())
        .def_readwrite("tau_B", &tf::ModelParams::tau_B)
        .def_readwrite("tau_T", &tf::ModelParams::tau_T)
        .def_readwrite("beta_1", &tf::ModelParams::beta_1)
        .def_readwrite("beta_2", &tf::ModelParams::beta_2)
        .def_readwrite("beta_3", &tf::ModelParams::beta_3)
        .def_readwrite("theta", &tf::ModelParams::theta)
        .def_readwrite("lambda_", &tf::ModelParams::lambda)
        .def_readwrite("alpha_B", &tf::ModelParams::alpha_B)
        .def_readwrite("alpha_T", &tf::ModelParams::alpha_T)
        .def_readwrite("d", &tf::ModelParams::d)
        .def_readwrite("mu", &tf::ModelParams::mu)
        .def_readwrite("sigma", &tf::ModelParams::sigma)
        .def_readwrite("delta", &tf::ModelParams::delta)
        .def_readwrite("N_B0", &tf::ModelParams::N_B0)
        .def_readwrite("N_T0", &tf::ModelParams::N_T0)
        .def_readwrite("recruitment_mode", &tf::ModelParams::recruitment_mode)
        .def("validate", &tf::ModelParams::validate);

    py::class_<tf::CostWeights>(m, "CostWeights")
        .def(py::init<>())
        .def(py::init([](double c1, double c2, double c3, double d1, double d2, double d3) {
                 return tf::CostWeights{c1, c2, c3, d1, d2, d3};
             }),
             py::arg("C1"), py::arg("C2"), py::arg("C3"), py::arg("D1"), py::arg("D2"), py::arg("D3"))
        .def_readwrite("C1", &tf::CostWeights::C1)
        .def_readwrite("C2", &tf::CostWeights::C2)
        .def_readwrite("C3", &tf::CostWeights::C3)
        .def_readwrite("D1", &tf::CostWeights::D1)
        .def_readwrite("D2", &tf::CostWeights::D2)
        .def_readwrite("D3", &tf::CostWeights::D3);

    m.attr("compartments") = py::make_tuple("S_B", "E_B", "I_B", "R", "S_T", "E_T", "I_T");
    m.def("default_initial_state", &tf::default_initial_state);
    m.def("rhs_base", &tf::rhs_base, py::arg("x"), py::arg("params"));
    m.def(
        "rhs_control",
        [](const tf::Vec7& x, const tf::ControlVector::Array& u, const tf::ModelParams& p, tf::ModelVariant v) {
            constexpr double inf = std::numeric_limits<double>::infinity();
            return tf::rhs_control(x, tf::ControlVector(u, {inf, inf, inf}), p, v);
        },
        py::arg("x"), py::arg("u"), py::arg("params"), py::arg("variant") = tf::ModelVariant::Consistent);

    m.def(
        "integrate",
        [](const tf::Vec7& x0, const tf::ModelParams& p, double t1, std::size_t steps) {
            const tf::TimeGrid grid(0.0, t1, steps);
            const auto traj = tf::integrate([&p](double, const tf::Vec7& x) { return tf::detail::base_rhs(x, p); },
                                            x0, grid);
            return py::make_tuple(times(grid), states(traj));
        },
        py::arg("x0"), py::arg("params"), py::arg("t1"), py::arg("steps"),
        "Uncontrolled RK4 run; returns (t, states) with states of shape (steps + 1, 7).");

    m.def("disease_free_equilibrium", &tf::disease_free_equilibrium, py::arg("params"));
    m.def("jacobian_at", &tf::jacobian_at, py::arg("x"), py::arg("params"));

    py::class_<tf::EquilibriumReport>(m, "EquilibriumReport")
        .def_readonly("point", &tf::EquilibriumReport::point)
        .def_readonly("kind", &tf::EquilibriumReport::kind)
        .def_readonly("residual_norm", &tf::EquilibriumReport::residual_norm)
        .def_readonly("eigenvalues", &tf::EquilibriumReport::eigenvalues)
        .def_readonly("locally_stable", &tf::EquilibriumReport::locally_stable)
        .def_readonly("iterations", &tf::EquilibriumReport::iterations);
    m.def("disease_free_report", &tf::disease_free_report, py::arg("params"));
    m.def("endemic_equilibrium", &tf::endemic_equilibrium, py::arg("params"), py::arg("guess"));
    m.def("find_endemic_equilibrium", &tf::find_endemic_equilibrium, py::arg("params"));

    py::class_<tf::R0Report>(m, "R0Report")
        .def_readonly("R_B", &tf::R0Report::R_B)
        .def_readonly("R_T", &tf::R0Report::R_T)
        .def_readonly("R_TB", &tf::R0Report::R_TB)
        .def_readonly("r0_formula", &tf::R0Report::r0_formula)
        .def_readonly("r0_spectral", &tf::R0Report::r0_spectral)
        .def_readonly("agreement", &tf::R0Report::agreement);
    m.def("r0", &tf::r0, py::arg("params"));

    py::class_<tf::DfeStability>(m, "DfeStability")
        .def_readonly("spectral_stable", &tf::DfeStability::spectral_stable)
        .def_readonly("inequality_stable", &tf::DfeStability::inequality_stable)
        .def_readonly("eigenvalues", &tf::DfeStability::eigenvalues);
    m.def("dfe_stability_condition", &tf::dfe_stability_condition, py::arg("params"));

    m.def(
        "optimal_control",
        [](const tf::Vec7& x0, const tf::ModelParams& p, const tf::CostWeights& w,
           const tf::ControlVector::Array& bounds, double t1, std::size_t steps, tf::ModelVariant variant,
           double relaxation, double tolerance, std::size_t max_iterations) {
            const tf::TimeGrid grid(0.0, t1, steps);
            const auto r = tf::forward_backward_sweep(x0, grid, w, p, variant, bounds,
                                                      {relaxation, tolerance, max_iterations});
            py::dict out;
            out["t"] = times(grid);
            out["states"] = states(r.state_traj);
            out["adjoints"] = states(r.adjoint_traj);
            out["controls"] = controls(r.control_traj);
            out["objective"] = r.objective_value;
            out["iterations"] = r.iterations;
            out["converged"] = r.converged;
            return out;
        },
        py::arg("x0"), py::arg("params"), py::arg("weights"), py::arg("bounds"), py::arg("t1") = 40.0,
        py::arg("steps") = 4000, py::arg("variant") = tf::ModelVariant::Consistent, py::arg("relaxation") = 0.5,
        py::arg("tolerance") = 1e-6, py::arg("max_iterations") = 500);

    m.def("builtin_scenarios", [] {
        std::vector<std::string> names;
        for (const auto& c : tf::builtin_scenarios()) names.push_back(c.name);
        return names;
    });
    m.def(
        "run_scenario",
        [](const std::string& name, const std::filesystem::path& out_dir, bool allow_unbounded) {
            auto c = tf::find_builtin(name);
            if (!c) c = tf::load_config(name);
            c->output_dir = out_dir;
            c->allow_unbounded_controls = allow_unbounded;
            const auto r = tf::run_scenario(*c);
            py::dict out;
            out["report"] = r.report_path;
            py::list files;
            for (const auto& mem : r.members) files.append(mem.csv_path);
            out["csv"] = files;
            out["notes"] = r.notes;
            return out;
        },
        py::arg("scenario"), py::arg("out_dir"), py::arg("allow_unbounded_controls") = false,
        "Runs a built-in scenario name or a config file path and writes its CSV and JSON outputs.");
}
