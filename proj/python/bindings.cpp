#include <pybind11/pybind11.h>
#include <pybind11/stl.h>
#include <pybind11/stl/filesystem.h>

#include "dddr/ambiguity.hpp"
#include "dddr/benchmarks.hpp"
#include "dddr/experiment.hpp"
#include "dddr/inner.hpp"
#include "dddr/io.hpp"
#include "dddr/milp_builder.hpp"
#include "dddr/solvers.hpp"

namespace py = pybind11;
using namespace dddr;

namespace {

PlanOptions make_options(const std::string& engine, std::optional<std::size_t> budget, bool cuts, double dual_bound,
                         std::size_t customers) {
  PlanOptions o;
  o.engine = engine_from_string(engine);
  o.budget = budget;
  o.with_cuts = cuts;
  o.bounds = DualBounds::uniform(customers, dual_bound);
  return o;
}

}  // namespace

PYBIND11_MODULE(_core, m) {
  m.doc() = "Decision-dependent distributionally robust facility location";
  m.attr("__version__") = kVersion;

  py::register_exception<AmbiguityInfeasible>(m, "AmbiguityInfeasible", PyExc_ValueError);

  py::class_<Point>(m, "Point")
      .def(py::init<>())
      .def(py::init([](double x, double y) { return Point{x, y}; }), py::arg("x"), py::arg("y"))
      .def_readwrite("x", &Point::x)
      .def_readwrite("y", &Point::y)
      .def("__repr__", [](const Point& p) { return "Point(" + std::to_string(p.x) + ", " + std::to_string(p.y) + ")"; });

  py::class_<Facility>(m, "Facility")
      .def(py::init([](int id, Point coord, double open_cost, double capacity) {
             return Facility{id, coord, open_cost, capacity};
           }),
           py::arg("id"), py::arg("coord"), py::arg("open_cost"), py::arg("capacity"))
      .def_readwrite("id", &Facility::id)
      .def_readwrite("coord", &Facility::coord)
      .def_readwrite("open_cost", &Facility::open_cost)
      .def_readwrite("capacity", &Facility::capacity);

  py::class_<Customer>(m, "Customer")
      .def(py::init([](int id, Point coord, double penalty, double revenue) {
             return Customer{id, coord, penalty, revenue};
           }),
           py::arg("id"), py::arg("coord"), py::arg("penalty"), py::arg("revenue"))
      .def_readwrite("id", &Customer::id)
      .def_readwrite("coord", &Customer::coord)
      .def_readwrite("penalty", &Customer::penalty)
      .def_readwrite("revenue", &Customer::revenue);

  py::class_<Instance>(m, "Instance")
      .def(py::init<std::vector<Facility>, std::vector<Customer>, Matrix>(), py::arg("facilities"),
           py::arg("customers"), py::arg("cost"))
      .def_static("euclidean", &Instance::euclidean, py::arg("facilities"), py::arg("customers"),
                  py::arg("cost_multiplier") = 1.0)
      .def_property_readonly("num_facilities", &Instance::num_facilities)
      .def_property_readonly("num_customers", &Instance::num_customers)
      .def_property_readonly("facilities", &Instance::facilities)
      .def_property_readonly("customers", &Instance::customers)
      .def("cost", &Instance::cost, py::arg("i"), py::arg("j"))
      .def("with_penalty", &Instance::with_penalty, py::arg("penalty"));

  py::class_<Support>(m, "Support")
      .def(py::init<std::vector<double>>(), py::arg("values"))
      .def_static("range", &Support::range, py::arg("min"), py::arg("max"), py::arg("step"))
      .def_property_readonly("values", &Support::values)
      .def("__len__", &Support::size);

  py::class_<DemandModel>(m, "DemandModel")
      .def(py::init<>())
      .def_readwrite("bar_mu", &DemandModel::bar_mu)
      .def_readwrite("bar_sigma", &DemandModel::bar_sigma)
      .def_readwrite("lambda_mu", &DemandModel::lambda_mu)
      .def_readwrite("lambda_sigma", &DemandModel::lambda_sigma)
      .def_readwrite("support", &DemandModel::support)
      .def_readwrite("eps_mu", &DemandModel::eps_mu)
      .def_readwrite("eps_sigma_lo", &DemandModel::eps_sigma_lo)
      .def_readwrite("eps_sigma_hi", &DemandModel::eps_sigma_hi)
      .def("without_dependency", &DemandModel::without_dependency);

  py::class_<LocationDecision>(m, "LocationDecision")
      .def(py::init<std::vector<int>>(), py::arg("bits"))
      .def_static("from_mask", &LocationDecision::from_mask, py::arg("mask"), py::arg("n"))
      .def("is_open", &LocationDecision::is_open)
      .def_property_readonly("open_indices", &LocationDecision::open_indices)
      .def_property_readonly("bits", &LocationDecision::bits)
      .def("__len__", &LocationDecision::size)
      .def("__str__", &LocationDecision::to_string)
      .def("__eq__", [](const LocationDecision& a, const LocationDecision& b) { return a == b; });

  py::class_<Problem>(m, "Problem")
      .def(py::init<Instance, DemandModel>(), py::arg("instance"), py::arg("demand"))
      .def_readwrite("instance", &Problem::instance)
      .def_readwrite("demand", &Problem::demand);

  m.def("apply_robustness_level", &apply_robustness_level, py::arg("model"), py::arg("kappa"));
  m.def("mean_of", &mean_of, py::arg("model"), py::arg("y"), py::arg("j"));
  m.def("variance_of", &variance_of, py::arg("model"), py::arg("y"), py::arg("j"));
  m.def(
      "validate",
      [](const Instance& i, const DemandModel& d) {
        std::vector<std::pair<std::string, std::string>> out;
        for (const Violation& v : validate(i, d)) out.emplace_back(v.entity, v.rule);
        return out;
      },
      py::arg("instance"), py::arg("model"));

  m.def("h_closed_form", &h_closed_form, py::arg("instance"), py::arg("y"), py::arg("demand"));
  m.def("transport_lp_oracle", &transport_lp_oracle, py::arg("instance"), py::arg("y"), py::arg("demand"));

  m.def(
      "worst_case_expectation",
      [](const Instance& i, const DemandModel& d, const LocationDecision& y) {
        const WorstCaseResult r = worst_case_expectation(i, d, y);
        return py::dict(py::arg("value") = r.value, py::arg("per_customer") = r.per_customer,
                        py::arg("distribution") = r.distribution.pi);
      },
      py::arg("instance"), py::arg("model"), py::arg("y"));
  m.def(
      "dual_lp_value", [](const Instance& i, const DemandModel& d, const LocationDecision& y) { return dual_lp_value(i, d, y); },
      py::arg("instance"), py::arg("model"), py::arg("y"));
  m.def(
      "ambiguity_feasible",
      [](const Instance& i, const DemandModel& d, const LocationDecision& y) {
        const FeasibilityReport r = ambiguity_feasible(i, d, y);
        return py::make_tuple(r.feasible, r.describe());
      },
      py::arg("instance"), py::arg("model"), py::arg("y"));

  py::class_<PlanResult>(m, "PlanResult")
      .def_readonly("y", &PlanResult::y)
      .def_readonly("objective", &PlanResult::objective)
      .def_readonly("method", &PlanResult::method)
      .def_property_readonly("engine", [](const PlanResult& r) { return std::string(to_string(r.engine)); })
      .def_property_readonly("status", [](const PlanResult& r) { return std::string(to_string(r.status)); })
      .def_readonly("node_count", &PlanResult::node_count)
      .def_readonly("plans_evaluated", &PlanResult::plans_evaluated)
      .def_readonly("doublings", &PlanResult::doublings)
      .def_readonly("binding", &PlanResult::binding);

  m.def(
      "solve_dddr",
      [](const Instance& i, const DemandModel& d, const std::string& engine, std::optional<std::size_t> budget,
         bool cuts, double dual_bound) {
        py::gil_scoped_release release;
        return solve_dddr(i, d, make_options(engine, budget, cuts, dual_bound, i.num_customers()));
      },
      py::arg("instance"), py::arg("model"), py::arg("engine") = "auto", py::arg("budget") = py::none(),
      py::arg("cuts") = false, py::arg("dual_bound") = 100.0);
  m.def(
      "solve_dr",
      [](const Instance& i, const DemandModel& d, const std::string& engine, std::optional<std::size_t> budget,
         bool cuts, double dual_bound) {
        py::gil_scoped_release release;
        return solve_dr(i, d, make_options(engine, budget, cuts, dual_bound, i.num_customers()));
      },
      py::arg("instance"), py::arg("model"), py::arg("engine") = "auto", py::arg("budget") = py::none(),
      py::arg("cuts") = false, py::arg("dual_bound") = 100.0);

  py::class_<ScenarioSet>(m, "ScenarioSet")
      .def(py::init([](Matrix demands, std::vector<double> probabilities) {
             ScenarioSet s;
             s.demands = std::move(demands);
             s.probabilities = std::move(probabilities);
             return s;
           }),
           py::arg("demands"), py::arg("probabilities") = std::vector<double>{})
      .def_readonly("demands", &ScenarioSet::demands)
      .def_readonly("probabilities", &ScenarioSet::probabilities)
      .def_readonly("generator", &ScenarioSet::generator)
      .def("__len__", &ScenarioSet::size);

  m.def(
      "solve_sp",
      [](const Instance& i, const ScenarioSet& s, const std::string& engine, std::optional<std::size_t> budget) {
        py::gil_scoped_release release;
        return solve_sp(i, s, make_options(engine, budget, false, 100.0, i.num_customers()));
      },
      py::arg("instance"), py::arg("scenarios"), py::arg("engine") = "auto", py::arg("budget") = py::none());

  m.def("gen_normal", &gen_normal, py::arg("model"), py::arg("y"), py::arg("n"), py::arg("seed"));
  m.def("gen_gamma", &gen_gamma, py::arg("model"), py::arg("y"), py::arg("n"), py::arg("seed"));
  m.def("gen_perturbed", &gen_perturbed, py::arg("model"), py::arg("y"), py::arg("kappa"), py::arg("seed"),
        py::arg("reps") = 10, py::arg("per_rep") = 100);
  m.def("gen_training", &gen_training, py::arg("model"), py::arg("n"), py::arg("seed"));

  py::class_<EvaluationReport>(m, "EvaluationReport")
      .def_readonly("mean_objective", &EvaluationReport::mean_objective)
      .def_readonly("std_objective", &EvaluationReport::std_objective)
      .def_readonly("objective_percentiles", &EvaluationReport::objective_percentiles)
      .def_readonly("mean_unmet", &EvaluationReport::mean_unmet)
      .def_readonly("std_unmet", &EvaluationReport::std_unmet)
      .def_readonly("unmet_percentiles", &EvaluationReport::unmet_percentiles)
      .def_readonly("objective", &EvaluationReport::objective)
      .def_readonly("unmet", &EvaluationReport::unmet);
  m.attr("PERCENTILE_LEVELS") = std::vector<int>(kPercentileLevels.begin(), kPercentileLevels.end());
  m.def("evaluate_plan", &evaluate_plan, py::arg("instance"), py::arg("y"), py::arg("scenarios"));
  m.def("upper_percentile", &upper_percentile, py::arg("values"), py::arg("probabilities"), py::arg("q"));

  // JSON documents cross the boundary as text; the Python package wraps them.
  m.def("_problem_to_json", [](const Problem& p) { return problem_to_json(p).dump(); });
  m.def("_problem_from_json", [](const std::string& s) { return problem_from_json(nlohmann::json::parse(s)); });
  m.def("_normalize_config", [](const std::string& s) {
    return config_to_json(config_from_json(nlohmann::json::parse(s))).dump();
  });
  m.def("_config_hash", [](const std::string& s) { return config_hash(config_from_json(nlohmann::json::parse(s))); });
  m.def("_generate_instance", [](const std::string& s, std::uint64_t seed) {
    return generate_instance(config_from_json(nlohmann::json::parse(s)), seed);
  });
  m.def("_run", [](const std::string& s, const std::filesystem::path& out) {
    const ExperimentConfig c = config_from_json(nlohmann::json::parse(s));
    py::gil_scoped_release release;
    std::vector<std::string> files;
    for (const auto& f : run(c, out).files) files.push_back(f.generic_string());
    return files;
  });
  m.def("_export_lp", [](const Problem& p, const std::string& method, double dual_bound, bool cuts,
                         std::optional<std::size_t> budget) {
    const DualBounds ub = DualBounds::uniform(p.instance.num_customers(), dual_bound);
    const DddrOptions o{.budget = budget, .with_cuts = cuts};
    if (method == "dr") return export_lp_text(build_dr(p.instance, p.demand, ub, o));
    if (method == "dddr") return export_lp_text(build_dddr(p.instance, p.demand, ub, o));
    throw std::invalid_argument("method must be 'dr' or 'dddr'");
  });
  m.def("fixture_figure2", [] {
    const Layout l = fixture_figure2();
    return py::make_tuple(l.facilities, l.customers);
  });
}
