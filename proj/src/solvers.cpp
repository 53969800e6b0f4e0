#include "dddr/solvers.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <memory>
#include <queue>
#include <stdexcept>

#include "json.hpp"

#include "dddr/ambiguity.hpp"
#include "dddr/inner.hpp"

namespace dddr {

const char* to_string(MipStatus s) {
  switch (s) {
    case MipStatus::optimal: return "optimal";
    case MipStatus::infeasible: return "infeasible";
    case MipStatus::unbounded: return "unbounded";
    case MipStatus::node_limit: return "node_limit";
  }
  return "unknown";
}

namespace {

struct Node {
  double bound;
  std::size_t id;
  std::vector<std::int8_t> fixed;  // per binary: -1 free, 0, 1
  LpSolution lp;
};

struct Worse {
  bool operator()(const Node* a, const Node* b) const {
    if (a->bound != b->bound) return a->bound > b->bound;
    return a->id > b->id;
  }
};

}  // namespace

MipSolution branch_and_bound(const MilpModel& model, const MipOptions& options) {
  const LinearProgram base = to_linear_program(model);
  std::vector<std::size_t> binaries;
  for (std::size_t v = 0; v < model.num_variables(); ++v)
    if (model.variable(v).kind == VarKind::binary) binaries.push_back(v);

  MipSolution out;
  std::size_t next_id = 0;
  LinearProgram work = base;

  auto solve_node = [&](const std::vector<std::int8_t>& fixed, const Basis* warm) {
    for (std::size_t b = 0; b < binaries.size(); ++b) {
      const std::size_t v = binaries[b];
      work.col_lower[v] = fixed[b] < 0 ? base.col_lower[v] : fixed[b];
      work.col_upper[v] = fixed[b] < 0 ? base.col_upper[v] : fixed[b];
    }
    LpSolution sol = simplex_solve(work, options.lp, warm);
    out.lp_iterations += sol.iterations;
    ++out.node_count;
    return sol;
  };
  auto gap = [&](double incumbent) { return options.absolute_gap + options.relative_gap * std::abs(incumbent); };

  auto consider_integral = [&](const std::vector<std::int8_t>& fixed, const LpSolution& lp) {
    // re-solve with every binary pinned to its rounded value for a clean point
    std::vector<std::int8_t> pinned = fixed;
    for (std::size_t b = 0; b < binaries.size(); ++b)
      pinned[b] = static_cast<std::int8_t>(lp.primal[binaries[b]] > 0.5 ? 1 : 0);
    LpSolution clean = pinned == fixed ? lp : solve_node(pinned, &lp.basis);
    if (clean.status != LpStatus::optimal) return;
    if (clean.objective < out.objective) {
      out.objective = clean.objective;
      out.values = clean.primal;
      for (std::size_t b = 0; b < binaries.size(); ++b) out.values[binaries[b]] = pinned[b];
      out.incumbent_history.push_back(out.objective);
    }
  };

  auto fractional_index = [&](const LpSolution& lp) -> std::optional<std::size_t> {
    std::optional<std::size_t> pick;
    double best = kInfinity;
    for (std::size_t b = 0; b < binaries.size(); ++b) {
      const double x = lp.primal[binaries[b]];
      const double frac = std::abs(x - std::round(x));
      if (frac <= options.integrality_tolerance) continue;
      const double dist = std::abs(x - 0.5);
      if (dist < best) {
        best = dist;
        pick = b;
      }
    }
    return pick;
  };

  std::priority_queue<Node*, std::vector<Node*>, Worse> open;
  std::vector<std::unique_ptr<Node>> store;
  auto push = [&](std::vector<std::int8_t> fixed, LpSolution lp) {
    store.push_back(std::make_unique<Node>(Node{lp.objective, next_id++, std::move(fixed), std::move(lp)}));
    open.push(store.back().get());
  };

  {
    std::vector<std::int8_t> root_fix(binaries.size(), -1);
    LpSolution root = solve_node(root_fix, nullptr);
    if (root.status == LpStatus::infeasible) {
      out.status = MipStatus::infeasible;
      return out;
    }
    if (root.status == LpStatus::unbounded) {
      out.status = MipStatus::unbounded;
      return out;
    }
    if (root.status != LpStatus::optimal) throw std::runtime_error("root relaxation not solved");
    // rounding heuristic for an early incumbent
    consider_integral(root_fix, root);
    push(std::move(root_fix), std::move(root));
  }

  while (!open.empty()) {
    Node* node = open.top();
    open.pop();
    if (node->bound >= out.objective - gap(out.objective)) {
      // best-bound order: nothing left can improve
      while (!open.empty()) open.pop();
      break;
    }
    if (out.node_count >= options.node_limit) {
      out.status = MipStatus::node_limit;
      out.bound = node->bound;
      return out;
    }
    const auto branch = fractional_index(node->lp);
    if (!branch) {
      consider_integral(node->fixed, node->lp);
      continue;
    }
    for (std::int8_t side : {std::int8_t{0}, std::int8_t{1}}) {
      std::vector<std::int8_t> fixed = node->fixed;
      fixed[*branch] = side;
      LpSolution child = solve_node(fixed, &node->lp.basis);
      if (child.status == LpStatus::infeasible) continue;
      if (child.status != LpStatus::optimal) throw std::runtime_error("node relaxation not solved");
      if (child.objective >= out.objective - gap(out.objective)) continue;
      if (!fractional_index(child)) {
        consider_integral(fixed, child);
        continue;
      }
      push(std::move(fixed), std::move(child));
    }
    node->lp = LpSolution{};  // release memory held by the explored node
  }
  if (out.values.empty()) {
    out.status = MipStatus::infeasible;
    return out;
  }
  out.status = MipStatus::optimal;
  out.bound = out.objective;
  return out;
}

namespace {

// Calls visit(y) for every plan within the budget, in lexicographic order of
// the bit string y_1 y_2 ... (y_1 most significant).
template <typename Visit>
void for_each_plan(std::size_t nf, std::optional<std::size_t> budget, Visit visit) {
  if (nf > 20) throw std::invalid_argument("enumeration is limited to 20 facilities");
  const std::uint64_t total = std::uint64_t{1} << nf;
  for (std::uint64_t code = 0; code < total; ++code) {
    LocationDecision y(nf);
    for (std::size_t i = 0; i < nf; ++i) y.set(i, ((code >> (nf - 1 - i)) & 1u) != 0);
    if (budget && y.open_count() > *budget) continue;
    visit(y);
  }
}

double opening_cost(const Instance& instance, const LocationDecision& y) {
  double total = 0.0;
  for (std::size_t i = 0; i < instance.num_facilities(); ++i) total += instance.facility(i).open_cost * y.value(i);
  return total;
}

}  // namespace

OracleResult enumerate_oracle(const Instance& instance, const DemandModel& model, std::optional<std::size_t> budget) {
  OracleResult best;
  for_each_plan(instance.num_facilities(), budget, [&](const LocationDecision& y) {
    if (!ambiguity_feasible(instance, model, y).feasible) {
      ++best.skipped_infeasible;
      return;
    }
    const double value = opening_cost(instance, y) + worst_case_expectation(instance, model, y).value;
    ++best.evaluated;
    if (value < best.objective) {
      best.objective = value;
      best.y = y;
    }
  });
  return best;
}

OracleResult enumerate_sp(const Instance& instance, const ScenarioSet& scenarios, std::optional<std::size_t> budget) {
  scenarios.check(instance.num_customers());
  OracleResult best;
  for_each_plan(instance.num_facilities(), budget, [&](const LocationDecision& y) {
    double expected = 0.0;
    for (std::size_t w = 0; w < scenarios.size(); ++w)
      expected += scenarios.probability(w) * h_closed_form(instance, y, scenarios.demands[w]);
    const double value = opening_cost(instance, y) + expected;
    ++best.evaluated;
    if (value < best.objective) {
      best.objective = value;
      best.y = y;
    }
  });
  return best;
}

const char* to_string(Engine e) {
  switch (e) {
    case Engine::branch_and_bound: return "bnb";
    case Engine::enumeration: return "enum";
    case Engine::automatic: return "auto";
  }
  return "unknown";
}

Engine engine_from_string(const std::string& name) {
  if (name == "bnb") return Engine::branch_and_bound;
  if (name == "enum") return Engine::enumeration;
  if (name == "auto") return Engine::automatic;
  throw std::invalid_argument("unknown engine '" + name + "' (expected bnb, enum or auto)");
}

namespace {

Engine resolve(const PlanOptions& options, std::size_t facilities, std::size_t support = 0) {
  if (options.engine != Engine::automatic) return options.engine;
  const bool small = facilities <= options.auto_bnb_facilities && support <= options.auto_bnb_support;
  return small ? Engine::branch_and_bound : Engine::enumeration;
}

PlanResult from_oracle(const OracleResult& oracle, const char* method) {
  PlanResult r;
  r.method = method;
  r.engine = Engine::enumeration;
  r.y = oracle.y;
  r.objective = oracle.objective;
  r.plans_evaluated = oracle.evaluated;
  r.status = std::isfinite(oracle.objective) ? MipStatus::optimal : MipStatus::infeasible;
  return r;
}

void take_mip(PlanResult& r, const MilpModel& milp, const MipSolution& sol) {
  r.status = sol.status;
  r.node_count += sol.node_count;
  r.lp_iterations += sol.lp_iterations;
  r.variables = milp.num_variables();
  r.constraints = milp.num_constraints();
  if (sol.status == MipStatus::optimal || (sol.status == MipStatus::node_limit && !sol.values.empty())) {
    r.objective = sol.objective;
    r.y = decision_from(milp, sol.values);
  }
}

PlanResult solve_robust(const Instance& instance, const DemandModel& model, const PlanOptions& options,
                        const char* method) {
  if (resolve(options, instance.num_facilities(), model.support.size()) == Engine::enumeration)
    return from_oracle(enumerate_oracle(instance, model, options.budget), method);

  PlanResult r;
  r.method = method;
  r.engine = Engine::branch_and_bound;
  const DualBounds initial = options.bounds.value_or(DualBounds::uniform(instance.num_customers()));
  const DddrOptions build{.budget = options.budget, .with_cuts = options.with_cuts};
  for (;;) {
    const MilpModel milp = build_dddr(instance, model, initial.scaled(r.bound_scale), build);
    const MipSolution sol = branch_and_bound(milp, options.mip);
    take_mip(r, milp, sol);
    r.binding = sol.status == MipStatus::optimal ? binding_dual_bounds(milp, sol.values) : std::vector<std::string>{};
    if (r.binding.empty() || !options.double_on_binding || r.doublings >= options.max_doublings) break;
    r.bound_scale *= 2.0;
    ++r.doublings;
  }
  return r;
}

}  // namespace

PlanResult solve_dddr(const Instance& instance, const DemandModel& model, const PlanOptions& options) {
  return solve_robust(instance, model, options, "DDDR");
}

PlanResult solve_dr(const Instance& instance, const DemandModel& model, const PlanOptions& options) {
  return solve_robust(instance, model.without_dependency(), options, "DR");
}

PlanResult solve_sp(const Instance& instance, const ScenarioSet& scenarios, const PlanOptions& options) {
  const std::string method = "SP(" + std::to_string(scenarios.size()) + ")";
  if (resolve(options, instance.num_facilities()) == Engine::enumeration) {
    PlanResult r = from_oracle(enumerate_sp(instance, scenarios, options.budget), "");
    r.method = method;
    return r;
  }
  PlanResult r;
  r.method = method;
  r.engine = Engine::branch_and_bound;
  const MilpModel milp = build_sp_saa(instance, scenarios, options.budget);
  take_mip(r, milp, branch_and_bound(milp, options.mip));
  return r;
}

std::string external_solver_command() {
  const char* value = std::getenv("DDDR_EXTERNAL_SOLVER");
  return value ? std::string(value) : std::string();
}

ExternalResult external_solve(const std::string& command, const std::string& lp_path) {
  if (command.empty()) throw std::invalid_argument("no external solver command configured");
  std::string quoted = "'";
  for (char c : lp_path) quoted += c == '\'' ? std::string("'\\''") : std::string(1, c);
  quoted += "'";
  const std::string line = command + " " + quoted;
  std::FILE* pipe = popen(line.c_str(), "r");
  if (!pipe) throw std::runtime_error("could not start external solver: " + line);
  std::string output;
  char buffer[4096];
  while (std::size_t n = std::fread(buffer, 1, sizeof buffer, pipe)) output.append(buffer, n);
  const int rc = pclose(pipe);
  if (rc != 0) throw std::runtime_error("external solver exited with status " + std::to_string(rc) + ": " + line);
  ExternalResult result;
  try {
    const nlohmann::json doc = nlohmann::json::parse(output);
    result.status = doc.at("status").get<std::string>();
    result.objective = doc.value("objective", 0.0);
    if (doc.contains("values"))
      for (const auto& [name, value] : doc.at("values").items()) result.values[name] = value.get<double>();
  } catch (const nlohmann::json::exception& e) {
    throw std::runtime_error(std::string("unreadable external solver output: ") + e.what());
  }
  return result;
}

}  // namespace dddr
