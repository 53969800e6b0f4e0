// dddr: generate instances, solve and evaluate location plans, run comparisons.

#include <cstdio>
#include <exception>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "dddr/benchmarks.hpp"
#include "dddr/experiment.hpp"
#include "dddr/io.hpp"
#include "dddr/milp_builder.hpp"

using namespace dddr;
using nlohmann::json;

namespace {

// Flags that override configuration fields; names follow the config keys.
struct Overrides {
  std::vector<std::size_t> size;
  std::optional<std::size_t> facilities, customers;
  std::optional<std::string> layout;
  std::vector<std::uint64_t> seeds;
  std::vector<std::string> methods;
  std::vector<std::size_t> sp_scenarios;
  std::optional<double> penalty, revenue, kappa, cv2, cost_multiplier, dual_bound;
  std::optional<double> support_min, support_max;
  std::optional<std::size_t> support_points, budget;
  std::optional<std::string> lambda_recipe;
  std::optional<double> lambda_scale, row_sum, sigma_scale;
  std::optional<std::size_t> rho;
  std::optional<std::string> test_dist;
  std::optional<std::size_t> test_size, test_reps;
  std::optional<double> test_kappa;
  std::optional<std::string> cuts, engine;
  bool export_lp = false;
};

void add_instance_flags(CLI::App* app, Overrides& o) {
  app->add_option("--size", o.size, "Facilities and customers, as I,J")->delimiter(',')->expected(2);
  app->add_option("--facilities", o.facilities, "Number of candidate facilities");
  app->add_option("--customers", o.customers, "Number of customers");
  app->add_option("--layout", o.layout, "random or figure2")->check(CLI::IsMember({"random", "figure2"}));
  app->add_option("--penalty", o.penalty, "Unit penalty for unmet demand");
  app->add_option("--revenue", o.revenue, "Unit revenue");
  app->add_option("--support-min", o.support_min, "Smallest demand value");
  app->add_option("--support-max", o.support_max, "Largest demand value");
  app->add_option("--support-points", o.support_points, "Number of evenly spaced demand values");
  app->add_option("--kappa", o.kappa, "Robustness level of the ambiguity set");
  app->add_option("--lambda-recipe", o.lambda_recipe, "distance or rho_means")
      ->check(CLI::IsMember({"distance", "rho_means"}));
  app->add_option("--lambda-scale", o.lambda_scale, "Distance decay of the dependency weights");
  app->add_option("--row-sum", o.row_sum, "Dependency weight row sum (0 removes the dependency)");
  app->add_option("--rho", o.rho, "Nearest facilities per customer for rho_means");
  app->add_option("--sigma-scale", o.sigma_scale, "Factor on the variance weights for rho_means");
  app->add_option("--cv2", o.cv2, "Squared coefficient of variation of the empirical demand");
  app->add_option("--cost-multiplier", o.cost_multiplier, "Transport cost per unit distance");
}

void add_run_flags(CLI::App* app, Overrides& o) {
  app->add_option("--seeds", o.seeds, "Instance seeds")->delimiter(',');
  app->add_option("--methods", o.methods, "Any of sp, dr, dddr")->delimiter(',');
  app->add_option("--sp-scenarios", o.sp_scenarios, "Training set sizes for sp")->delimiter(',');
  app->add_option("--budget", o.budget, "At most this many open facilities");
  app->add_option("--test-dist", o.test_dist, "normal, gamma or perturbed")
      ->check(CLI::IsMember({"normal", "gamma", "perturbed"}));
  app->add_option("--test-size", o.test_size, "Test scenarios per plan");
  app->add_option("--test-kappa", o.test_kappa, "Perturbation level of the perturbed test set");
  app->add_option("--test-reps", o.test_reps, "Parameter blocks of the perturbed test set");
  app->add_option("--dual-bound", o.dual_bound, "Initial upper bound on the dual multipliers");
  app->add_option("--cuts", o.cuts, "Ambiguity-set cuts")->check(CLI::IsMember({"on", "off"}));
  app->add_option("--engine", o.engine, "bnb, enum or auto")->check(CLI::IsMember({"bnb", "enum", "auto"}));
  app->add_flag("--export-lp", o.export_lp, "Write the robust models as LP files");
}

template <typename T, typename U>
void set_if(T& field, const std::optional<U>& value) {
  if (value) field = *value;
}

void apply(ExperimentConfig& c, const Overrides& o) {
  if (!o.size.empty()) {
    c.facilities = o.size[0];
    c.customers = o.size[1];
  }
  set_if(c.facilities, o.facilities);
  set_if(c.customers, o.customers);
  set_if(c.layout, o.layout);
  if (!o.seeds.empty()) c.seeds = o.seeds;
  if (!o.methods.empty()) c.methods = o.methods;
  if (!o.sp_scenarios.empty()) c.sp_scenarios = o.sp_scenarios;
  set_if(c.penalty, o.penalty);
  set_if(c.revenue, o.revenue);
  set_if(c.support.min, o.support_min);
  set_if(c.support.max, o.support_max);
  set_if(c.support.points, o.support_points);
  set_if(c.kappa, o.kappa);
  if (o.budget) c.budget = *o.budget;
  set_if(c.lambda.kind, o.lambda_recipe);
  set_if(c.lambda.scale, o.lambda_scale);
  set_if(c.lambda.row_sum, o.row_sum);
  set_if(c.lambda.rho, o.rho);
  set_if(c.lambda.sigma_scale, o.sigma_scale);
  set_if(c.cv2, o.cv2);
  set_if(c.cost_multiplier, o.cost_multiplier);
  if (o.test_dist) c.test.distribution = test_distribution_from_string(*o.test_dist);
  set_if(c.test.size, o.test_size);
  set_if(c.test.kappa, o.test_kappa);
  set_if(c.test.reps, o.test_reps);
  set_if(c.dual_bound, o.dual_bound);
  if (o.cuts) c.cuts = *o.cuts == "on";
  set_if(c.engine, o.engine);
  if (o.export_lp) c.export_lp = true;
  c.validate();
}

ExperimentConfig load_config(const std::string& path, const Overrides& o) {
  ExperimentConfig c = path.empty() ? ExperimentConfig{} : config_from_json(json::parse(read_file(path)));
  apply(c, o);
  return c;
}

void emit(const std::string& out, const std::string& text) {
  if (out.empty() || out == "-") std::cout << text;
  else write_file_atomic(out, text);
}

// Options shared by solve and export-lp.
struct ModelFlags {
  std::string instance;
  std::string method = "dddr";
  std::size_t scenarios = 100;
  std::uint64_t seed = 1;
  std::optional<std::size_t> budget;
  std::string cuts = "off";
  std::string engine = "auto";
  double dual_bound = 100.0;
};

void add_model_flags(CLI::App* app, ModelFlags& m) {
  app->add_option("--instance", m.instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  app->add_option("--method", m.method, "sp, dr or dddr")->check(CLI::IsMember({"sp", "dr", "dddr"}));
  app->add_option("--scenarios", m.scenarios, "Training scenarios for sp")->check(CLI::PositiveNumber);
  app->add_option("--seed", m.seed, "Training seed for sp; compare uses 2s+1 for instance seed s");
  app->add_option("--budget", m.budget, "At most this many open facilities");
  app->add_option("--cuts", m.cuts, "Ambiguity-set cuts")->check(CLI::IsMember({"on", "off"}));
  app->add_option("--engine", m.engine, "bnb, enum or auto")->check(CLI::IsMember({"bnb", "enum", "auto"}));
  app->add_option("--dual-bound", m.dual_bound, "Initial upper bound on the dual multipliers")
      ->check(CLI::PositiveNumber);
}

ScenarioSet training(const Problem& p, const ModelFlags& m) {
  return gen_training(p.demand, m.scenarios, derive_seed(m.seed, m.scenarios));
}

MilpModel build_model(const Problem& p, const ModelFlags& m) {
  if (m.method == "sp") return build_sp_saa(p.instance, training(p, m), m.budget);
  const DualBounds bounds = DualBounds::uniform(p.instance.num_customers(), m.dual_bound);
  const DddrOptions opts{.budget = m.budget, .with_cuts = m.cuts == "on"};
  return m.method == "dr" ? build_dr(p.instance, p.demand, bounds, opts) : build_dddr(p.instance, p.demand, bounds, opts);
}

std::string fixture_csv() {
  const Layout l = fixture_figure2();
  std::string out = "kind,id,x,y\n";
  char line[96];
  for (std::size_t i = 0; i < l.facilities.size(); ++i) {
    std::snprintf(line, sizeof line, "facility,%zu,%g,%g\n", i + 1, l.facilities[i].x, l.facilities[i].y);
    out += line;
  }
  for (std::size_t j = 0; j < l.customers.size(); ++j) {
    std::snprintf(line, sizeof line, "customer,%zu,%g,%g\n", j + 1, l.customers[j].x, l.customers[j].y);
    out += line;
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Decision-dependent distributionally robust facility location"};
  app.require_subcommand(1);
  app.set_version_flag("--version", kVersion);

  // gen
  Overrides gen_o;
  std::string gen_config, gen_out;
  std::optional<std::uint64_t> gen_seed;
  CLI::App* gen = app.add_subcommand("gen", "Generate a seeded random instance");
  gen->add_option("--config", gen_config, "Experiment config JSON")->check(CLI::ExistingFile);
  gen->add_option("--seed", gen_seed, "Instance seed (default: first config seed)");
  gen->add_option("--out", gen_out, "Instance JSON path ('-' for stdout)")->required();
  add_instance_flags(gen, gen_o);

  // fixture
  Overrides fix_o;
  std::string fix_out;
  std::uint64_t fix_seed = 1;
  CLI::App* fixture = app.add_subcommand("fixture", "Case-study layout: print the coordinates or write an instance on it");
  fixture->add_option("--out", fix_out, "Write an instance on the fixed layout (costs and capacities drawn with --seed)");
  fixture->add_option("--seed", fix_seed, "Seed for the unpublished parameters");
  add_instance_flags(fixture, fix_o);

  // solve
  ModelFlags solve_m;
  std::string solve_out, solve_lp;
  CLI::App* solve = app.add_subcommand("solve", "Solve for a location plan");
  add_model_flags(solve, solve_m);
  solve->add_option("--out", solve_out, "Plan JSON path (stdout when omitted)");
  solve->add_option("--lp", solve_lp, "Also write the model as an LP file");

  // export-lp
  ModelFlags lp_m;
  std::string lp_out;
  CLI::App* export_lp = app.add_subcommand("export-lp", "Write the MILP in LP format");
  add_model_flags(export_lp, lp_m);
  export_lp->add_option("--out", lp_out, "LP path ('-' for stdout)")->required();

  // evaluate
  std::string ev_instance, ev_plan, ev_dist = "normal", ev_out;
  std::size_t ev_n = 1000, ev_reps = 10;
  std::uint64_t ev_seed = 2;
  double ev_kappa = 0.0;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Out-of-sample statistics of a plan");
  evaluate->add_option("--instance", ev_instance, "Instance JSON")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--plan", ev_plan, "Plan JSON from solve")->required()->check(CLI::ExistingFile);
  evaluate->add_option("--dist", ev_dist, "normal, gamma or perturbed")
      ->check(CLI::IsMember({"normal", "gamma", "perturbed"}));
  evaluate->add_option("--n", ev_n, "Test scenarios")->check(CLI::PositiveNumber);
  evaluate->add_option("--seed", ev_seed, "Test seed");
  evaluate->add_option("--kappa", ev_kappa, "Perturbation level (perturbed only)");
  evaluate->add_option("--reps", ev_reps, "Parameter blocks (perturbed only)")->check(CLI::PositiveNumber);
  evaluate->add_option("--out", ev_out, "CSV path (stdout when omitted)");

  // compare
  Overrides cmp_o;
  std::string cmp_config, cmp_out;
  CLI::App* compare = app.add_subcommand("compare", "Run the full pipeline and write a run directory");
  compare->add_option("--config", cmp_config, "Experiment config JSON")->check(CLI::ExistingFile);
  compare->add_option("--out", cmp_out, "Run directory")->required();
  add_instance_flags(compare, cmp_o);
  add_run_flags(compare, cmp_o);

  CLI11_PARSE(app, argc, argv);

  try {
    if (*gen) {
      const ExperimentConfig c = load_config(gen_config, gen_o);
      const Problem p = generate_instance(c, gen_seed ? *gen_seed : c.seeds.front());
      emit(gen_out, problem_to_json(p).dump(2) + "\n");
    } else if (*fixture) {
      if (fix_out.empty()) {
        std::cout << fixture_csv();
      } else {
        Overrides o = fix_o;
        o.layout = "figure2";
        ExperimentConfig c;
        apply(c, o);
        emit(fix_out, problem_to_json(generate_instance(c, fix_seed)).dump(2) + "\n");
      }
    } else if (*solve) {
      const Problem p = read_problem(solve_m.instance);
      PlanOptions opts;
      opts.engine = engine_from_string(solve_m.engine);
      opts.budget = solve_m.budget;
      opts.with_cuts = solve_m.cuts == "on";
      opts.bounds = DualBounds::uniform(p.instance.num_customers(), solve_m.dual_bound);
      PlanResult r;
      if (solve_m.method == "sp") r = solve_sp(p.instance, training(p, solve_m), opts);
      else if (solve_m.method == "dr") r = solve_dr(p.instance, p.demand, opts);
      else r = solve_dddr(p.instance, p.demand, opts);
      if (!solve_lp.empty()) write_file_atomic(solve_lp, export_lp_text(build_model(p, solve_m)));
      emit(solve_out, plan_to_json(p.instance, r).dump(2) + "\n");
      if (r.status != MipStatus::optimal) {
        std::cerr << "error: no optimal plan (" << to_string(r.status) << ")\n";
        return 1;
      }
      if (!r.binding.empty())
        std::cerr << "warning: " << r.binding.size() << " dual bounds still binding; raise --dual-bound\n";
    } else if (*export_lp) {
      emit(lp_out, export_lp_text(build_model(read_problem(lp_m.instance), lp_m)));
    } else if (*evaluate) {
      const Problem p = read_problem(ev_instance);
      const json plan_doc = json::parse(read_file(ev_plan));
      MethodOutcome m;
      m.plan.y = plan_from_json(plan_doc, p.instance);
      m.plan.method = plan_doc.value("method", std::string("plan"));
      m.plan.objective = plan_doc.value("objective", 0.0);
      TestSetSpec spec;
      spec.distribution = test_distribution_from_string(ev_dist);
      spec.size = ev_n;
      spec.kappa = ev_kappa;
      spec.reps = ev_reps;
      m.report = evaluate_plan(p.instance, m.plan.y, gen_test_set(p.demand, m.plan.y, spec, ev_seed));
      Comparison single;
      single.methods.push_back(std::move(m));
      emit(ev_out, comparison_csv(single));
    } else if (*compare) {
      const ExperimentConfig c = load_config(cmp_config, cmp_o);
      const RunSummary s = run(c, cmp_out);
      std::cout << read_file(s.directory / "summary.csv");
      std::cerr << "wrote " << s.files.size() << " files to " << s.directory.string() << "\n";
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
