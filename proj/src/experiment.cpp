#include "dddr/experiment.hpp"

#include <algorithm>
#include <cctype>
#include <cmath>
#include <cstdio>
#include <map>
#include <random>
#include <set>
#include <sstream>
#include <stdexcept>

#include "dddr/io.hpp"
#include "dddr/milp_builder.hpp"

namespace dddr {

using nlohmann::json;

void ExperimentConfig::validate() const {
  auto fail = [](const std::string& what) { throw std::invalid_argument("config: " + what); };
  if (facilities < 1) fail("facilities must be at least 1");
  if (customers < 1) fail("customers must be at least 1");
  if (layout != "random" && layout != "figure2") fail("layout must be 'random' or 'figure2'");
  if (layout == "figure2" && (facilities != 10 || customers != 20))
    fail("the figure2 layout has 10 facilities and 20 customers");
  if (seeds.empty()) fail("at least one seed is required");
  if (methods.empty()) fail("at least one method is required");
  for (const std::string& m : methods)
    if (m != "sp" && m != "dr" && m != "dddr") fail("unknown method '" + m + "' (expected sp, dr or dddr)");
  if (std::find(methods.begin(), methods.end(), "sp") != methods.end()) {
    if (sp_scenarios.empty()) fail("sp needs at least one scenario count");
    for (std::size_t n : sp_scenarios)
      if (n == 0) fail("sp scenario counts must be positive");
  }
  if (!(penalty >= 0.0) || !(revenue >= 0.0)) fail("penalty and revenue must be nonnegative");
  if (!(support.max > support.min) || support.points < 2) fail("support needs max > min and at least two points");
  if (!(support.min >= 0.0)) fail("support must be nonnegative");
  if (!(kappa >= 0.0 && kappa <= 1.0)) fail("kappa must lie in [0, 1]");
  if (lambda.kind == "distance") {
    if (!(lambda.scale > 0.0)) fail("lambda.scale must be positive");
    if (!(lambda.row_sum >= 0.0 && lambda.row_sum < 1.0)) fail("lambda.row_sum must lie in [0, 1)");
  } else if (lambda.kind == "rho_means") {
    if (lambda.rho < 1 || lambda.rho > facilities) fail("lambda.rho must lie in [1, facilities]");
    if (!(lambda.sigma_scale > 0.0 && lambda.sigma_scale < 1.0)) fail("lambda.sigma_scale must lie in (0, 1)");
  } else {
    fail("lambda.recipe must be 'distance' or 'rho_means'");
  }
  if (!(cv2 > 0.0)) fail("cv2 must be positive");
  if (!(cost_multiplier > 0.0)) fail("cost_multiplier must be positive");
  for (const auto& [name, r] : {std::pair{"coordinate", coordinate}, std::pair{"open_cost", open_cost},
                                std::pair{"capacity", capacity}, std::pair{"mean", mean}})
    if (!(r.hi >= r.lo)) fail(std::string(name) + " range is empty");
  if (!(open_cost.lo >= 0.0)) fail("open costs must be nonnegative");
  if (!(capacity.lo > 0.0)) fail("capacities must be positive");
  if (!(mean.lo > 0.0)) fail("mean demand must be positive");
  if (test.size == 0) fail("test.size must be positive");
  if (test.distribution == TestDistribution::perturbed && (test.reps == 0 || test.size % test.reps != 0))
    fail("test.size must be a multiple of test.reps");
  if (!(test.kappa >= 0.0 && test.kappa <= 1.0)) fail("test.kappa must lie in [0, 1]");
  if (!(dual_bound > 0.0) || !std::isfinite(dual_bound)) fail("dual_bound must be positive");
  engine_from_string(engine);
}

namespace {

json interval_json(const Interval& r) { return json::array({r.lo, r.hi}); }

Interval interval_from(const json& j) {
  if (!j.is_array() || j.size() != 2) throw std::invalid_argument("config: ranges are [lo, hi] pairs");
  return {j[0].get<double>(), j[1].get<double>()};
}

void reject_unknown(const json& doc, std::initializer_list<const char*> keys, const std::string& where) {
  std::set<std::string> known(keys.begin(), keys.end());
  for (const auto& [key, value] : doc.items())
    if (!known.count(key)) throw std::invalid_argument("config: unknown key '" + where + key + "'");
}

}  // namespace

json config_to_json(const ExperimentConfig& c) {
  json doc;
  doc["facilities"] = c.facilities;
  doc["customers"] = c.customers;
  doc["layout"] = c.layout;
  doc["seeds"] = c.seeds;
  doc["methods"] = c.methods;
  doc["sp_scenarios"] = c.sp_scenarios;
  doc["penalty"] = c.penalty;
  doc["revenue"] = c.revenue;
  doc["support"] = {{"min", c.support.min}, {"max", c.support.max}, {"points", c.support.points}};
  doc["kappa"] = c.kappa;
  doc["budget"] = c.budget ? json(*c.budget) : json(nullptr);
  if (c.lambda.kind == "distance")
    doc["lambda"] = {{"recipe", "distance"}, {"scale", c.lambda.scale}, {"row_sum", c.lambda.row_sum}};
  else
    doc["lambda"] = {{"recipe", c.lambda.kind}, {"rho", c.lambda.rho}, {"sigma_scale", c.lambda.sigma_scale}};
  doc["cv2"] = c.cv2;
  doc["cost_multiplier"] = c.cost_multiplier;
  doc["ranges"] = {{"coordinate", interval_json(c.coordinate)},
                   {"open_cost", interval_json(c.open_cost)},
                   {"capacity", interval_json(c.capacity)},
                   {"mean", interval_json(c.mean)}};
  doc["test"] = {{"distribution", to_string(c.test.distribution)},
                 {"size", c.test.size},
                 {"kappa", c.test.kappa},
                 {"reps", c.test.reps}};
  doc["dual_bound"] = c.dual_bound;
  doc["cuts"] = c.cuts;
  doc["engine"] = c.engine;
  doc["export_lp"] = c.export_lp;
  return doc;
}

ExperimentConfig config_from_json(const json& doc) {
  if (!doc.is_object()) throw std::invalid_argument("config: expected a JSON object");
  reject_unknown(doc,
                 {"facilities", "customers", "layout", "seeds", "methods", "sp_scenarios", "penalty", "revenue",
                  "support", "kappa", "budget", "lambda", "cv2", "cost_multiplier", "ranges", "test", "dual_bound",
                  "cuts", "engine", "export_lp"},
                 "");
  ExperimentConfig c;
  try {
    if (doc.contains("facilities")) c.facilities = doc["facilities"].get<std::size_t>();
    if (doc.contains("customers")) c.customers = doc["customers"].get<std::size_t>();
    if (doc.contains("layout")) c.layout = doc["layout"].get<std::string>();
    if (doc.contains("seeds")) c.seeds = doc["seeds"].get<std::vector<std::uint64_t>>();
    if (doc.contains("methods")) c.methods = doc["methods"].get<std::vector<std::string>>();
    if (doc.contains("sp_scenarios")) c.sp_scenarios = doc["sp_scenarios"].get<std::vector<std::size_t>>();
    if (doc.contains("penalty")) c.penalty = doc["penalty"].get<double>();
    if (doc.contains("revenue")) c.revenue = doc["revenue"].get<double>();
    if (doc.contains("support")) {
      const json& s = doc["support"];
      reject_unknown(s, {"min", "max", "points"}, "support.");
      c.support.min = s.value("min", c.support.min);
      c.support.max = s.value("max", c.support.max);
      c.support.points = s.value("points", c.support.points);
    }
    if (doc.contains("kappa")) c.kappa = doc["kappa"].get<double>();
    if (doc.contains("budget") && !doc["budget"].is_null()) c.budget = doc["budget"].get<std::size_t>();
    if (doc.contains("lambda")) {
      const json& l = doc["lambda"];
      reject_unknown(l, {"recipe", "scale", "row_sum", "rho", "sigma_scale"}, "lambda.");
      c.lambda.kind = l.value("recipe", c.lambda.kind);
      c.lambda.scale = l.value("scale", c.lambda.scale);
      c.lambda.row_sum = l.value("row_sum", c.lambda.row_sum);
      c.lambda.rho = l.value("rho", c.lambda.rho);
      c.lambda.sigma_scale = l.value("sigma_scale", c.lambda.sigma_scale);
    }
    if (doc.contains("cv2")) c.cv2 = doc["cv2"].get<double>();
    if (doc.contains("cost_multiplier")) c.cost_multiplier = doc["cost_multiplier"].get<double>();
    if (doc.contains("ranges")) {
      const json& r = doc["ranges"];
      reject_unknown(r, {"coordinate", "open_cost", "capacity", "mean"}, "ranges.");
      if (r.contains("coordinate")) c.coordinate = interval_from(r["coordinate"]);
      if (r.contains("open_cost")) c.open_cost = interval_from(r["open_cost"]);
      if (r.contains("capacity")) c.capacity = interval_from(r["capacity"]);
      if (r.contains("mean")) c.mean = interval_from(r["mean"]);
    }
    if (doc.contains("test")) {
      const json& t = doc["test"];
      reject_unknown(t, {"distribution", "size", "kappa", "reps"}, "test.");
      if (t.contains("distribution")) c.test.distribution = test_distribution_from_string(t["distribution"].get<std::string>());
      c.test.size = t.value("size", c.test.size);
      c.test.kappa = t.value("kappa", c.test.kappa);
      c.test.reps = t.value("reps", c.test.reps);
    }
    if (doc.contains("dual_bound")) c.dual_bound = doc["dual_bound"].get<double>();
    if (doc.contains("cuts")) c.cuts = doc["cuts"].get<bool>();
    if (doc.contains("engine")) c.engine = doc["engine"].get<std::string>();
    if (doc.contains("export_lp")) c.export_lp = doc["export_lp"].get<bool>();
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("config: ") + e.what());
  }
  c.validate();
  return c;
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = config_to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ull;
  }
  char buf[17];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

Layout fixture_figure2() {
  Layout l;
  l.facilities = {{54, 27}, {42, 84}, {0, 12}, {67, 82}, {13, 57}, {89, 20}, {18, 10}, {21, 97}, {81, 17}, {81, 27}};
  l.customers = {{43, 94}, {81, 33}, {17, 37}, {0, 25},  {79, 1},  {59, 60}, {10, 38}, {3, 89},  {98, 5},  {89, 57},
                 {74, 63}, {58, 2},  {21, 54}, {76, 25}, {28, 85}, {97, 88}, {35, 59}, {35, 34}, {17, 23}, {4, 50}};
  return l;
}

Problem generate_instance(const ExperimentConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  auto draw = [&](const Interval& r) { return r.lo == r.hi ? r.lo : std::uniform_real_distribution<double>(r.lo, r.hi)(rng); };
  const Layout fixed = config.layout == "figure2" ? fixture_figure2() : Layout{};

  std::vector<Facility> facilities;
  for (std::size_t i = 0; i < config.facilities; ++i) {
    Facility f;
    f.id = static_cast<int>(i + 1);
    if (fixed.facilities.empty()) {
      f.coord.x = draw(config.coordinate);
      f.coord.y = draw(config.coordinate);
    } else {
      f.coord = fixed.facilities[i];
    }
    f.open_cost = draw(config.open_cost);
    f.capacity = draw(config.capacity);
    facilities.push_back(f);
  }
  std::vector<Customer> customers;
  for (std::size_t j = 0; j < config.customers; ++j) {
    Customer c;
    c.id = static_cast<int>(j + 1);
    if (fixed.customers.empty()) {
      c.coord.x = draw(config.coordinate);
      c.coord.y = draw(config.coordinate);
    } else {
      c.coord = fixed.customers[j];
    }
    c.penalty = config.penalty;
    c.revenue = config.revenue;
    customers.push_back(c);
  }
  Instance instance = Instance::euclidean(std::move(facilities), std::move(customers), config.cost_multiplier);

  DemandModel dm;
  for (std::size_t j = 0; j < config.customers; ++j) {
    dm.bar_mu.push_back(draw(config.mean));
    dm.bar_sigma.push_back(std::sqrt(config.cv2) * dm.bar_mu.back());
  }
  if (config.lambda.kind == "rho_means") {
    const DependencyWeights w = lambda_rho_means(instance, config.lambda.rho, config.lambda.sigma_scale);
    dm.lambda_mu = w.lambda_mu;
    dm.lambda_sigma = w.lambda_sigma;
  } else if (config.lambda.row_sum > 0.0) {
    const DependencyWeights w = lambda_from_distance(instance, config.lambda.scale, config.lambda.row_sum);
    dm.lambda_mu = w.lambda_mu;
    dm.lambda_sigma = w.lambda_sigma;
  } else {
    dm.lambda_mu.assign(config.customers, std::vector<double>(config.facilities, 0.0));
    dm.lambda_sigma = dm.lambda_mu;
  }
  std::vector<double> pts(config.support.points);
  const double span = config.support.max - config.support.min;
  for (std::size_t k = 0; k < pts.size(); ++k)
    pts[k] = config.support.min + span * static_cast<double>(k) / static_cast<double>(pts.size() - 1);
  dm.support = Support(std::move(pts));
  dm = apply_robustness_level(dm, config.kappa);
  return {std::move(instance), std::move(dm)};
}

PlanOptions plan_options(const ExperimentConfig& config, std::size_t customers) {
  PlanOptions o;
  o.engine = engine_from_string(config.engine);
  o.budget = config.budget;
  o.with_cuts = config.cuts;
  o.bounds = DualBounds::uniform(customers, config.dual_bound);
  return o;
}

CompareConfig compare_config(const ExperimentConfig& config, std::uint64_t seed) {
  CompareConfig c;
  auto wants = [&](const char* m) { return std::find(config.methods.begin(), config.methods.end(), m) != config.methods.end(); };
  if (wants("sp")) c.sp_sizes = config.sp_scenarios;
  else c.sp_sizes.clear();
  c.include_dr = wants("dr");
  c.include_dddr = wants("dddr");
  c.test = config.test;
  c.train_seed = seed * 2 + 1;
  c.test_seed = seed * 2 + 2;
  c.plan = plan_options(config, config.customers);
  return c;
}

json plan_to_json(const Instance& instance, const PlanResult& plan) {
  json doc;
  doc["method"] = plan.method;
  std::vector<int> ids;
  for (std::size_t i : plan.y.open_indices()) ids.push_back(instance.facility(i).id);
  std::sort(ids.begin(), ids.end());
  doc["open_facilities"] = ids;
  doc["y"] = plan.y.to_string();
  doc["objective"] = plan.objective;
  doc["status"] = to_string(plan.status);
  doc["engine"] = to_string(plan.engine);
  doc["node_count"] = plan.node_count;
  doc["lp_iterations"] = plan.lp_iterations;
  doc["plans_evaluated"] = plan.plans_evaluated;
  doc["bound_scale"] = plan.bound_scale;
  doc["doublings"] = plan.doublings;
  doc["binding_dual_bounds"] = plan.binding;
  doc["variables"] = plan.variables;
  doc["constraints"] = plan.constraints;
  return doc;
}

LocationDecision plan_from_json(const json& doc, const Instance& instance) {
  LocationDecision y(instance.num_facilities());
  if (doc.contains("y")) {
    const std::string bits = doc.at("y").get<std::string>();
    if (bits.size() != y.size()) throw std::invalid_argument("plan does not match the number of facilities");
    for (std::size_t i = 0; i < bits.size(); ++i) {
      if (bits[i] != '0' && bits[i] != '1') throw std::invalid_argument("plan bits must be 0 or 1");
      y.set(i, bits[i] == '1');
    }
    return y;
  }
  for (int id : doc.at("open_facilities").get<std::vector<int>>()) {
    bool found = false;
    for (std::size_t i = 0; i < instance.num_facilities(); ++i)
      if (instance.facility(i).id == id) {
        y.set(i, true);
        found = true;
      }
    if (!found) throw std::invalid_argument("plan names unknown facility " + std::to_string(id));
  }
  return y;
}

namespace {

std::string file_stem(const std::string& method) {
  std::string s;
  for (char c : method) {
    if (std::isalnum(static_cast<unsigned char>(c))) s.push_back(static_cast<char>(std::tolower(static_cast<unsigned char>(c))));
    else if (c == '(') s.push_back('_');
  }
  return s;
}

std::string fmt(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.12g", v == 0.0 ? 0.0 : v);
  return buf;
}

}  // namespace

RunSummary run(const ExperimentConfig& config, const std::filesystem::path& out_dir) {
  config.validate();
  RunSummary summary;
  summary.directory = out_dir;
  std::filesystem::create_directories(out_dir);
  auto write = [&](const std::filesystem::path& rel, const std::string& text) {
    write_file_atomic(out_dir / rel, text);
    summary.files.push_back(rel);
  };

  // method -> statistic -> per-seed values, in first-seen order
  std::vector<std::string> method_order, stat_order;
  std::map<std::string, std::map<std::string, std::vector<double>>> collected;

  for (std::uint64_t seed : config.seeds) {
    const std::filesystem::path dir = "seed_" + std::to_string(seed);
    const Problem problem = generate_instance(config, seed);
    const auto issues = validate(problem.instance, problem.demand);
    if (!issues.empty()) throw std::runtime_error("generated instance is invalid: " + issues.front().entity + ": " + issues.front().rule);
    write(dir / "instance.json", problem_to_json(problem).dump(2) + "\n");

    Comparison cmp = compare_methods(problem.instance, problem.demand, compare_config(config, seed));
    for (const MethodOutcome& m : cmp.methods)
      write(dir / "plans" / (file_stem(m.plan.method) + ".json"), plan_to_json(problem.instance, m.plan).dump(2) + "\n");
    const std::string csv = comparison_csv(cmp);
    write(dir / "comparison.csv", csv);
    write(dir / "table.json", comparison_table(cmp).dump(2) + "\n");

    if (config.export_lp) {
      const DualBounds bounds = DualBounds::uniform(config.customers, config.dual_bound);
      const DddrOptions opts{.budget = config.budget, .with_cuts = config.cuts};
      if (cmp.find("DDDR")) write(dir / "lp" / "dddr.lp", export_lp_text(build_dddr(problem.instance, problem.demand, bounds, opts)));
      if (cmp.find("DR")) write(dir / "lp" / "dr.lp", export_lp_text(build_dr(problem.instance, problem.demand, bounds, opts)));
    }

    std::istringstream rows(csv);
    std::string line;
    std::getline(rows, line);  // header
    while (std::getline(rows, line)) {
      const auto a = line.find(','), b = line.rfind(',');
      const std::string method = line.substr(0, a), stat = line.substr(a + 1, b - a - 1);
      if (std::find(method_order.begin(), method_order.end(), method) == method_order.end()) method_order.push_back(method);
      if (std::find(stat_order.begin(), stat_order.end(), stat) == stat_order.end()) stat_order.push_back(stat);
      collected[method][stat].push_back(std::stod(line.substr(b + 1)));
    }
    summary.comparisons.push_back(std::move(cmp));
  }

  // means over seeds, summed in seed order
  std::ostringstream os;
  os << "method,statistic,value\n";
  for (const std::string& method : method_order)
    for (const std::string& stat : stat_order) {
      const auto& values = collected[method][stat];
      double total = 0.0;
      for (double v : values) total += v;
      os << method << "," << stat << "," << fmt(total / static_cast<double>(values.size())) << "\n";
    }
  write("summary.csv", os.str());

  json manifest;
  manifest["version"] = kVersion;
  manifest["config_hash"] = config_hash(config);
  manifest["config"] = config_to_json(config);
  manifest["seeds"] = config.seeds;
  json seeds = json::array();
  for (std::uint64_t seed : config.seeds) {
    const CompareConfig cc = compare_config(config, seed);
    seeds.push_back({{"instance", seed}, {"train", cc.train_seed}, {"test", cc.test_seed}});
  }
  manifest["derived_seeds"] = seeds;
  json files = json::array();
  for (const auto& f : summary.files) files.push_back(f.generic_string());
  manifest["files"] = files;
  write("manifest.json", manifest.dump(2) + "\n");
  return summary;
}

}  // namespace dddr
