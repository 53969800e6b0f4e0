#include "dddr/io.hpp"

#include <fstream>
#include <sstream>
#include <stdexcept>

namespace dddr {

using nlohmann::json;

json problem_to_json(const Problem& problem) {
  const Instance& inst = problem.instance;
  const DemandModel& dm = problem.demand;
  json doc;
  doc["facilities"] = json::array();
  for (const Facility& f : inst.facilities())
    doc["facilities"].push_back({{"id", f.id}, {"x", f.coord.x}, {"y", f.coord.y}, {"f", f.open_cost}, {"C", f.capacity}});
  doc["customers"] = json::array();
  for (const Customer& c : inst.customers())
    doc["customers"].push_back({{"id", c.id}, {"x", c.coord.x}, {"y", c.coord.y}, {"p", c.penalty}, {"r", c.revenue}});
  doc["cost"] = inst.cost_matrix();

  json demand;
  demand["bar_mu"] = dm.bar_mu;
  demand["bar_sigma"] = dm.bar_sigma;
  demand["lambda_mu"] = dm.lambda_mu;
  demand["lambda_sigma"] = dm.lambda_sigma;
  double lo = 0, hi = 0, step = 0;
  if (dm.support.as_range(lo, hi, step))
    demand["support"] = {{"min", lo}, {"max", hi}, {"step", step}};
  else
    demand["support"] = {{"values", dm.support.values()}};
  demand["eps_mu"] = dm.eps_mu;
  demand["eps_lo"] = dm.eps_sigma_lo;
  demand["eps_hi"] = dm.eps_sigma_hi;
  doc["demand"] = std::move(demand);
  return doc;
}

Problem problem_from_json(const json& doc) {
  std::vector<Facility> facilities;
  for (const json& f : doc.at("facilities"))
    facilities.push_back(Facility{f.at("id").get<int>(), {f.at("x").get<double>(), f.at("y").get<double>()},
                                  f.at("f").get<double>(), f.at("C").get<double>()});
  std::vector<Customer> customers;
  for (const json& c : doc.at("customers"))
    customers.push_back(Customer{c.at("id").get<int>(), {c.at("x").get<double>(), c.at("y").get<double>()},
                                 c.at("p").get<double>(), c.at("r").get<double>()});
  Matrix cost = doc.at("cost").get<Matrix>();

  const json& d = doc.at("demand");
  DemandModel dm;
  dm.bar_mu = d.at("bar_mu").get<std::vector<double>>();
  dm.bar_sigma = d.at("bar_sigma").get<std::vector<double>>();
  dm.lambda_mu = d.at("lambda_mu").get<Matrix>();
  dm.lambda_sigma = d.at("lambda_sigma").get<Matrix>();
  const json& s = d.at("support");
  if (s.contains("values"))
    dm.support = Support(s.at("values").get<std::vector<double>>());
  else
    dm.support = Support::range(s.at("min").get<double>(), s.at("max").get<double>(), s.at("step").get<double>());
  dm.eps_mu = d.at("eps_mu").get<std::vector<double>>();
  dm.eps_sigma_lo = d.at("eps_lo").get<std::vector<double>>();
  dm.eps_sigma_hi = d.at("eps_hi").get<std::vector<double>>();
  return Problem{Instance(std::move(facilities), std::move(customers), std::move(cost)), std::move(dm)};
}

void write_problem(const std::filesystem::path& path, const Problem& problem) {
  write_file_atomic(path, problem_to_json(problem).dump(2) + "\n");
}

Problem read_problem(const std::filesystem::path& path) { return problem_from_json(json::parse(read_file(path))); }

void write_file_atomic(const std::filesystem::path& path, const std::string& content) {
  if (path.has_parent_path()) std::filesystem::create_directories(path.parent_path());
  std::filesystem::path tmp = path;
  tmp += ".tmp";
  {
    std::ofstream out(tmp, std::ios::binary | std::ios::trunc);
    if (!out) throw std::runtime_error("cannot write " + tmp.string());
    out << content;
    if (!out) throw std::runtime_error("write failed for " + tmp.string());
  }
  std::filesystem::rename(tmp, path);
}

std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw std::runtime_error("cannot read " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

}  // namespace dddr
