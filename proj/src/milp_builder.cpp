#include "dddr/milp_builder.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <map>
#include <set>
#include <sstream>
#include <stdexcept>

namespace dddr {

void ScenarioSet::check(std::size_t customers) const {
  if (demands.empty()) throw std::invalid_argument("scenario set is empty");
  for (const auto& d : demands) {
    if (d.size() != customers) throw std::invalid_argument("scenario needs one demand per customer");
    for (double v : d)
      if (!(v >= 0.0)) throw std::invalid_argument("scenario demands must be nonnegative");
  }
  if (!probabilities.empty()) {
    if (probabilities.size() != demands.size()) throw std::invalid_argument("one probability per scenario required");
    double total = 0.0;
    for (double p : probabilities) {
      if (!(p >= 0.0)) throw std::invalid_argument("scenario probabilities must be nonnegative");
      total += p;
    }
    if (std::abs(total - 1.0) > 1e-9) throw std::invalid_argument("scenario probabilities must sum to one");
  }
}

DualBounds DualBounds::uniform(std::size_t customers, double value) {
  DualBounds b;
  b.ub_delta1.assign(customers, value);
  b.ub_delta2.assign(customers, value);
  b.ub_gamma1.assign(customers, value);
  b.ub_gamma2.assign(customers, value);
  return b;
}

DualBounds DualBounds::scaled(double factor) const {
  DualBounds b = *this;
  for (auto* v : {&b.ub_delta1, &b.ub_delta2, &b.ub_gamma1, &b.ub_gamma2})
    for (double& x : *v) x *= factor;
  return b;
}

void DualBounds::check(std::size_t customers) const {
  for (const auto* v : {&ub_delta1, &ub_delta2, &ub_gamma1, &ub_gamma2}) {
    if (v->size() != customers) throw std::invalid_argument("dual bounds need one entry per customer");
    for (double x : *v)
      if (!(x > 0.0) || !std::isfinite(x)) throw std::invalid_argument("dual bounds must be positive and finite");
  }
}

namespace {

std::string idx(std::size_t i) { return std::to_string(i + 1); }

// Terms with zero coefficients are dropped so the rows stay sparse.
Constraint row(std::string name, std::initializer_list<Term> terms, Sense sense, double rhs) {
  Constraint c{std::move(name), {}, sense, rhs};
  for (const Term& t : terms)
    if (t.coeff != 0.0) c.terms.push_back(t);
  return c;
}

}  // namespace

std::vector<Constraint> mccormick_bilinear(const std::string& w_name, std::size_t w, std::size_t eta, std::size_t z,
                                           double eta_lo, double eta_hi) {
  if (eta_lo > eta_hi) throw std::invalid_argument("McCormick bounds: lower exceeds upper for " + w_name);
  const std::string p = "mc_" + w_name + "_";
  return {row(p + "1", {{w, 1.0}, {eta, -1.0}, {z, -eta_hi}}, Sense::greater_equal, -eta_hi),
          row(p + "2", {{w, 1.0}, {eta, -1.0}, {z, -eta_lo}}, Sense::less_equal, -eta_lo),
          row(p + "3", {{w, 1.0}, {z, -eta_lo}}, Sense::greater_equal, 0.0),
          row(p + "4", {{w, 1.0}, {z, -eta_hi}}, Sense::less_equal, 0.0)};
}

std::vector<Constraint> mccormick_trilinear(const std::string& w_name, std::size_t w, std::size_t eta, std::size_t z1,
                                            std::size_t z2, double eta_lo, double eta_hi) {
  if (eta_lo > eta_hi) throw std::invalid_argument("McCormick bounds: lower exceeds upper for " + w_name);
  if (eta_lo < 0.0) throw std::invalid_argument("trilinear McCormick needs a nonnegative lower bound for " + w_name);
  const std::string p = "mc_" + w_name + "_";
  return {row(p + "1", {{w, 1.0}, {z1, -eta_hi}}, Sense::less_equal, 0.0),
          row(p + "2", {{w, 1.0}, {z2, -eta_hi}}, Sense::less_equal, 0.0),
          row(p + "3", {{w, 1.0}, {eta, -1.0}, {z1, -eta_lo}}, Sense::less_equal, -eta_lo),
          row(p + "4", {{w, 1.0}, {eta, -1.0}, {z2, -eta_lo}}, Sense::less_equal, -eta_lo),
          row(p + "5", {{w, 1.0}, {z1, -eta_lo}, {z2, -eta_lo}}, Sense::greater_equal, -eta_lo),
          row(p + "6", {{w, 1.0}, {eta, -1.0}, {z1, -eta_hi}, {z2, -eta_hi}}, Sense::greater_equal, -2.0 * eta_hi)};
}

namespace {

void check_inputs(const Instance& instance, const DemandModel& model) {
  const std::size_t nf = instance.num_facilities();
  const std::size_t nc = instance.num_customers();
  if (model.num_customers() != nc || model.lambda_mu.size() != nc || model.lambda_sigma.size() != nc ||
      model.bar_sigma.size() != nc || model.eps_mu.size() != nc || model.eps_sigma_lo.size() != nc ||
      model.eps_sigma_hi.size() != nc)
    throw std::invalid_argument("demand model does not match the number of customers");
  for (std::size_t j = 0; j < nc; ++j)
    if (model.lambda_mu[j].size() != nf || model.lambda_sigma[j].size() != nf)
      throw std::invalid_argument("dependency weights do not match the number of facilities");
  if (model.support.size() < 2) throw std::invalid_argument("support needs at least two points");
}

std::vector<std::size_t> add_plan(MilpModel& m, const Instance& instance, std::optional<std::size_t> budget) {
  std::vector<std::size_t> y;
  for (std::size_t i = 0; i < instance.num_facilities(); ++i) {
    y.push_back(m.add_binary("y_" + idx(i)));
    m.add_objective_term(y.back(), instance.facility(i).open_cost);
  }
  if (budget) {
    Constraint c{"budget", {}, Sense::less_equal, static_cast<double>(*budget)};
    for (std::size_t v : y) c.terms.push_back({v, 1.0});
    m.add_constraint(std::move(c));
  }
  m.metadata()["facilities"] = std::to_string(instance.num_facilities());
  return y;
}

}  // namespace

MilpModel build_dddr(const Instance& instance, const DemandModel& model, const DualBounds& bounds,
                     const DddrOptions& options) {
  check_inputs(instance, model);
  const std::size_t nf = instance.num_facilities();
  const std::size_t nc = instance.num_customers();
  bounds.check(nc);
  const Support& sup = model.support;
  const std::size_t nk = sup.size();

  MilpModel m;
  m.metadata()["model"] = "dddr";
  m.metadata()["cuts"] = options.with_cuts ? "on" : "off";
  const std::vector<std::size_t> y = add_plan(m, instance, options.budget);

  // Y_lm = y_l y_m, created on demand (only the cuts use it) and shared.
  std::map<std::pair<std::size_t, std::size_t>, std::size_t> pair_var;
  auto pair_of = [&](std::size_t l, std::size_t mm) {
    auto it = pair_var.find({l, mm});
    if (it != pair_var.end()) return it->second;
    const std::string name = "Y_" + idx(l) + "_" + idx(mm);
    const std::size_t v = m.add_continuous(name, 0.0, 1.0);
    m.add_constraints(mccormick_bilinear(name, v, y[l], y[mm], 0.0, 1.0));
    pair_var.emplace(std::make_pair(l, mm), v);
    return v;
  };

  for (std::size_t j = 0; j < nc; ++j) {
    const std::string sj = idx(j);
    const double mu = model.bar_mu[j];
    const double var = model.bar_variance(j);
    const double eps = model.eps_mu[j];
    const double elo = model.eps_sigma_lo[j];
    const double ehi = model.eps_sigma_hi[j];
    const double raw = var + mu * mu;
    const auto& lm = model.lambda_mu[j];

    const std::size_t alpha = m.add_continuous("alpha_" + sj, -kInfinity, kInfinity);
    const std::size_t d1 = m.add_continuous("delta1_" + sj, 0.0, bounds.ub_delta1[j]);
    const std::size_t d2 = m.add_continuous("delta2_" + sj, 0.0, bounds.ub_delta2[j]);
    const std::size_t g1 = m.add_continuous("gamma1_" + sj, 0.0, bounds.ub_gamma1[j]);
    const std::size_t g2 = m.add_continuous("gamma2_" + sj, 0.0, bounds.ub_gamma2[j]);
    m.add_objective_term(alpha, 1.0);
    m.add_objective_term(d1, mu + eps);
    m.add_objective_term(d2, -(mu - eps));
    m.add_objective_term(g1, raw * ehi);
    m.add_objective_term(g2, -raw * elo);

    auto product = [&](const std::string& name, std::size_t eta, double ub, std::size_t z, double coeff) {
      if (coeff == 0.0) return;
      const std::size_t w = m.add_continuous(name, 0.0, ub);
      m.add_objective_term(w, coeff);
      m.add_constraints(mccormick_bilinear(name, w, eta, z, 0.0, ub));
    };
    for (std::size_t i = 0; i < nf; ++i) {
      const std::string si = sj + "_" + idx(i);
      product("Delta1_" + si, d1, bounds.ub_delta1[j], y[i], mu * lm[i]);
      product("Delta2_" + si, d2, bounds.ub_delta2[j], y[i], -mu * lm[i]);
      const double big = big_lambda(model, j, i);
      product("Gamma1_" + si, g1, bounds.ub_gamma1[j], y[i], big * ehi);
      product("Gamma2_" + si, g2, bounds.ub_gamma2[j], y[i], -big * elo);
    }
    for (std::size_t l = 0; l < nf; ++l)
      for (std::size_t mm = 0; mm < l; ++mm) {
        const double q = 2.0 * mu * mu * lm[l] * lm[mm];
        const std::string slm = sj + "_" + idx(l) + "_" + idx(mm);
        for (int h = 1; h <= 2; ++h) {
          const double coeff = h == 1 ? q * ehi : -q * elo;
          if (coeff == 0.0) continue;
          const std::size_t eta = h == 1 ? g1 : g2;
          const double ub = h == 1 ? bounds.ub_gamma1[j] : bounds.ub_gamma2[j];
          const std::string name = "Psi" + std::to_string(h) + "_" + slm;
          const std::size_t w = m.add_continuous(name, 0.0, ub);
          m.add_objective_term(w, coeff);
          m.add_constraints(mccormick_trilinear(name, w, eta, y[l], y[mm], 0.0, ub));
        }
      }

    // covering rows: one per support point and per candidate i* (0 = penalty)
    const Customer& cust = instance.customer(j);
    for (std::size_t k = 0; k < nk; ++k) {
      const double d = sup[k];
      for (std::size_t col = 0; col <= nf; ++col) {
        const double cstar = col == 0 ? cust.penalty : instance.cost(col - 1, j);
        Constraint c = row("cover_" + sj + "_" + idx(k) + "_" + std::to_string(col),
                           {{alpha, 1.0}, {d1, d}, {d2, -d}, {g1, d * d}, {g2, -d * d}}, Sense::greater_equal,
                           (cstar - cust.revenue) * d);
        for (std::size_t i = 0; i < nf; ++i) {
          const double cij = instance.cost(i, j);
          if (cij < cstar) c.terms.push_back({y[i], -instance.facility(i).capacity * (cij - cstar)});
        }
        m.add_constraint(std::move(c));
      }
    }

    if (options.with_cuts) {
      const double lo = sup.front(), lo2 = sup[1], hi1 = sup[nk - 2], hi = sup.back();
      // second moment at y: raw + sum_i Lambda_i y_i + sum_{l>m} q_lm Y_lm
      auto add_cut = [&](const std::string& name, double mean_coeff, double second_coeff, double constant) {
        // constant + mean_coeff * mu_j(y) + second_coeff * Theta_j(y) >= 0
        Constraint c{name, {}, Sense::greater_equal, -(constant + mean_coeff * mu + second_coeff * raw)};
        for (std::size_t i = 0; i < nf; ++i) {
          const double a = mean_coeff * mu * lm[i] + second_coeff * big_lambda(model, j, i);
          if (a != 0.0) c.terms.push_back({y[i], a});
        }
        for (std::size_t l = 0; l < nf; ++l)
          for (std::size_t mm = 0; mm < l; ++mm) {
            const double q = second_coeff * 2.0 * mu * mu * lm[l] * lm[mm];
            if (q != 0.0) c.terms.push_back({pair_of(l, mm), q});
          }
        m.add_constraint(std::move(c));
      };
      add_cut("cut1_" + sj, -(lo + lo2), ehi, lo * lo2 + (lo + lo2) * eps);
      add_cut("cut2_" + sj, -(hi1 + hi), ehi, hi1 * hi + (hi1 + hi) * eps);
      add_cut("cut3_" + sj, lo + hi, -elo, -lo * hi + (lo + hi) * eps);
    }
  }
  m.seal();
  return m;
}

MilpModel build_dr(const Instance& instance, const DemandModel& model, const DualBounds& bounds,
                   const DddrOptions& options) {
  MilpModel m = build_dddr(instance, model.without_dependency(), bounds, options);
  return m;
}

MilpModel build_sp_saa(const Instance& instance, const ScenarioSet& scenarios, std::optional<std::size_t> budget) {
  const std::size_t nf = instance.num_facilities();
  const std::size_t nc = instance.num_customers();
  scenarios.check(nc);
  MilpModel m;
  m.metadata()["model"] = "sp";
  m.metadata()["scenarios"] = std::to_string(scenarios.size());
  const std::vector<std::size_t> y = add_plan(m, instance, budget);
  for (std::size_t w = 0; w < scenarios.size(); ++w) {
    const double p = scenarios.probability(w);
    const std::string sw = idx(w);
    std::vector<std::size_t> s(nc);
    for (std::size_t j = 0; j < nc; ++j) {
      s[j] = m.add_continuous("s_" + sw + "_" + idx(j), 0.0, kInfinity);
      m.add_objective_term(s[j], p * instance.customer(j).penalty);
      m.add_objective_constant(-p * instance.customer(j).revenue * scenarios.demands[w][j]);
    }
    std::vector<Constraint> balance(nc);
    for (std::size_t j = 0; j < nc; ++j)
      balance[j] = Constraint{"balance_" + sw + "_" + idx(j), {{s[j], 1.0}}, Sense::equal, scenarios.demands[w][j]};
    for (std::size_t i = 0; i < nf; ++i)
      for (std::size_t j = 0; j < nc; ++j) {
        const std::string name = sw + "_" + idx(i) + "_" + idx(j);
        const std::size_t x = m.add_continuous("x_" + name, 0.0, kInfinity);
        m.add_objective_term(x, p * instance.cost(i, j));
        balance[j].terms.push_back({x, 1.0});
        m.add_constraint(Constraint{"cap_" + name, {{x, 1.0}, {y[i], -instance.facility(i).capacity}},
                                    Sense::less_equal, 0.0});
      }
    m.add_constraints(std::move(balance));
  }
  m.seal();
  return m;
}

LocationDecision decision_from(const MilpModel& model, const std::vector<double>& values) {
  const auto it = model.metadata().find("facilities");
  if (it == model.metadata().end()) throw std::invalid_argument("model does not record its facilities");
  const std::size_t nf = std::stoul(it->second);
  LocationDecision y(nf);
  for (std::size_t i = 0; i < nf; ++i) y.set(i, values.at(model.variable_index("y_" + idx(i))) > 0.5);
  return y;
}

std::vector<std::string> binding_dual_bounds(const MilpModel& model, const std::vector<double>& values, double tol) {
  // delta1 - delta2 and gamma1 - gamma2 are what the model actually uses, so
  // a pair that is large on both sides (possible when a window has zero
  // width) is reduced by its common part before comparing with the bound.
  auto partner = [](const std::string& name) {
    std::string other = name;
    other[name.find('_') - 1] = name[name.find('_') - 1] == '1' ? '2' : '1';
    return other;
  };
  std::vector<std::string> out;
  for (std::size_t v = 0; v < model.num_variables(); ++v) {
    const Variable& var = model.variable(v);
    const std::string family = var.name.substr(0, var.name.find('_'));
    if (family != "delta1" && family != "delta2" && family != "gamma1" && family != "gamma2") continue;
    if (!std::isfinite(var.upper)) continue;
    double value = values.at(v);
    if (const auto other = model.find_variable(partner(var.name))) value -= std::min(value, values.at(*other));
    if (value >= var.upper - tol) out.push_back(var.name);
  }
  return out;
}

namespace {

std::string number(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string sanitize(const std::string& name) {
  std::string s;
  for (char c : name) s.push_back(std::isalnum(static_cast<unsigned char>(c)) || c == '_' ? c : '_');
  // a leading digit or 'e' could be read as part of a number
  if (s.empty() || std::isdigit(static_cast<unsigned char>(s.front())) || s.front() == 'e' || s.front() == 'E')
    s.insert(s.begin(), 'v');
  return s;
}

std::vector<std::string> unique_names(std::vector<std::string> names) {
  std::set<std::string> seen(names.begin(), names.end());
  std::set<std::string> used;
  for (std::size_t i = 0; i < names.size(); ++i) {
    std::string s = sanitize(names[i]);
    if (used.count(s)) {
      std::string base = s + "_" + std::to_string(i);
      while (used.count(base) || seen.count(base)) base += "_";
      s = base;
    }
    used.insert(s);
    names[i] = s;
  }
  return names;
}

// Writes "c1 x1 + c2 x2 ..." wrapping long lines.
void write_terms(std::ostringstream& os, const std::vector<Term>& terms, const std::vector<std::string>& names,
                 std::size_t indent) {
  std::size_t width = indent;
  bool first = true;
  for (const Term& t : terms) {
    std::string piece;
    if (first)
      piece = (t.coeff < 0 ? "- " : "") + number(std::abs(t.coeff)) + " " + names[t.var];
    else
      piece = std::string(t.coeff < 0 ? " - " : " + ") + number(std::abs(t.coeff)) + " " + names[t.var];
    if (width + piece.size() > 200) {
      os << "\n   ";
      width = 3;
    }
    os << piece;
    width += piece.size();
    first = false;
  }
}

std::vector<Term> merged(const std::vector<Term>& terms) {
  std::map<std::size_t, double> acc;
  for (const Term& t : terms) acc[t.var] += t.coeff;
  std::vector<Term> out;
  for (const auto& [v, c] : acc)
    if (c != 0.0) out.push_back({v, c});
  return out;
}

}  // namespace

std::string export_lp_text(const MilpModel& model) {
  std::vector<std::string> raw_vars, raw_rows;
  for (const Variable& v : model.variables()) raw_vars.push_back(v.name);
  for (const Constraint& c : model.constraints()) raw_rows.push_back(c.name);
  const auto vars = unique_names(raw_vars);
  const auto rows = unique_names(raw_rows);

  std::ostringstream os;
  os << "\\ " << model.num_variables() << " variables, " << model.num_constraints() << " constraints\n";
  os << "Minimize\n obj: ";
  const std::vector<Term> obj = merged(model.objective().terms);
  write_terms(os, obj, vars, 6);
  const double constant = model.objective().constant;
  if (constant != 0.0 || obj.empty())
    os << (obj.empty() ? "" : (constant < 0 ? " - " : " + ")) << (obj.empty() ? number(constant) : number(std::abs(constant)));
  os << "\nSubject To\n";
  for (std::size_t r = 0; r < model.num_constraints(); ++r) {
    const Constraint& c = model.constraints()[r];
    os << " " << rows[r] << ": ";
    std::vector<Term> terms = merged(c.terms);
    if (terms.empty()) terms.push_back({0, 0.0});
    if (terms.size() == 1 && terms[0].coeff == 0.0)
      os << "0 " << vars[terms[0].var];
    else
      write_terms(os, terms, vars, rows[r].size() + 3);
    os << (c.sense == Sense::less_equal ? " <= " : c.sense == Sense::equal ? " = " : " >= ") << number(c.rhs) << "\n";
  }
  os << "Bounds\n";
  for (std::size_t v = 0; v < model.num_variables(); ++v) {
    const Variable& var = model.variable(v);
    if (var.kind == VarKind::binary) {
      if (var.lower != 0.0 || var.upper != 1.0)
        os << " " << number(var.lower) << " <= " << vars[v] << " <= " << number(var.upper) << "\n";
      continue;
    }
    const bool lo_inf = !std::isfinite(var.lower), hi_inf = !std::isfinite(var.upper);
    if (var.lower == 0.0 && hi_inf) continue;
    if (lo_inf && hi_inf)
      os << " " << vars[v] << " free\n";
    else if (var.lower == var.upper)
      os << " " << vars[v] << " = " << number(var.lower) << "\n";
    else
      os << " " << (lo_inf ? std::string("-inf") : number(var.lower)) << " <= " << vars[v] << " <= "
         << (hi_inf ? std::string("+inf") : number(var.upper)) << "\n";
  }
  if (model.num_binaries() > 0) {
    os << "Binaries\n";
    for (std::size_t v = 0; v < model.num_variables(); ++v)
      if (model.variable(v).kind == VarKind::binary) os << " " << vars[v] << "\n";
  }
  os << "End\n";
  return os.str();
}

nlohmann::json model_statistics(const MilpModel& model) {
  nlohmann::json out;
  out["variables"] = model.num_variables();
  out["binaries"] = model.num_binaries();
  out["continuous"] = model.num_variables() - model.num_binaries();
  out["constraints"] = model.num_constraints();
  out["nonzeros"] = model.num_nonzeros();
  std::map<std::string, std::size_t> vf, cf;
  for (const Variable& v : model.variables()) ++vf[v.name.substr(0, v.name.find('_'))];
  for (const Constraint& c : model.constraints()) {
    std::string fam = c.name.substr(0, c.name.find('_'));
    if (fam == "mc") {
      // mc_<Family>_... : group by the product family
      const auto rest = c.name.substr(3);
      fam = "mc_" + rest.substr(0, rest.find('_'));
    }
    ++cf[fam];
  }
  out["variable_families"] = vf;
  out["constraint_families"] = cf;
  out["metadata"] = model.metadata();
  return out;
}

}  // namespace dddr
