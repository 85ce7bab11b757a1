#include "splitform/problem_io.hpp"

#include <cmath>
#include <fstream>
#include <limits>
#include <sstream>

#include <json.hpp>

namespace splitform {
namespace {

using nlohmann::json;

json number(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  return v;
}

double to_number(const json& v, const char* what) {
  if (v.is_number()) return v.get<double>();
  if (v.is_string()) {
    const auto s = v.get<std::string>();
    if (s == "inf") return std::numeric_limits<double>::infinity();
    if (s == "-inf") return -std::numeric_limits<double>::infinity();
  }
  throw ModelError(std::string("expected a number for ") + what);
}

json function_json(const SeparableFunction& f) {
  json terms = json::array();
  for (const auto& t : f.terms())
    terms.push_back({{"var", t.var}, {"quad", t.quad}, {"center", t.center}, {"lin", t.lin}});
  return {{"terms", terms}, {"constant", f.constant()}};
}

SeparableFunction function_from(const json& j) {
  SeparableFunction f(j.value("constant", 0.0));
  for (const auto& t : j.at("terms"))
    f.add_term({t.at("var").get<int>(), t.value("quad", 0.0), t.value("center", 0.0),
                t.value("lin", 0.0)});
  return f;
}

}  // namespace

std::string sense_symbol(Sense s) {
  switch (s) {
    case Sense::kLessEqual: return "<=";
    case Sense::kGreaterEqual: return ">=";
    case Sense::kEqual: return "=";
  }
  return "<=";
}

Sense parse_sense(const std::string& s) {
  if (s == "<=") return Sense::kLessEqual;
  if (s == ">=") return Sense::kGreaterEqual;
  if (s == "=" || s == "==") return Sense::kEqual;
  throw ModelError("unknown row sense \"" + s + "\"");
}

std::string problem_to_json(const DisjunctiveProblem& p) {
  json doc;
  doc["name"] = p.name;
  json vars = json::array();
  for (int i = 0; i < p.n; ++i) {
    json v;
    if (!p.var_names.empty()) v["name"] = p.var_names[static_cast<std::size_t>(i)];
    v["lower"] = number(p.lower[static_cast<std::size_t>(i)]);
    v["upper"] = number(p.upper[static_cast<std::size_t>(i)]);
    vars.push_back(v);
  }
  doc["vars"] = vars;
  doc["objective"] = {
      {"sense", p.objective.sense == ObjectiveSense::kMaximize ? "max" : "min"},
      {"coeffs", p.objective.coeffs},
      {"constant", p.objective.constant}};
  json globals = json::array();
  for (const auto& g : p.globals) {
    json terms = json::array();
    for (const auto& t : g.terms) terms.push_back({t.var, t.coeff});
    globals.push_back({{"terms", terms}, {"sense", sense_symbol(g.sense)}, {"rhs", g.rhs}});
  }
  doc["globals"] = globals;
  json disjunctions = json::array();
  for (const auto& d : p.disjunctions) {
    json disjuncts = json::array();
    for (const auto& dj : d.disjuncts) {
      json cons = json::array();
      for (const auto& c : dj.constraints) {
        json cj = function_json(c.lhs);
        cj["rhs"] = c.rhs;
        cons.push_back(cj);
      }
      disjuncts.push_back({{"constraints", cons}});
    }
    disjunctions.push_back({{"disjuncts", disjuncts}});
  }
  doc["disjunctions"] = disjunctions;
  json ind = json::array();
  for (const auto& r : p.indicator_rows) {
    json terms = json::array();
    for (const auto& t : r.terms) terms.push_back({t.disjunction, t.disjunct, t.coeff});
    ind.push_back({{"terms", terms}, {"sense", sense_symbol(r.sense)}, {"rhs", r.rhs}});
  }
  doc["indicator_rows"] = ind;
  doc["partition_atoms"] = p.partition_atoms;
  return doc.dump(1) + "\n";
}

DisjunctiveProblem problem_from_json(const std::string& text) {
  json doc;
  try {
    doc = json::parse(text);
  } catch (const json::parse_error& e) {
    throw ModelError(std::string("problem JSON: ") + e.what());
  }
  DisjunctiveProblem p;
  try {
    p.name = doc.value("name", "");
    const auto& vars = doc.at("vars");
    p.n = static_cast<int>(vars.size());
    bool named = false;
    for (const auto& v : vars) {
      p.lower.push_back(to_number(v.at("lower"), "lower"));
      p.upper.push_back(to_number(v.at("upper"), "upper"));
      if (v.contains("name")) named = true;
    }
    if (named)
      for (int i = 0; i < p.n; ++i)
        p.var_names.push_back(vars[static_cast<std::size_t>(i)].value(
            "name", "x" + std::to_string(i)));
    if (doc.contains("objective")) {
      const auto& o = doc["objective"];
      const std::string sense = o.value("sense", "min");
      if (sense != "min" && sense != "max")
        throw ModelError("objective sense must be \"min\" or \"max\"");
      p.objective.sense = sense == "max" ? ObjectiveSense::kMaximize : ObjectiveSense::kMinimize;
      p.objective.coeffs = o.value("coeffs", std::vector<double>{});
      p.objective.constant = o.value("constant", 0.0);
    }
    if (p.objective.coeffs.empty()) p.objective.coeffs.assign(static_cast<std::size_t>(p.n), 0.0);
    for (const auto& g : doc.value("globals", json::array())) {
      LinearConstraint row;
      for (const auto& t : g.at("terms"))
        row.terms.push_back({t.at(0).get<int>(), t.at(1).get<double>()});
      row.sense = parse_sense(g.value("sense", "<="));
      row.rhs = g.at("rhs").get<double>();
      p.globals.push_back(std::move(row));
    }
    for (const auto& dj : doc.at("disjunctions")) {
      Disjunction d;
      for (const auto& dk : dj.at("disjuncts")) {
        Disjunct disjunct;
        for (const auto& c : dk.at("constraints"))
          disjunct.constraints.push_back({function_from(c), c.at("rhs").get<double>()});
        d.disjuncts.push_back(std::move(disjunct));
      }
      p.disjunctions.push_back(std::move(d));
    }
    for (const auto& r : doc.value("indicator_rows", json::array())) {
      IndicatorConstraint row;
      for (const auto& t : r.at("terms"))
        row.terms.push_back({t.at(0).get<int>(), t.at(1).get<int>(), t.at(2).get<double>()});
      row.sense = parse_sense(r.value("sense", "<="));
      row.rhs = r.at("rhs").get<double>();
      p.indicator_rows.push_back(std::move(row));
    }
    if (doc.contains("partition_atoms"))
      p.partition_atoms = doc["partition_atoms"].get<std::vector<std::vector<std::vector<int>>>>();
  } catch (const json::exception& e) {
    throw ModelError(std::string("problem JSON: ") + e.what());
  }
  return p;
}

void save_problem(const std::string& path, const DisjunctiveProblem& p) {
  std::ofstream f(path, std::ios::binary);
  if (!f) throw ModelError("cannot write " + path);
  f << problem_to_json(p);
}

DisjunctiveProblem load_problem(const std::string& path) {
  std::ifstream f(path, std::ios::binary);
  if (!f) throw ModelError("cannot read " + path);
  std::stringstream ss;
  ss << f.rdbuf();
  return problem_from_json(ss.str());
}

}  // namespace splitform
