#include <cmath>
#include <string>

#include "splitform/bounds.hpp"
#include "splitform/model.hpp"

namespace splitform {
namespace {

void check_function(const SeparableFunction& f, int n, const std::string& where,
                    ValidationReport& report) {
  for (const auto& t : f.terms()) {
    if (t.var < 0 || t.var >= n)
      report.errors.push_back(where + ": variable index " + std::to_string(t.var) +
                              " out of range");
    if (t.quad < 0.0)
      report.errors.push_back(where + ": negative quad_coeff on x" +
                              std::to_string(t.var));
    if (!std::isfinite(t.quad) || !std::isfinite(t.center) || !std::isfinite(t.lin))
      report.errors.push_back(where + ": non-finite coefficient");
  }
  if (!std::isfinite(f.constant()))
    report.errors.push_back(where + ": non-finite constant");
}

}  // namespace

ValidationReport validate(const DisjunctiveProblem& p, double tol) {
  ValidationReport report;
  const auto n = static_cast<std::size_t>(p.n);
  if (p.n < 1) report.errors.push_back("problem has no variables");
  if (p.lower.size() != n || p.upper.size() != n) {
    report.errors.push_back("bound vectors must have length n");
    return report;
  }
  if (!p.var_names.empty() && p.var_names.size() != n)
    report.errors.push_back("var_names must be empty or have length n");
  if (!p.objective.coeffs.empty() && p.objective.coeffs.size() != n)
    report.errors.push_back("objective must have length n");
  for (std::size_t i = 0; i < n; ++i) {
    if (!std::isfinite(p.lower[i]) || !std::isfinite(p.upper[i]))
      report.errors.push_back("unbounded variable " + p.var_name(static_cast<int>(i)));
    else if (p.lower[i] > p.upper[i])
      report.errors.push_back("empty bounds on " + p.var_name(static_cast<int>(i)));
  }
  for (std::size_t g = 0; g < p.globals.size(); ++g)
    for (const auto& t : p.globals[g].terms)
      if (t.var < 0 || t.var >= p.n)
        report.errors.push_back("global row " + std::to_string(g) +
                                ": variable index out of range");
  for (std::size_t j = 0; j < p.disjunctions.size(); ++j) {
    const auto& d = p.disjunctions[j];
    if (d.disjuncts.empty())
      report.errors.push_back("disjunction " + std::to_string(j) + " has no disjuncts");
    const auto support = static_cast<double>(d.support().size());
    for (std::size_t l = 0; l < d.disjuncts.size(); ++l) {
      const auto& dj = d.disjuncts[l];
      const std::string where =
          "disjunction " + std::to_string(j) + ", disjunct " + std::to_string(l);
      if (dj.constraints.empty())
        report.errors.push_back(where + " has no constraints");
      for (std::size_t k = 0; k < dj.constraints.size(); ++k) {
        check_function(dj.constraints[k].lhs, p.n,
                       where + ", constraint " + std::to_string(k), report);
        if (!std::isfinite(dj.constraints[k].rhs))
          report.errors.push_back(where + ": non-finite rhs");
      }
      if (static_cast<double>(dj.constraints.size()) >= 0.5 * support)
        report.warnings.push_back(where + " has " +
                                  std::to_string(dj.constraints.size()) +
                                  " constraints on " +
                                  std::to_string(static_cast<int>(support)) +
                                  " variables; few constraints per disjunct "
                                  "are expected");
    }
  }
  for (std::size_t r = 0; r < p.indicator_rows.size(); ++r)
    for (const auto& t : p.indicator_rows[r].terms) {
      const bool ok =
          t.disjunction >= 0 && t.disjunction < static_cast<int>(p.disjunctions.size()) &&
          t.disjunct >= 0 &&
          t.disjunct < static_cast<int>(
                           p.disjunctions[static_cast<std::size_t>(t.disjunction)]
                               .disjuncts.size());
      if (!ok)
        report.errors.push_back("indicator row " + std::to_string(r) +
                                " references a missing disjunct");
    }
  if (!p.partition_atoms.empty() && p.partition_atoms.size() != p.disjunctions.size())
    report.errors.push_back("partition_atoms must have one entry per disjunction");
  if (!report.ok()) return report;

  RegionOptions options;
  options.relax.violation_tol = tol;
  RegionOptimizer domain(p, -1, -1, options);
  if (!domain.feasible()) {
    report.errors.push_back("box and global rows are infeasible");
    return report;
  }
  for (std::size_t j = 0; j < p.disjunctions.size(); ++j)
    for (std::size_t l = 0; l < p.disjunctions[j].disjuncts.size(); ++l) {
      RegionOptimizer region(p, static_cast<int>(j), static_cast<int>(l), options);
      if (!region.feasible())
        report.errors.push_back("disjunction " + std::to_string(j) + ", disjunct " +
                                std::to_string(l) + " is empty over the domain");
    }
  return report;
}

void require_valid(const DisjunctiveProblem& problem) {
  const ValidationReport r = validate(problem);
  if (r.ok()) return;
  std::string msg = "invalid problem";
  for (const auto& e : r.errors) msg += "\n  " + e;
  throw ModelError(msg);
}

}  // namespace splitform
