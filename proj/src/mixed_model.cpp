#include "splitform/mixed_model.hpp"

#include <algorithm>
#include <cmath>

namespace splitform {

int MixedModel::add_var(ModelVar v) {
  vars.push_back(std::move(v));
  objective.coeffs.push_back(0.0);
  return static_cast<int>(vars.size()) - 1;
}

int MixedModel::num_binaries() const {
  return static_cast<int>(std::count_if(vars.begin(), vars.end(), [](const ModelVar& v) {
    return v.kind == VarKind::kBinary;
  }));
}

int MixedModel::count_role(Role role) const {
  return static_cast<int>(std::count_if(vars.begin(), vars.end(), [&](const ModelVar& v) {
    return v.role == role;
  }));
}

std::vector<int> MixedModel::binary_columns() const {
  std::vector<int> out;
  for (int i = 0; i < num_vars(); ++i)
    if (vars[static_cast<std::size_t>(i)].kind == VarKind::kBinary) out.push_back(i);
  return out;
}

int MixedModel::find_var(const std::string& var_name) const {
  for (int i = 0; i < num_vars(); ++i)
    if (vars[static_cast<std::size_t>(i)].name == var_name) return i;
  return -1;
}

double MixedModel::objective_value(std::span<const double> y) const {
  double v = objective.constant;
  for (std::size_t i = 0; i < objective.coeffs.size(); ++i)
    v += objective.coeffs[i] * y[i];
  return v;
}

double MixedModel::max_violation(std::span<const double> y) const {
  double worst = 0.0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    worst = std::max(worst, vars[i].lower - y[i]);
    worst = std::max(worst, y[i] - vars[i].upper);
  }
  for (const auto& r : rows) {
    double lhs = 0.0;
    for (const auto& t : r.terms) lhs += t.coeff * y[static_cast<std::size_t>(t.var)];
    switch (r.sense) {
      case Sense::kLessEqual:
        worst = std::max(worst, lhs - r.rhs);
        break;
      case Sense::kGreaterEqual:
        worst = std::max(worst, r.rhs - lhs);
        break;
      case Sense::kEqual:
        worst = std::max(worst, std::abs(lhs - r.rhs));
        break;
    }
  }
  for (const auto& r : convex_rows) worst = std::max(worst, r.f.evaluate(y) - r.rhs);
  return worst;
}

std::string_view role_name(Role role) {
  switch (role) {
    case Role::kOriginal: return "x";
    case Role::kAlpha: return "alpha";
    case Role::kNu: return "nu";
    case Role::kIndicator: return "lambda";
    case Role::kHullCopy: return "hull_copy";
    case Role::kGlobal: return "global";
    case Role::kConvexity: return "convexity";
    case Role::kDisaggregation: return "disaggregation";
    case Role::kBudget: return "budget";
    case Role::kBoundLower: return "bound_lower";
    case Role::kBoundUpper: return "bound_upper";
    case Role::kEpigraph: return "epigraph";
    case Role::kLinking: return "linking";
    case Role::kBigM: return "bigm";
    case Role::kCut: return "cut";
    case Role::kHullRow: return "hull_row";
    case Role::kIndicatorRow: return "indicator_row";
    case Role::kOther: return "other";
  }
  return "other";
}

MixedModel model_skeleton(const DisjunctiveProblem& problem,
                          std::string formulation) {
  MixedModel m;
  m.name = problem.name;
  m.formulation = std::move(formulation);
  m.objective.sense = problem.objective.sense;
  m.objective.constant = problem.objective.constant;
  for (int i = 0; i < problem.n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    m.add_var({"x" + std::to_string(i), problem.lower[k], problem.upper[k],
               VarKind::kContinuous, Role::kOriginal});
    if (k < problem.objective.coeffs.size())
      m.objective.coeffs[k] = problem.objective.coeffs[k];
  }
  m.num_original = problem.n;
  for (std::size_t g = 0; g < problem.globals.size(); ++g) {
    const auto& row = problem.globals[g];
    m.add_row({"g" + std::to_string(g), row.terms, row.sense, row.rhs,
               Role::kGlobal});
  }
  return m;
}

void add_separable_row(MixedModel& m, std::string name,
                       const SeparableFunction& f, double rhs, Role role,
                       bool equality) {
  const double rhs_adj = rhs - f.constant();
  if (f.is_affine()) {
    ModelRow row{std::move(name), {}, equality ? Sense::kEqual : Sense::kLessEqual,
                 rhs_adj, role};
    for (const auto& t : f.terms()) row.terms.push_back({t.var, t.lin});
    m.add_row(std::move(row));
    return;
  }
  SeparableFunction g = f;
  g.add_constant(-f.constant());
  m.add_convex_row({std::move(name), std::move(g), rhs_adj, role});
}

void add_indicators(MixedModel& m, const DisjunctiveProblem& problem) {
  m.lambda.assign(problem.disjunctions.size(), {});
  for (std::size_t j = 0; j < problem.disjunctions.size(); ++j) {
    ModelRow sum{"sum_" + std::to_string(j), {}, Sense::kEqual, 1.0,
                 Role::kConvexity};
    for (std::size_t l = 0; l < problem.disjunctions[j].disjuncts.size(); ++l) {
      const int col = m.add_var({"lam_" + std::to_string(j) + "_" + std::to_string(l),
                                 0.0, 1.0, VarKind::kBinary, Role::kIndicator});
      m.lambda[j].push_back(col);
      sum.terms.push_back({col, 1.0});
    }
    m.add_row(std::move(sum));
  }
  for (std::size_t r = 0; r < problem.indicator_rows.size(); ++r) {
    const auto& ind = problem.indicator_rows[r];
    ModelRow row{"ind_" + std::to_string(r), {}, ind.sense, ind.rhs,
                 Role::kIndicatorRow};
    for (const auto& t : ind.terms)
      row.terms.push_back(
          {m.lambda[static_cast<std::size_t>(t.disjunction)]
                   [static_cast<std::size_t>(t.disjunct)],
           t.coeff});
    m.add_row(std::move(row));
  }
}

}  // namespace splitform
