#include "splitform/model.hpp"

#include <algorithm>
#include <cmath>

namespace splitform {

SeparableFunction& SeparableFunction::add_term(const UnivariateTerm& term) {
  if (term.var < 0) throw ModelError("negative variable index in term");
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), term.var,
      [](const UnivariateTerm& t, int v) { return t.var < v; });
  UnivariateTerm incoming = term;
  if (incoming.quad == 0.0) incoming.center = 0.0;
  if (it == terms_.end() || it->var != term.var) {
    if (incoming.quad == 0.0 && incoming.lin == 0.0) return *this;
    terms_.insert(it, incoming);
    return *this;
  }
  // q1(x-c1)^2 + q2(x-c2)^2 = q(x-c)^2 + k with q = q1+q2,
  // c = (q1 c1 + q2 c2) / q, k = q1 c1^2 + q2 c2^2 - q c^2.
  UnivariateTerm& t = *it;
  const double q = t.quad + incoming.quad;
  if (q > 0.0) {
    const double c = (t.quad * t.center + incoming.quad * incoming.center) / q;
    constant_ += t.quad * t.center * t.center +
                 incoming.quad * incoming.center * incoming.center - q * c * c;
    t.center = c;
  } else {
    t.center = 0.0;
  }
  t.quad = q;
  t.lin += incoming.lin;
  if (t.quad == 0.0 && t.lin == 0.0) terms_.erase(it);
  return *this;
}

bool SeparableFunction::is_affine() const {
  return std::all_of(terms_.begin(), terms_.end(),
                     [](const UnivariateTerm& t) { return t.is_affine(); });
}

const UnivariateTerm* SeparableFunction::find(int var) const {
  auto it = std::lower_bound(
      terms_.begin(), terms_.end(), var,
      [](const UnivariateTerm& t, int v) { return t.var < v; });
  if (it == terms_.end() || it->var != var) return nullptr;
  return &*it;
}

std::vector<int> SeparableFunction::support() const {
  std::vector<int> out;
  out.reserve(terms_.size());
  for (const auto& t : terms_) out.push_back(t.var);
  return out;
}

double SeparableFunction::evaluate(std::span<const double> x) const {
  double sum = constant_;
  for (const auto& t : terms_) sum += t.value(x[static_cast<std::size_t>(t.var)]);
  return sum;
}

SeparableFunction SeparableFunction::scaled(double factor) const {
  SeparableFunction out(constant_ * factor);
  for (const auto& t : terms_) {
    UnivariateTerm s = t;
    s.quad *= factor;
    s.lin *= factor;
    if (s.quad == 0.0) s.center = 0.0;
    out.terms_.push_back(s);
  }
  return out;
}

SeparableFunction SeparableFunction::remapped(std::span<const int> map) const {
  SeparableFunction out(constant_);
  for (const auto& t : terms_) {
    UnivariateTerm s = t;
    s.var = map[static_cast<std::size_t>(t.var)];
    out.add_term(s);
  }
  return out;
}

std::vector<int> Disjunction::support() const {
  std::vector<int> vars;
  for (const auto& d : disjuncts)
    for (const auto& c : d.constraints)
      for (const auto& t : c.lhs.terms()) vars.push_back(t.var);
  std::sort(vars.begin(), vars.end());
  vars.erase(std::unique(vars.begin(), vars.end()), vars.end());
  return vars;
}

std::string DisjunctiveProblem::var_name(int i) const {
  if (static_cast<std::size_t>(i) < var_names.size() &&
      !var_names[static_cast<std::size_t>(i)].empty())
    return var_names[static_cast<std::size_t>(i)];
  return "x" + std::to_string(i);
}

double evaluate(const SeparableFunction& f, std::span<const double> x) {
  return f.evaluate(x);
}

bool disjunct_satisfied(const Disjunct& d, std::span<const double> x,
                        double tol) {
  return std::all_of(d.constraints.begin(), d.constraints.end(),
                     [&](const DisjunctConstraint& c) {
                       return c.lhs.evaluate(x) <= c.rhs + tol;
                     });
}

bool disjunction_satisfied(const Disjunction& d, std::span<const double> x,
                           double tol) {
  return std::any_of(d.disjuncts.begin(), d.disjuncts.end(),
                     [&](const Disjunct& dj) {
                       return disjunct_satisfied(dj, x, tol);
                     });
}

bool problem_feasible(const DisjunctiveProblem& problem,
                      std::span<const double> x, double tol) {
  for (int i = 0; i < problem.n; ++i) {
    const auto k = static_cast<std::size_t>(i);
    if (x[k] < problem.lower[k] - tol || x[k] > problem.upper[k] + tol)
      return false;
  }
  for (const auto& row : problem.globals) {
    double lhs = 0.0;
    for (const auto& t : row.terms) lhs += t.coeff * x[static_cast<std::size_t>(t.var)];
    const bool ok = row.sense == Sense::kLessEqual      ? lhs <= row.rhs + tol
                    : row.sense == Sense::kGreaterEqual ? lhs >= row.rhs - tol
                                                        : std::abs(lhs - row.rhs) <= tol;
    if (!ok) return false;
  }
  return std::all_of(problem.disjunctions.begin(), problem.disjunctions.end(),
                     [&](const Disjunction& d) {
                       return disjunction_satisfied(d, x, tol);
                     });
}

double objective_value(const DisjunctiveProblem& problem,
                       std::span<const double> x) {
  double v = problem.objective.constant;
  for (std::size_t i = 0; i < problem.objective.coeffs.size(); ++i)
    v += problem.objective.coeffs[i] * x[i];
  return v;
}

}  // namespace splitform
