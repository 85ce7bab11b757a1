#include "oracles.hpp"

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <limits>

namespace oracle {

using namespace splitform;

namespace {

bool indicator_rows_hold(const DisjunctiveProblem& p, const std::vector<int>& choice) {
  for (const auto& row : p.indicator_rows) {
    double lhs = 0.0;
    for (const auto& t : row.terms)
      if (choice[static_cast<std::size_t>(t.disjunction)] == t.disjunct) lhs += t.coeff;
    const double tol = 1e-9;
    if (row.sense == Sense::kLessEqual && lhs > row.rhs + tol) return false;
    if (row.sense == Sense::kGreaterEqual && lhs < row.rhs - tol) return false;
    if (row.sense == Sense::kEqual && std::abs(lhs - row.rhs) > tol) return false;
  }
  return true;
}

MixedModel pattern_model(const DisjunctiveProblem& p, const std::vector<int>& choice) {
  MixedModel m;
  m.num_original = p.n;
  for (int i = 0; i < p.n; ++i)
    m.vars.push_back({"x" + std::to_string(i), p.lower[static_cast<std::size_t>(i)],
                      p.upper[static_cast<std::size_t>(i)], VarKind::kContinuous,
                      Role::kOriginal});
  for (const auto& g : p.globals) m.rows.push_back({"g", g.terms, g.sense, g.rhs, Role::kGlobal});
  m.objective = p.objective;
  for (std::size_t j = 0; j < p.disjunctions.size(); ++j) {
    const auto& dj = p.disjunctions[j].disjuncts[static_cast<std::size_t>(choice[j])];
    for (const auto& c : dj.constraints) {
      if (c.lhs.is_affine()) {
        ModelRow row{"d", {}, Sense::kLessEqual, c.rhs - c.lhs.constant(), Role::kOther};
        for (const auto& t : c.lhs.terms()) row.terms.push_back({t.var, t.lin});
        m.rows.push_back(std::move(row));
      } else {
        m.convex_rows.push_back({"d", c.lhs, c.rhs, Role::kOther});
      }
    }
  }
  return m;
}

}  // namespace

Enumeration enumerate_assignments(const DisjunctiveProblem& p, double violation_tol) {
  Enumeration best;
  const bool maximize = p.objective.sense == ObjectiveSense::kMaximize;
  std::vector<int> choice(p.disjunctions.size(), 0);
  RelaxOptions opt;
  opt.violation_tol = violation_tol;
  opt.max_cuts_per_term = 2000;
  while (true) {
    if (indicator_rows_hold(p, choice)) {
      ++best.patterns;
      const MixedModel m = pattern_model(p, choice);
      const RelaxResult r = solve_relaxation(m, opt);
      if (r.status == LpStatus::kOptimal) {
        const bool better = !best.feasible || (maximize ? r.objective > best.objective
                                                        : r.objective < best.objective);
        if (better) {
          best.feasible = true;
          best.objective = r.objective;
          best.choice = choice;
          best.x = r.x;
        }
      }
    }
    std::size_t j = 0;
    for (; j < choice.size(); ++j) {
      if (++choice[j] < static_cast<int>(p.disjunctions[j].disjuncts.size())) break;
      choice[j] = 0;
    }
    if (j == choice.size()) break;
  }
  return best;
}

LpProblem linear_part(const MixedModel& m) {
  LpProblem lp;
  const double sign = m.objective.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  for (const auto& v : m.vars) {
    lp.lower.push_back(v.lower);
    lp.upper.push_back(v.upper);
  }
  for (double c : m.objective.coeffs) lp.cost.push_back(sign * c);
  for (const auto& r : m.rows) lp.rows.push_back({r.terms, r.sense, r.rhs});
  return lp;
}

std::optional<double> vertex_enumeration_min(const LpProblem& lp, double tol) {
  const int n = static_cast<int>(lp.cost.size());
  // Constraints a.x (sense) b; bounds become single-variable rows.
  struct Con {
    Eigen::VectorXd a;
    double b;
    Sense sense;
  };
  std::vector<Con> eq;
  std::vector<Con> ineq;
  for (const auto& r : lp.rows) {
    Con c{Eigen::VectorXd::Zero(n), r.rhs, r.sense};
    for (const auto& t : r.terms) c.a[t.var] += t.coeff;
    (r.sense == Sense::kEqual ? eq : ineq).push_back(c);
  }
  for (int j = 0; j < n; ++j) {
    Con lo{Eigen::VectorXd::Zero(n), lp.lower[static_cast<std::size_t>(j)], Sense::kGreaterEqual};
    lo.a[j] = 1.0;
    Con hi{Eigen::VectorXd::Zero(n), lp.upper[static_cast<std::size_t>(j)], Sense::kLessEqual};
    hi.a[j] = 1.0;
    if (lp.lower[static_cast<std::size_t>(j)] == lp.upper[static_cast<std::size_t>(j)]) {
      lo.sense = Sense::kEqual;
      eq.push_back(lo);
    } else {
      ineq.push_back(lo);
      ineq.push_back(hi);
    }
  }
  const int need = n - static_cast<int>(eq.size());
  if (need < 0 || need > static_cast<int>(ineq.size())) return std::nullopt;

  auto feasible = [&](const Eigen::VectorXd& x) {
    for (const auto* set : {&eq, &ineq})
      for (const auto& c : *set) {
        const double v = c.a.dot(x);
        const double scale = 1.0 + std::abs(c.b);
        if (c.sense == Sense::kLessEqual && v > c.b + tol * scale) return false;
        if (c.sense == Sense::kGreaterEqual && v < c.b - tol * scale) return false;
        if (c.sense == Sense::kEqual && std::abs(v - c.b) > tol * scale) return false;
      }
    return true;
  };

  Eigen::VectorXd cost(n);
  for (int j = 0; j < n; ++j) cost[j] = lp.cost[static_cast<std::size_t>(j)];
  std::optional<double> best;
  std::vector<int> pick(static_cast<std::size_t>(need));
  for (int i = 0; i < need; ++i) pick[static_cast<std::size_t>(i)] = i;
  const int total = static_cast<int>(ineq.size());
  Eigen::MatrixXd A(n, n);
  Eigen::VectorXd b(n);
  while (true) {
    int r = 0;
    for (const auto& c : eq) {
      A.row(r) = c.a.transpose();
      b[r++] = c.b;
    }
    for (int i : pick) {
      A.row(r) = ineq[static_cast<std::size_t>(i)].a.transpose();
      b[r++] = ineq[static_cast<std::size_t>(i)].b;
    }
    Eigen::FullPivLU<Eigen::MatrixXd> lu(A);
    if (lu.rank() == n) {
      const Eigen::VectorXd x = lu.solve(b);
      if (feasible(x)) {
        const double v = cost.dot(x);
        if (!best || v < *best) best = v;
      }
    }
    int i = need - 1;
    while (i >= 0 && pick[static_cast<std::size_t>(i)] == total - need + i) --i;
    if (i < 0) break;
    ++pick[static_cast<std::size_t>(i)];
    for (int k = i + 1; k < need; ++k)
      pick[static_cast<std::size_t>(k)] = pick[static_cast<std::size_t>(k - 1)] + 1;
  }
  return best;
}

void for_each_grid_point(const std::vector<double>& lower, const std::vector<double>& upper,
                         int steps,
                         const std::function<void(const std::vector<double>&)>& f) {
  const std::size_t n = lower.size();
  std::vector<int> idx(n, 0);
  std::vector<double> x(n);
  while (true) {
    for (std::size_t i = 0; i < n; ++i)
      x[i] = steps == 1 ? lower[i]
                        : lower[i] + (upper[i] - lower[i]) * idx[i] / (steps - 1);
    f(x);
    std::size_t i = 0;
    for (; i < n; ++i) {
      if (++idx[i] < steps) break;
      idx[i] = 0;
    }
    if (i == n) break;
  }
}

std::pair<double, double> sampled_range(const std::function<double(double)>& f, double l,
                                        double u, int samples) {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -lo;
  for (int s = 0; s < samples; ++s) {
    const double x = l + (u - l) * s / (samples - 1);
    const double v = f(x);
    lo = std::min(lo, v);
    hi = std::max(hi, v);
  }
  return {lo, hi};
}

bool lifted_point_exists(const MixedModel& m, const std::vector<double>& x,
                         const std::vector<int>& choice, double tol) {
  RelaxOptions opt;
  opt.violation_tol = tol;
  RelaxationSession s(m, opt);
  std::vector<double> zero(static_cast<std::size_t>(m.num_vars()), 0.0);
  s.set_objective(zero, ObjectiveSense::kMinimize);
  for (std::size_t i = 0; i < x.size(); ++i) s.set_bounds(static_cast<int>(i), x[i], x[i]);
  for (std::size_t j = 0; j < m.lambda.size(); ++j)
    for (std::size_t l = 0; l < m.lambda[j].size(); ++l) {
      const double v = static_cast<int>(l) == choice[j] ? 1.0 : 0.0;
      s.set_bounds(m.lambda[j][l], v, v);
    }
  const RelaxResult r = s.solve();
  return r.status == LpStatus::kOptimal && r.max_violation <= tol * 10.0;
}

std::optional<std::vector<int>> satisfied_choice(const DisjunctiveProblem& p,
                                                 const std::vector<double>& x, double tol) {
  std::vector<int> choice;
  for (const auto& d : p.disjunctions) {
    int found = -1;
    for (std::size_t l = 0; l < d.disjuncts.size() && found < 0; ++l)
      if (disjunct_satisfied(d.disjuncts[l], x, tol)) found = static_cast<int>(l);
    if (found < 0) return std::nullopt;
    choice.push_back(found);
  }
  return choice;
}

std::vector<double> random_objective(std::mt19937_64& rng, int n, int total) {
  std::uniform_real_distribution<double> u(-1.0, 1.0);
  std::vector<double> c(static_cast<std::size_t>(total), 0.0);
  for (int i = 0; i < n; ++i) c[static_cast<std::size_t>(i)] = u(rng);
  return c;
}

}  // namespace oracle
