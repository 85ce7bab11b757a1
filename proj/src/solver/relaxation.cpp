#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <tuple>

#include "splitform/solver.hpp"

namespace splitform {
namespace {

double square_term(double q, double c, double v) {
  const double d = v - c;
  return q * d * d;
}

std::vector<double> session_costs(const MixedModel& m, int total_cols) {
  std::vector<double> cost(static_cast<std::size_t>(total_cols), 0.0);
  const double sign = m.objective.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  for (std::size_t i = 0; i < m.objective.coeffs.size(); ++i)
    cost[i] = sign * m.objective.coeffs[i];
  return cost;
}

}  // namespace

namespace {

// Rows may be violated by the LP's own feasibility tolerance, so it must not
// exceed the tolerance the convex rows are held to.
RelaxOptions consistent(RelaxOptions o) {
  o.lp.primal_tol = std::min(o.lp.primal_tol, 0.1 * o.violation_tol);
  return o;
}

}  // namespace

RelaxationSession::RelaxationSession(const MixedModel& model,
                                     RelaxOptions options)
    : model_(&model),
      options_(consistent(options)),
      engine_({}, {}, {}, options_.lp),
      sense_(model.objective.sense),
      obj_(model.objective.coeffs),
      obj_constant_(model.objective.constant) {
  const int nv = model.num_vars();
  std::map<std::tuple<int, double, double>, int> index;
  row_terms_.resize(model.convex_rows.size());
  for (std::size_t r = 0; r < model.convex_rows.size(); ++r) {
    for (const auto& t : model.convex_rows[r].f.terms()) {
      if (t.quad == 0.0) continue;
      const auto key = std::make_tuple(t.var, t.quad, t.center);
      auto it = index.find(key);
      if (it == index.end()) {
        const int id = static_cast<int>(terms_.size());
        terms_.push_back({t.var, t.quad, t.center, nv + id});
        it = index.emplace(key, id).first;
      }
      row_terms_[r].push_back(it->second);
    }
  }

  const int total = nv + static_cast<int>(terms_.size());
  std::vector<double> lo(static_cast<std::size_t>(total));
  std::vector<double> hi(static_cast<std::size_t>(total));
  for (int j = 0; j < nv; ++j) {
    const auto& v = model.vars[static_cast<std::size_t>(j)];
    lo[static_cast<std::size_t>(j)] = v.lower;
    hi[static_cast<std::size_t>(j)] = v.upper;
  }
  for (const auto& t : terms_) {
    const auto& v = model.vars[static_cast<std::size_t>(t.var)];
    const double a = square_term(t.quad, t.center, v.lower);
    const double b = square_term(t.quad, t.center, v.upper);
    const double inside = std::clamp(t.center, v.lower, v.upper);
    lo[static_cast<std::size_t>(t.column)] = square_term(t.quad, t.center, inside);
    hi[static_cast<std::size_t>(t.column)] = std::max(a, b);
  }
  engine_ = SimplexEngine(std::move(lo), std::move(hi),
                          session_costs(model, total), options_.lp);

  for (const auto& row : model.rows) engine_.add_row(row.terms, row.sense, row.rhs);
  for (std::size_t r = 0; r < model.convex_rows.size(); ++r) {
    const auto& row = model.convex_rows[r];
    std::vector<LinearTerm> terms;
    std::size_t k = 0;
    for (const auto& t : row.f.terms()) {
      if (t.quad != 0.0)
        terms.push_back({terms_[static_cast<std::size_t>(row_terms_[r][k++])].column, 1.0});
      if (t.lin != 0.0) terms.push_back({t.var, t.lin});
    }
    engine_.add_row(terms, Sense::kLessEqual, row.rhs - row.f.constant());
  }
  for (int id = 0; id < static_cast<int>(terms_.size()); ++id) {
    const auto& v = model.vars[static_cast<std::size_t>(terms_[static_cast<std::size_t>(id)].var)];
    add_tangent(id, v.lower);
    if (v.upper > v.lower) {
      add_tangent(id, 0.5 * (v.lower + v.upper));
      add_tangent(id, v.upper);
    }
  }
}

void RelaxationSession::add_tangent(int term, double point) {
  const Term& t = terms_[static_cast<std::size_t>(term)];
  const double slope = 2.0 * t.quad * (point - t.center);
  const double value = square_term(t.quad, t.center, point);
  // t >= value + slope (y - point)
  const LinearTerm row[2] = {{t.var, slope}, {t.column, -1.0}};
  engine_.add_row(row, Sense::kLessEqual, slope * point - value);
  cuts_.push_back({term, point});
}

void RelaxationSession::import_cuts(const RelaxationSession& other,
                                    std::size_t from) {
  for (std::size_t i = from; i < other.cuts_.size(); ++i)
    add_tangent(other.cuts_[i].term, other.cuts_[i].point);
}

void RelaxationSession::set_bounds(int col, double lower, double upper) {
  engine_.set_bounds(col, lower, upper);
}

void RelaxationSession::set_objective(std::span<const double> coeffs,
                                      ObjectiveSense sense, double constant) {
  sense_ = sense;
  obj_.assign(coeffs.begin(), coeffs.end());
  obj_.resize(static_cast<std::size_t>(model_->num_vars()), 0.0);
  obj_constant_ = constant;
  const double sign = sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  std::vector<double> cost(static_cast<std::size_t>(engine_.num_structural()), 0.0);
  for (std::size_t i = 0; i < obj_.size(); ++i) cost[i] = sign * obj_[i];
  engine_.set_cost(cost);
}

double RelaxationSession::row_violation(std::size_t row,
                                        std::span<const double> y) const {
  const auto& r = model_->convex_rows[row];
  return r.f.evaluate(y) - r.rhs;
}

bool RelaxationSession::boundary_point(std::size_t row, std::span<const double> y,
                                       std::vector<double>& point) const {
  // Walks from the term centers towards y and returns where the row becomes
  // tight; the tangents there support the whole row, not just one term.
  const auto& r = model_->convex_rows[row];
  double a = 0.0;
  double b = 0.0;
  double c = r.f.constant() - r.rhs;
  for (const auto& t : r.f.terms()) {
    const double yv = y[static_cast<std::size_t>(t.var)];
    if (t.quad == 0.0) {
      c += t.lin * yv;
      continue;
    }
    const double d = yv - t.center;
    a += t.quad * d * d;
    b += t.lin * d;
    c += t.lin * t.center;
  }
  if (c >= 0.0 || a <= 0.0) return false;
  const double disc = b * b - 4.0 * a * c;
  const double theta = (-b + std::sqrt(std::max(disc, 0.0))) / (2.0 * a);
  if (!(theta > 0.0 && theta < 1.0)) return false;
  point.clear();
  for (const auto& t : r.f.terms()) {
    if (t.quad == 0.0) continue;
    const double yv = y[static_cast<std::size_t>(t.var)];
    point.push_back(t.center + theta * (yv - t.center));
  }
  return true;
}

RelaxResult RelaxationSession::solve() {
  RelaxResult res;
  const std::int64_t it0 = engine_.iterations();
  const auto nv = static_cast<std::size_t>(model_->num_vars());
  const double tol = options_.violation_tol;
  std::vector<int> budget(terms_.size(), options_.max_cuts_per_term);
  std::vector<double> y;
  std::vector<double> point;
  constexpr int kStallRounds = 50;
  double best_worst = std::numeric_limits<double>::infinity();
  int stalled = 0;
  while (true) {
    res.status = engine_.solve();
    ++res.rounds;
    y = engine_.primal();
    if (res.status != LpStatus::kOptimal) break;

    double worst = 0.0;
    int added = 0;
    for (std::size_t r = 0; r < model_->convex_rows.size(); ++r) {
      const double viol = row_violation(r, y);
      worst = std::max(worst, viol);
      if (viol <= tol) continue;
      const double floor = 1e-3 * tol / static_cast<double>(row_terms_[r].size());
      for (int id : row_terms_[r]) {
        const Term& t = terms_[static_cast<std::size_t>(id)];
        if (budget[static_cast<std::size_t>(id)] <= 0) continue;
        const double yv = y[static_cast<std::size_t>(t.var)];
        const double gap = square_term(t.quad, t.center, yv) -
                           y[static_cast<std::size_t>(t.column)];
        if (gap <= floor) continue;
        add_tangent(id, yv);
        --budget[static_cast<std::size_t>(id)];
        ++added;
        ++res.cuts_added;
      }
      if (boundary_point(r, y, point)) {
        for (std::size_t k = 0; k < point.size(); ++k) {
          const int id = row_terms_[r][k];
          if (budget[static_cast<std::size_t>(id)] <= 0) continue;
          add_tangent(id, point[k]);
          --budget[static_cast<std::size_t>(id)];
          ++added;
          ++res.cuts_added;
        }
      }
    }
    res.max_violation = worst;
    if (worst <= tol) {
      res.converged = true;
      break;
    }
    if (added == 0) break;
    // Give up once the violation has not halved for a while; the value is
    // still a valid bound.
    if (worst < 0.5 * best_worst) {
      best_worst = worst;
      stalled = 0;
    } else if (++stalled >= kStallRounds) {
      break;
    }
  }
  res.x.assign(y.begin(), y.begin() + static_cast<std::ptrdiff_t>(std::min(nv, y.size())));
  double v = obj_constant_;
  for (std::size_t i = 0; i < obj_.size() && i < res.x.size(); ++i) v += obj_[i] * res.x[i];
  res.objective = v;
  res.lp_iterations = engine_.iterations() - it0;
  return res;
}

RelaxResult solve_relaxation(const MixedModel& model,
                             const RelaxOptions& options) {
  RelaxationSession session(model, options);
  return session.solve();
}

}  // namespace splitform
