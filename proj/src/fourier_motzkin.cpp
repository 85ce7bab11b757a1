#include "splitform/fourier_motzkin.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "splitform/lp.hpp"

namespace splitform {
namespace {

constexpr double kZero = 1e-12;
constexpr double kInf = std::numeric_limits<double>::infinity();

void normalize(Polyhedron::Row& r) {
  double scale = 0.0;
  for (double v : r.a) scale = std::max(scale, std::abs(v));
  if (scale <= kZero) {
    std::fill(r.a.begin(), r.a.end(), 0.0);
    return;
  }
  for (double& v : r.a) v /= scale;
  r.b /= scale;
}

bool same_direction(const Polyhedron::Row& x, const Polyhedron::Row& y) {
  for (std::size_t i = 0; i < x.a.size(); ++i)
    if (std::abs(x.a[i] - y.a[i]) > 1e-12) return false;
  return true;
}

bool is_zero(const Polyhedron::Row& r) {
  return std::all_of(r.a.begin(), r.a.end(), [](double v) { return v == 0.0; });
}

// Normalizes, drops zero rows that hold and keeps the tightest of each
// family of parallel rows. Order of first appearance is preserved.
std::vector<Polyhedron::Row> simplify(std::vector<Polyhedron::Row> rows) {
  std::vector<Polyhedron::Row> out;
  bool infeasible_kept = false;
  for (auto& r : rows) {
    normalize(r);
    if (is_zero(r)) {
      if (r.b >= -1e-9 || infeasible_kept) continue;
      infeasible_kept = true;
      out.push_back(r);
      continue;
    }
    bool merged = false;
    for (auto& o : out)
      if (same_direction(o, r)) {
        o.b = std::min(o.b, r.b);
        merged = true;
        break;
      }
    if (!merged) out.push_back(std::move(r));
  }
  return out;
}

LpResult maximize_over(const Polyhedron& p, const std::vector<double>& c,
                       std::size_t skip = static_cast<std::size_t>(-1),
                       const std::vector<bool>* dropped = nullptr) {
  LpProblem lp;
  lp.lower.assign(static_cast<std::size_t>(p.dim()), -kInf);
  lp.upper.assign(static_cast<std::size_t>(p.dim()), kInf);
  lp.cost.resize(c.size());
  for (std::size_t i = 0; i < c.size(); ++i) lp.cost[i] = -c[i];
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    if (r == skip || (dropped && (*dropped)[r])) continue;
    LpRow row;
    for (std::size_t i = 0; i < p.rows[r].a.size(); ++i)
      if (p.rows[r].a[i] != 0.0) row.terms.push_back({static_cast<int>(i), p.rows[r].a[i]});
    row.rhs = p.rows[r].b;
    lp.rows.push_back(std::move(row));
  }
  LpResult res = solve_lp(lp);
  res.objective = -res.objective;
  return res;
}

}  // namespace

bool Polyhedron::contains(const std::vector<double>& y, double tol) const {
  for (const auto& r : rows) {
    double lhs = 0.0;
    for (std::size_t i = 0; i < r.a.size(); ++i) lhs += r.a[i] * y[i];
    if (lhs > r.b + tol) return false;
  }
  return true;
}

Polyhedron to_polyhedron(const MixedModel& m) {
  if (!m.convex_rows.empty())
    throw ModelError("polyhedral view needs a model without convex rows");
  Polyhedron p;
  const auto n = static_cast<std::size_t>(m.num_vars());
  for (const auto& v : m.vars) p.vars.push_back(v.name);
  for (std::size_t j = 0; j < n; ++j) {
    const auto& v = m.vars[j];
    if (std::isfinite(v.upper)) {
      Polyhedron::Row r{std::vector<double>(n, 0.0), v.upper};
      r.a[j] = 1.0;
      p.rows.push_back(std::move(r));
    }
    if (std::isfinite(v.lower)) {
      Polyhedron::Row r{std::vector<double>(n, 0.0), -v.lower};
      r.a[j] = -1.0;
      p.rows.push_back(std::move(r));
    }
  }
  for (const auto& row : m.rows) {
    std::vector<double> a(n, 0.0);
    for (const auto& t : row.terms) a[static_cast<std::size_t>(t.var)] += t.coeff;
    if (row.sense != Sense::kGreaterEqual) p.rows.push_back({a, row.rhs});
    if (row.sense != Sense::kLessEqual) {
      for (double& v : a) v = -v;
      p.rows.push_back({a, -row.rhs});
    }
  }
  return p;
}

Polyhedron fm_project(const Polyhedron& p, const std::vector<int>& eliminate,
                      const FmLimits& limits) {
  if (p.dim() > limits.max_vars)
    throw FmLimitError("projection refused: " + std::to_string(p.dim()) +
                       " variables exceed the limit of " + std::to_string(limits.max_vars));
  if (static_cast<int>(p.rows.size()) > limits.max_rows)
    throw FmLimitError("projection refused: " + std::to_string(p.rows.size()) +
                       " rows exceed the limit of " + std::to_string(limits.max_rows));
  for (int e : eliminate)
    if (e < 0 || e >= p.dim()) throw ModelError("eliminated column out of range");

  std::vector<Polyhedron::Row> rows = simplify(p.rows);
  for (int e : eliminate) {
    const auto c = static_cast<std::size_t>(e);
    std::vector<Polyhedron::Row> pos, neg, next;
    for (auto& r : rows) {
      if (r.a[c] > kZero) pos.push_back(r);
      else if (r.a[c] < -kZero) neg.push_back(r);
      else {
        r.a[c] = 0.0;
        next.push_back(r);
      }
    }
    if (next.size() + pos.size() * neg.size() > static_cast<std::size_t>(limits.max_intermediate_rows))
      throw FmLimitError("projection refused: intermediate row count exceeds " +
                         std::to_string(limits.max_intermediate_rows));
    for (const auto& rp : pos)
      for (const auto& rn : neg) {
        const double wp = -rn.a[c];
        const double wn = rp.a[c];
        Polyhedron::Row r{std::vector<double>(rp.a.size()), wp * rp.b + wn * rn.b};
        for (std::size_t i = 0; i < r.a.size(); ++i) r.a[i] = wp * rp.a[i] + wn * rn.a[i];
        r.a[c] = 0.0;
        next.push_back(std::move(r));
      }
    rows = simplify(std::move(next));
  }

  std::vector<bool> gone(static_cast<std::size_t>(p.dim()), false);
  for (int e : eliminate) gone[static_cast<std::size_t>(e)] = true;
  Polyhedron out;
  for (std::size_t i = 0; i < gone.size(); ++i)
    if (!gone[i]) out.vars.push_back(p.vars[i]);
  for (const auto& r : rows) {
    Polyhedron::Row nr{{}, r.b};
    for (std::size_t i = 0; i < gone.size(); ++i)
      if (!gone[i]) nr.a.push_back(r.a[i]);
    out.rows.push_back(std::move(nr));
  }
  return out;
}

Polyhedron remove_redundant(const Polyhedron& p, double tol) {
  std::vector<bool> dropped(p.rows.size(), false);
  for (std::size_t r = 0; r < p.rows.size(); ++r) {
    const LpResult res = maximize_over(p, p.rows[r].a, r, &dropped);
    if (res.status == LpStatus::kOptimal && res.objective <= p.rows[r].b + tol)
      dropped[r] = true;
  }
  Polyhedron out;
  out.vars = p.vars;
  for (std::size_t r = 0; r < p.rows.size(); ++r)
    if (!dropped[r]) out.rows.push_back(p.rows[r]);
  return out;
}

Polyhedron reorder(const Polyhedron& p, const std::vector<std::string>& vars) {
  std::vector<int> from;
  for (const auto& name : vars) {
    const auto it = std::find(p.vars.begin(), p.vars.end(), name);
    if (it == p.vars.end()) throw ModelError("column " + name + " not in polyhedron");
    from.push_back(static_cast<int>(it - p.vars.begin()));
  }
  if (from.size() != p.vars.size())
    throw ModelError("reorder must keep every column");
  Polyhedron out;
  out.vars = vars;
  for (const auto& r : p.rows) {
    Polyhedron::Row nr{{}, r.b};
    for (int f : from) nr.a.push_back(r.a[static_cast<std::size_t>(f)]);
    out.rows.push_back(std::move(nr));
  }
  return out;
}

double containment_violation(const Polyhedron& inner, const Polyhedron& outer) {
  const Polyhedron aligned = reorder(outer, inner.vars);
  double worst = -kInf;
  for (const auto& r : aligned.rows) {
    const LpResult res = maximize_over(inner, r.a);
    if (res.status == LpStatus::kInfeasible) return -kInf;
    if (res.status == LpStatus::kUnbounded) return kInf;
    if (res.status != LpStatus::kOptimal)
      throw ModelError("containment LP failed: " + std::string(status_name(res.status)));
    worst = std::max(worst, res.objective - r.b);
  }
  return worst;
}

}  // namespace splitform
