#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>

#include "splitform/lp.hpp"
#include "splitform/simd/kernels.hpp"

namespace splitform {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kDegenerateStep = 1e-12;
constexpr double kSingularPivot = 1e-11;

void axpy(double a, const std::vector<double>& x, std::vector<double>& y) {
  simd::kernels().axpy(a, x.data(), y.data(), x.size());
}

}  // namespace

std::string_view status_name(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

SimplexEngine::SimplexEngine(std::vector<double> lower,
                             std::vector<double> upper,
                             std::vector<double> cost, LpOptions options)
    : options_(options),
      n_(static_cast<int>(lower.size())),
      lo_(std::move(lower)),
      hi_(std::move(upper)),
      cost_(std::move(cost)) {
  if (hi_.size() != lo_.size())
    throw std::invalid_argument("SimplexEngine: bound vectors differ in length");
  cost_.resize(lo_.size(), 0.0);
  x_.assign(lo_.size(), 0.0);
  d_.assign(lo_.size(), 0.0);
  state_.assign(lo_.size(), State::kAtLower);
  for (std::size_t j = 0; j < lo_.size(); ++j) {
    if (lo_[j] > hi_[j])
      throw std::invalid_argument("SimplexEngine: lower > upper for column " +
                                  std::to_string(j));
    place_nonbasic(j, true);
  }
}

void SimplexEngine::place_nonbasic(std::size_t j, bool prefer_lower) {
  const bool lo_ok = std::isfinite(lo_[j]);
  const bool hi_ok = std::isfinite(hi_[j]);
  if (lo_ok && (prefer_lower || !hi_ok || lo_[j] == hi_[j])) {
    state_[j] = State::kAtLower;
    x_[j] = lo_[j];
  } else if (hi_ok) {
    state_[j] = State::kAtUpper;
    x_[j] = hi_[j];
  } else if (lo_ok) {
    state_[j] = State::kAtLower;
    x_[j] = lo_[j];
  } else {
    state_[j] = State::kFree;
    x_[j] = 0.0;
  }
}

int SimplexEngine::add_row(std::span<const LinearTerm> terms, Sense sense,
                           double rhs) {
  const std::size_t slack = cols();
  std::vector<double> row(slack + 1, 0.0);
  double activity = 0.0;
  for (const auto& t : terms) {
    if (t.var < 0 || t.var >= n_)
      throw std::invalid_argument("SimplexEngine::add_row: column " +
                                  std::to_string(t.var) + " out of range");
    row[static_cast<std::size_t>(t.var)] += t.coeff;
    activity += t.coeff * x_[static_cast<std::size_t>(t.var)];
  }
  row[slack] = 1.0;
  for (auto& r : tab_) r.push_back(0.0);
  double b = rhs;
  for (std::size_t r = 0; r < tab_.size(); ++r) {
    const auto h = static_cast<std::size_t>(head_[r]);
    const double a = row[h];
    if (a == 0.0) continue;
    axpy(-a, tab_[r], row);
    b -= a * beta_[r];
    row[h] = 0.0;
  }
  tab_.push_back(std::move(row));
  beta_.push_back(b);
  head_.push_back(static_cast<int>(slack));
  row_terms_.emplace_back(terms.begin(), terms.end());
  row_rhs_.push_back(rhs);

  switch (sense) {
    case Sense::kLessEqual:
      lo_.push_back(0.0);
      hi_.push_back(kInf);
      break;
    case Sense::kGreaterEqual:
      lo_.push_back(-kInf);
      hi_.push_back(0.0);
      break;
    case Sense::kEqual:
      lo_.push_back(0.0);
      hi_.push_back(0.0);
      break;
  }
  cost_.push_back(0.0);
  d_.push_back(0.0);
  state_.push_back(State::kBasic);
  x_.push_back(rhs - activity);
  ++m_;
  return m_ - 1;
}

void SimplexEngine::set_bounds(int j, double lower, double upper) {
  if (j < 0 || j >= n_)
    throw std::invalid_argument("SimplexEngine::set_bounds: bad column");
  if (lower > upper)
    throw std::invalid_argument("SimplexEngine::set_bounds: lower > upper");
  const auto k = static_cast<std::size_t>(j);
  lo_[k] = lower;
  hi_[k] = upper;
  if (state_[k] == State::kBasic) return;
  const double old = x_[k];
  place_nonbasic(k, !(d_[k] < 0.0));
  const double target = x_[k];
  x_[k] = old;
  move_nonbasic(k, target - old);
  x_[k] = target;
}

void SimplexEngine::set_cost(std::span<const double> cost) {
  for (std::size_t j = 0; j < static_cast<std::size_t>(n_); ++j)
    cost_[j] = j < cost.size() ? cost[j] : 0.0;
}

std::vector<double> SimplexEngine::primal() const {
  return {x_.begin(), x_.begin() + n_};
}

double SimplexEngine::objective() const {
  double v = 0.0;
  for (std::size_t j = 0; j < static_cast<std::size_t>(n_); ++j)
    v += cost_[j] * x_[j];
  return v;
}

void SimplexEngine::move_nonbasic(std::size_t q, double delta) {
  if (delta == 0.0) return;
  x_[q] += delta;
  for (std::size_t r = 0; r < tab_.size(); ++r) {
    const double a = tab_[r][q];
    if (a != 0.0) x_[static_cast<std::size_t>(head_[r])] -= a * delta;
  }
}

void SimplexEngine::compute_duals(bool zero_costs) {
  const std::size_t nc = cols();
  d_.assign(nc, 0.0);
  if (!zero_costs) {
    std::copy(cost_.begin(), cost_.end(), d_.begin());
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      const double cb = cost_[static_cast<std::size_t>(head_[r])];
      if (cb != 0.0) axpy(-cb, tab_[r], d_);
    }
  }
  for (int h : head_) d_[static_cast<std::size_t>(h)] = 0.0;
}

bool SimplexEngine::make_dual_feasible() {
  bool ok = true;
  const double tol = options_.dual_tol;
  for (std::size_t j = 0; j < cols(); ++j) {
    const State s = state_[j];
    if (s == State::kBasic || lo_[j] == hi_[j]) continue;
    if (s == State::kAtLower && d_[j] < -tol) {
      if (std::isfinite(hi_[j])) {
        move_nonbasic(j, hi_[j] - x_[j]);
        x_[j] = hi_[j];
        state_[j] = State::kAtUpper;
      } else {
        ok = false;
      }
    } else if (s == State::kAtUpper && d_[j] > tol) {
      if (std::isfinite(lo_[j])) {
        move_nonbasic(j, lo_[j] - x_[j]);
        x_[j] = lo_[j];
        state_[j] = State::kAtLower;
      } else {
        ok = false;
      }
    } else if (s == State::kFree && std::abs(d_[j]) > tol) {
      ok = false;
    }
  }
  return ok;
}

void SimplexEngine::recompute_basics() {
  std::vector<double> xn(cols(), 0.0);
  for (std::size_t j = 0; j < cols(); ++j)
    if (state_[j] != State::kBasic) xn[j] = x_[j];
  const auto& k = simd::kernels();
  for (std::size_t r = 0; r < tab_.size(); ++r)
    x_[static_cast<std::size_t>(head_[r])] =
        beta_[r] - k.dot(tab_[r].data(), xn.data(), xn.size());
}

bool SimplexEngine::refactor() {
  const std::size_t m = tab_.size();
  const std::size_t nc = cols();
  std::vector<std::vector<double>> mat(m, std::vector<double>(nc, 0.0));
  std::vector<double> b(row_rhs_);
  for (std::size_t i = 0; i < m; ++i) {
    for (const auto& t : row_terms_[i])
      mat[i][static_cast<std::size_t>(t.var)] += t.coeff;
    mat[i][static_cast<std::size_t>(n_) + i] = 1.0;
  }
  for (std::size_t k = 0; k < m; ++k) {
    const auto c = static_cast<std::size_t>(head_[k]);
    std::size_t p = k;
    double best = std::abs(mat[k][c]);
    for (std::size_t i = k + 1; i < m; ++i) {
      const double v = std::abs(mat[i][c]);
      if (v > best) {
        best = v;
        p = i;
      }
    }
    if (best < kSingularPivot) return false;
    std::swap(mat[p], mat[k]);
    std::swap(b[p], b[k]);
    const double piv = mat[k][c];
    simd::kernels().scale(1.0 / piv, mat[k].data(), nc);
    b[k] /= piv;
    mat[k][c] = 1.0;
    for (std::size_t i = 0; i < m; ++i) {
      if (i == k) continue;
      const double f = mat[i][c];
      if (f == 0.0) continue;
      axpy(-f, mat[k], mat[i]);
      b[i] -= f * b[k];
      mat[i][c] = 0.0;
    }
  }
  tab_ = std::move(mat);
  beta_ = std::move(b);
  pivots_since_refactor_ = 0;
  return true;
}

void SimplexEngine::pivot(std::size_t r, std::size_t q) {
  auto& pr = tab_[r];
  const double piv = pr[q];
  simd::kernels().scale(1.0 / piv, pr.data(), pr.size());
  beta_[r] /= piv;
  pr[q] = 1.0;
  for (std::size_t i = 0; i < tab_.size(); ++i) {
    if (i == r) continue;
    const double f = tab_[i][q];
    if (f == 0.0) continue;
    axpy(-f, pr, tab_[i]);
    beta_[i] -= f * beta_[r];
    tab_[i][q] = 0.0;
  }
  const double f = d_[q];
  if (f != 0.0) axpy(-f, pr, d_);
  d_[q] = 0.0;
  state_[q] = State::kBasic;
  head_[r] = static_cast<int>(q);
  ++pivots_since_refactor_;
  ++iterations_;
}

double SimplexEngine::max_residual() const {
  double worst = 0.0;
  for (std::size_t i = 0; i < row_terms_.size(); ++i) {
    double lhs = x_[static_cast<std::size_t>(n_) + i];
    double scale = 1.0 + std::abs(row_rhs_[i]) + std::abs(lhs);
    for (const auto& t : row_terms_[i]) {
      const double v = t.coeff * x_[static_cast<std::size_t>(t.var)];
      lhs += v;
      scale += std::abs(v);
    }
    worst = std::max(worst, std::abs(lhs - row_rhs_[i]) / scale);
  }
  return worst;
}

LpStatus SimplexEngine::dual_simplex() {
  const double ptol = options_.primal_tol;
  const double dtol = options_.dual_tol;
  int degenerate = 0;
  while (true) {
    if (iterations_ >= options_.max_iterations) return LpStatus::kIterationLimit;
    if (pivots_since_refactor_ >= options_.refactor_every) {
      if (!refactor()) return LpStatus::kNumericalFailure;
      recompute_basics();
      compute_duals(phase_one_);
    }
    const bool bland = degenerate >= options_.bland_after;

    std::size_t r = tab_.size();
    double worst = 0.0;
    int worst_head = std::numeric_limits<int>::max();
    for (std::size_t i = 0; i < tab_.size(); ++i) {
      const auto h = static_cast<std::size_t>(head_[i]);
      double infeas = 0.0;
      if (x_[h] < lo_[h] - ptol) infeas = lo_[h] - x_[h];
      if (x_[h] > hi_[h] + ptol) infeas = x_[h] - hi_[h];
      if (infeas == 0.0) continue;
      if (bland ? head_[i] < worst_head : infeas > worst) {
        worst = infeas;
        worst_head = head_[i];
        r = i;
      }
    }
    if (r == tab_.size()) return LpStatus::kOptimal;

    const auto leave = static_cast<std::size_t>(head_[r]);
    const bool below = x_[leave] < lo_[leave];
    const auto& row = tab_[r];

    // Harris two-pass ratio test over the eligible nonbasic columns.
    double theta_max = kInf;
    for (std::size_t j = 0; j < cols(); ++j) {
      const State s = state_[j];
      if (s == State::kBasic || lo_[j] == hi_[j]) continue;
      const double a = row[j];
      if (std::abs(a) <= options_.pivot_tol) continue;
      const bool up = s == State::kAtLower || s == State::kFree;
      const bool down = s == State::kAtUpper || s == State::kFree;
      const bool eligible = below ? ((a < 0 && up) || (a > 0 && down))
                                  : ((a > 0 && up) || (a < 0 && down));
      if (!eligible) continue;
      theta_max = std::min(theta_max, (std::abs(d_[j]) + dtol) / std::abs(a));
    }
    if (theta_max == kInf) return LpStatus::kInfeasible;

    std::size_t q = cols();
    double best = -1.0;
    for (std::size_t j = 0; j < cols(); ++j) {
      const State s = state_[j];
      if (s == State::kBasic || lo_[j] == hi_[j]) continue;
      const double a = row[j];
      if (std::abs(a) <= options_.pivot_tol) continue;
      const bool up = s == State::kAtLower || s == State::kFree;
      const bool down = s == State::kAtUpper || s == State::kFree;
      const bool eligible = below ? ((a < 0 && up) || (a > 0 && down))
                                  : ((a > 0 && up) || (a < 0 && down));
      if (!eligible) continue;
      const double ratio = std::abs(d_[j]) / std::abs(a);
      if (ratio > theta_max) continue;
      const double score = bland ? -ratio : std::abs(a);
      if (q == cols() || score > best) {
        best = score;
        q = j;
      }
    }
    const double step = std::abs(d_[q]) / std::abs(row[q]);
    degenerate = step < kDegenerateStep ? degenerate + 1 : 0;

    const double target = below ? lo_[leave] : hi_[leave];
    const double delta = (x_[leave] - target) / row[q];
    move_nonbasic(q, delta);
    x_[leave] = target;
    state_[leave] = below || lo_[leave] == hi_[leave] ? State::kAtLower
                                                       : State::kAtUpper;
    pivot(r, q);
  }
}

LpStatus SimplexEngine::primal_simplex() {
  const double ptol = options_.primal_tol;
  const double dtol = options_.dual_tol;
  int degenerate = 0;
  while (true) {
    if (iterations_ >= options_.max_iterations) return LpStatus::kIterationLimit;
    if (pivots_since_refactor_ >= options_.refactor_every) {
      if (!refactor()) return LpStatus::kNumericalFailure;
      recompute_basics();
      compute_duals(false);
    }
    const bool bland = degenerate >= options_.bland_after;

    std::size_t q = cols();
    double best = 0.0;
    for (std::size_t j = 0; j < cols(); ++j) {
      const State s = state_[j];
      if (s == State::kBasic || lo_[j] == hi_[j]) continue;
      const double dj = d_[j];
      const bool inc = (s == State::kAtLower || s == State::kFree) && dj < -dtol;
      const bool dec = (s == State::kAtUpper || s == State::kFree) && dj > dtol;
      if (!inc && !dec) continue;
      if (bland) {
        q = j;
        break;
      }
      if (std::abs(dj) > best) {
        best = std::abs(dj);
        q = j;
      }
    }
    if (q == cols()) return LpStatus::kOptimal;
    const double dir = d_[q] < 0.0 ? 1.0 : -1.0;

    double theta_max = kInf;
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      const double a = tab_[r][q] * dir;
      const auto h = static_cast<std::size_t>(head_[r]);
      if (a > options_.pivot_tol && std::isfinite(lo_[h]))
        theta_max = std::min(theta_max, (x_[h] - lo_[h] + ptol) / a);
      else if (a < -options_.pivot_tol && std::isfinite(hi_[h]))
        theta_max = std::min(theta_max, (hi_[h] - x_[h] + ptol) / -a);
    }
    const double flip = hi_[q] - lo_[q];  // inf when either side is open

    std::size_t r_best = tab_.size();
    double score_best = -kInf;
    double ratio_best = 0.0;
    for (std::size_t r = 0; r < tab_.size(); ++r) {
      const double a = tab_[r][q] * dir;
      const auto h = static_cast<std::size_t>(head_[r]);
      double ratio;
      if (a > options_.pivot_tol && std::isfinite(lo_[h]))
        ratio = (x_[h] - lo_[h]) / a;
      else if (a < -options_.pivot_tol && std::isfinite(hi_[h]))
        ratio = (hi_[h] - x_[h]) / -a;
      else
        continue;
      if (ratio > theta_max) continue;
      const double score = bland ? -ratio : std::abs(a);
      if (r_best == tab_.size() || score > score_best) {
        score_best = score;
        r_best = r;
        ratio_best = ratio;
      }
    }

    if (r_best == tab_.size() || flip <= ratio_best) {
      if (!std::isfinite(flip)) return LpStatus::kUnbounded;
      const double target = dir > 0 ? hi_[q] : lo_[q];
      move_nonbasic(q, target - x_[q]);
      x_[q] = target;
      state_[q] = dir > 0 ? State::kAtUpper : State::kAtLower;
      ++iterations_;
      degenerate = 0;
      continue;
    }

    const double theta = std::max(0.0, ratio_best);
    degenerate = theta < kDegenerateStep ? degenerate + 1 : 0;
    const double a = tab_[r_best][q] * dir;
    const auto leave = static_cast<std::size_t>(head_[r_best]);
    move_nonbasic(q, dir * theta);
    if (a > 0) {
      x_[leave] = lo_[leave];
      state_[leave] = State::kAtLower;
    } else {
      x_[leave] = hi_[leave];
      state_[leave] = lo_[leave] == hi_[leave] ? State::kAtLower : State::kAtUpper;
    }
    pivot(r_best, q);
  }
}

LpStatus SimplexEngine::run() {
  phase_one_ = false;
  compute_duals(false);
  if (make_dual_feasible()) {
    const LpStatus st = dual_simplex();
    if (st != LpStatus::kOptimal) return st;
    return primal_simplex();
  }
  // Zero costs make any basis dual feasible, so the dual simplex doubles as a
  // phase one.
  phase_one_ = true;
  compute_duals(true);
  const LpStatus st = dual_simplex();
  phase_one_ = false;
  if (st != LpStatus::kOptimal) return st;
  compute_duals(false);
  return primal_simplex();
}

LpStatus SimplexEngine::solve() {
  for (int attempt = 0; attempt < 3; ++attempt) {
    LpStatus st = run();
    if (st == LpStatus::kIterationLimit || st == LpStatus::kNumericalFailure) {
      status_ = st;
      return st;
    }
    recompute_basics();
    bool suspicious = max_residual() > 1e-9;
    if (st == LpStatus::kOptimal) {
      for (std::size_t r = 0; r < tab_.size() && !suspicious; ++r) {
        const auto h = static_cast<std::size_t>(head_[r]);
        if (x_[h] < lo_[h] - options_.primal_tol ||
            x_[h] > hi_[h] + options_.primal_tol)
          suspicious = true;
      }
    } else if (st == LpStatus::kInfeasible && pivots_since_refactor_ > 0) {
      suspicious = true;  // confirm the certificate on a fresh factorization
    }
    if (!suspicious) {
      status_ = st;
      return st;
    }
    if (!refactor()) break;
    recompute_basics();
    if (st == LpStatus::kInfeasible && attempt > 0) {
      status_ = st;
      return st;
    }
  }
  status_ = LpStatus::kNumericalFailure;
  return status_;
}

LpResult solve_lp(const LpProblem& lp, const LpOptions& options) {
  SimplexEngine engine(lp.lower, lp.upper, lp.cost, options);
  for (const auto& row : lp.rows) engine.add_row(row.terms, row.sense, row.rhs);
  LpResult result;
  result.status = engine.solve();
  result.x = engine.primal();
  result.objective = engine.objective();
  result.iterations = static_cast<int>(engine.iterations());
  return result;
}

}  // namespace splitform
