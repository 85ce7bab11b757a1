#pragma once

// Dense-tableau bounded-variable simplex. Primal and dual iterations share one
// tableau, so rows can be appended (cuts, branching) and bounds changed
// between solves while keeping the basis.

#include <cstdint>
#include <span>
#include <string_view>
#include <vector>

#include "splitform/model.hpp"

namespace splitform {

enum class LpStatus {
  kOptimal,
  kInfeasible,
  kUnbounded,
  kIterationLimit,
  kNumericalFailure,
};
std::string_view status_name(LpStatus status);

struct LpOptions {
  double primal_tol = 1e-7;
  double dual_tol = 1e-9;
  double pivot_tol = 1e-9;
  int max_iterations = 200000;
  // Consecutive degenerate pivots before switching to Bland's rule.
  int bland_after = 50;
  int refactor_every = 100;
};

struct LpRow {
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
};

// minimize cost . x  s.t. rows, lower <= x <= upper
struct LpProblem {
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<double> cost;
  std::vector<LpRow> rows;
};

struct LpResult {
  LpStatus status = LpStatus::kNumericalFailure;
  std::vector<double> x;
  double objective = 0.0;
  int iterations = 0;
};

LpResult solve_lp(const LpProblem& lp, const LpOptions& options = {});

class SimplexEngine {
 public:
  SimplexEngine(std::vector<double> lower, std::vector<double> upper,
                std::vector<double> cost, LpOptions options = {});

  // Appends a row; its slack enters the basis, which keeps the current basis
  // dual feasible. Returns the row index.
  int add_row(std::span<const LinearTerm> terms, Sense sense, double rhs);
  void set_bounds(int j, double lower, double upper);
  void set_cost(std::span<const double> cost);

  LpStatus solve();

  int num_structural() const { return n_; }
  int num_rows() const { return m_; }
  double lower(int j) const { return lo_[static_cast<std::size_t>(j)]; }
  double upper(int j) const { return hi_[static_cast<std::size_t>(j)]; }
  double value(int j) const { return x_[static_cast<std::size_t>(j)]; }
  std::vector<double> primal() const;
  double objective() const;
  LpStatus status() const { return status_; }
  std::int64_t iterations() const { return iterations_; }
  const LpOptions& options() const { return options_; }

 private:
  enum class State : std::uint8_t { kBasic, kAtLower, kAtUpper, kFree };

  std::size_t cols() const { return static_cast<std::size_t>(n_ + m_); }
  void place_nonbasic(std::size_t j, bool prefer_lower);
  void compute_duals(bool zero_costs);
  bool make_dual_feasible();
  void recompute_basics();
  bool refactor();
  void pivot(std::size_t r, std::size_t q);
  void move_nonbasic(std::size_t q, double delta);
  double max_residual() const;

  // Returns kOptimal when primal feasible, kInfeasible when the dual ray
  // proves infeasibility.
  LpStatus dual_simplex();
  LpStatus primal_simplex();
  LpStatus run();

  LpOptions options_;
  int n_ = 0;
  int m_ = 0;
  std::vector<double> lo_, hi_, cost_;
  std::vector<std::vector<LinearTerm>> row_terms_;
  std::vector<double> row_rhs_;

  std::vector<std::vector<double>> tab_;  // B^-1 [A | I], m x (n + m)
  std::vector<double> beta_;              // B^-1 rhs
  std::vector<double> d_;                 // reduced costs
  std::vector<double> x_;
  std::vector<int> head_;                 // basic column of each row
  std::vector<State> state_;

  LpStatus status_ = LpStatus::kNumericalFailure;
  std::int64_t iterations_ = 0;
  int pivots_since_refactor_ = 0;
  bool phase_one_ = false;
};

}  // namespace splitform
