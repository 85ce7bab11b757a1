#pragma once

#include <cstdint>
#include <limits>
#include <span>
#include <string_view>
#include <vector>

#include "splitform/lp.hpp"
#include "splitform/mixed_model.hpp"

namespace splitform {

struct RelaxOptions {
  // Stop once every convex row is violated by at most this much.
  double violation_tol = 1e-6;
  // Tangent budget per lifted quadratic term and solve() call.
  int max_cuts_per_term = 200;
  LpOptions lp;
};

struct RelaxResult {
  LpStatus status = LpStatus::kNumericalFailure;
  std::vector<double> x;   // model columns
  double objective = 0.0;  // in the model's own sense, constant included
  bool converged = false;  // false: cut budget ran out, value is still a bound
  double max_violation = 0.0;
  int cuts_added = 0;
  int rounds = 0;
  std::int64_t lp_iterations = 0;
};

// Continuous relaxation of a MixedModel (binaries relaxed to [0,1]). Every
// quadratic term q(y-c)^2 of a convex row gets its own column t >= q(y-c)^2,
// approximated from below by tangent lines; the convex rows become linear in
// t. Tangents are globally valid, so a session can be copied, have bounds
// changed and be re-solved while keeping every cut found so far.
class RelaxationSession {
 public:
  explicit RelaxationSession(const MixedModel& model, RelaxOptions options = {});

  void set_bounds(int col, double lower, double upper);
  double lower(int col) const { return engine_.lower(col); }
  double upper(int col) const { return engine_.upper(col); }
  // Replaces the objective (model sense). Zero coefficients = feasibility.
  void set_objective(std::span<const double> coeffs, ObjectiveSense sense,
                     double constant = 0.0);

  RelaxResult solve();

  // Number of tangent cuts held; cuts are appended, never removed.
  std::size_t num_cuts() const { return cuts_.size(); }
  // Copies cuts [from, other.num_cuts()) of a session derived from this one.
  void import_cuts(const RelaxationSession& other, std::size_t from);

  const MixedModel& model() const { return *model_; }
  const RelaxOptions& options() const { return options_; }

 private:
  struct Term {
    int var = 0;
    double quad = 0.0;
    double center = 0.0;
    int column = 0;
  };
  struct Cut {
    int term = 0;
    double point = 0.0;
  };

  void add_tangent(int term, double point);
  double row_violation(std::size_t row, std::span<const double> y) const;
  bool boundary_point(std::size_t row, std::span<const double> y,
                      std::vector<double>& point) const;

  const MixedModel* model_;
  RelaxOptions options_;
  SimplexEngine engine_;
  std::vector<Term> terms_;
  std::vector<std::vector<int>> row_terms_;  // convex row -> terms
  std::vector<Cut> cuts_;
  ObjectiveSense sense_ = ObjectiveSense::kMinimize;
  std::vector<double> obj_;
  double obj_constant_ = 0.0;
};

RelaxResult solve_relaxation(const MixedModel& model,
                             const RelaxOptions& options = {});

enum class MipStatus {
  kOptimal,
  kInfeasible,
  kTimeLimit,
  kNodeLimit,
  kUnbounded,
  kNumericalFailure,
};
std::string_view status_name(MipStatus status);

struct BnbOptions {
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  std::int64_t node_limit = std::numeric_limits<std::int64_t>::max();
  double relative_gap = 1e-6;
  double absolute_gap = 1e-9;
  double integrality_tol = 1e-6;
  RelaxOptions relax;
};

struct MipResult {
  MipStatus status = MipStatus::kInfeasible;
  std::vector<double> x;   // incumbent, empty when none was found
  double objective = std::numeric_limits<double>::quiet_NaN();
  double bound = std::numeric_limits<double>::quiet_NaN();
  double gap = std::numeric_limits<double>::infinity();
  std::int64_t nodes = 0;
  double seconds = 0.0;
  std::int64_t lp_iterations = 0;
  bool has_incumbent() const { return !x.empty(); }
};

// Best-bound branch and bound over the binary columns. Node ties break by
// creation order; the branching column is the most fractional binary, ties to
// the lowest column.
MipResult solve_bnb(const MixedModel& model, const BnbOptions& options = {});

}  // namespace splitform
