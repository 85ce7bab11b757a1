#pragma once

#include <span>
#include <string>
#include <vector>

#include "splitform/model.hpp"

namespace splitform {

enum class VarKind { kContinuous, kBinary };

// What a variable or row stands for in the compiled formulation.
enum class Role {
  kOriginal,      // x
  kAlpha,         // split sum variable
  kNu,            // disaggregated copy of an alpha
  kIndicator,     // lambda
  kHullCopy,      // per-disjunct copy of x (hull)
  kGlobal,        // global row carried over from the problem
  kConvexity,     // sum lambda = 1
  kDisaggregation,
  kBudget,
  kBoundLower,
  kBoundUpper,
  kEpigraph,
  kLinking,
  kBigM,
  kCut,           // two-term non-extended row
  kHullRow,
  kIndicatorRow,
  kOther,
};

struct ModelVar {
  std::string name;
  double lower = 0.0;
  double upper = 0.0;
  VarKind kind = VarKind::kContinuous;
  Role role = Role::kOriginal;
  friend bool operator==(const ModelVar&, const ModelVar&) = default;
};

struct ModelRow {
  std::string name;
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  Role role = Role::kOther;
  friend bool operator==(const ModelRow&, const ModelRow&) = default;
};

// f(y) <= rhs with f convex separable over model variables; always carries at
// least one quadratic term (affine rows are ModelRow).
struct ConvexRow {
  std::string name;
  SeparableFunction f;
  double rhs = 0.0;
  Role role = Role::kEpigraph;
  friend bool operator==(const ConvexRow&, const ConvexRow&) = default;
};

struct MixedModel {
  std::string name;
  std::string formulation;
  std::vector<ModelVar> vars;
  std::vector<ModelRow> rows;
  std::vector<ConvexRow> convex_rows;
  Objective objective;  // coeffs sized to vars
  int num_original = 0;  // x occupies columns [0, num_original)
  // lambda[j][l] = column of the indicator of disjunct l in disjunction j.
  std::vector<std::vector<int>> lambda;

  int add_var(ModelVar v);
  void add_row(ModelRow r) { rows.push_back(std::move(r)); }
  void add_convex_row(ConvexRow r) { convex_rows.push_back(std::move(r)); }

  int num_vars() const { return static_cast<int>(vars.size()); }
  int num_binaries() const;
  int count_role(Role role) const;
  std::vector<int> binary_columns() const;
  int find_var(const std::string& name) const;  // -1 if absent

  double objective_value(std::span<const double> y) const;
  // Max violation over bounds, linear rows and convex rows (0 = feasible).
  double max_violation(std::span<const double> y) const;

  friend bool operator==(const MixedModel&, const MixedModel&) = default;
};

std::string_view role_name(Role role);

// Starts a model with the problem's x columns, globals and objective.
MixedModel model_skeleton(const DisjunctiveProblem& problem,
                          std::string formulation);

// Adds f(y) <= rhs as a linear row when f is affine and a convex row
// otherwise; an affine `equality` becomes an equality row.
void add_separable_row(MixedModel& m, std::string name,
                       const SeparableFunction& f, double rhs, Role role,
                       bool equality = false);

// Indicator columns plus one sum-to-one row per disjunction, and the
// problem's indicator rows. Called by every compiler.
void add_indicators(MixedModel& m, const DisjunctiveProblem& problem);

}  // namespace splitform
