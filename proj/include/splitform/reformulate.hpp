#pragma once

#include <array>
#include <span>
#include <string>
#include <vector>

#include "splitform/bounds.hpp"
#include "splitform/mixed_model.hpp"
#include "splitform/model.hpp"
#include "splitform/partition.hpp"

namespace splitform {

// Big-M rows g(x) + M lambda_l <= b + M per disjunct constraint, with
// M = (upper bound of g without its constant) - (b - constant). When local
// bounds are present, the upper bound is the largest one over the other
// disjuncts' regions. `bounds[j]` must hold one split per disjunction.
MixedModel compile_bigm(const DisjunctiveProblem& problem,
                        const std::vector<AlphaBounds>& bounds);

struct PsplitOptions {
  bool linking = false;
  bool share_alpha = false;
  // Also share affine split sums that differ by a negative factor.
  bool allow_negative = false;
};

// Lifted formulation: per split sum an alpha column, one nu copy per
// disjunct, disaggregation alpha = sum nu, budgets, bound rows and the
// epigraph link (equality for affine sums). Split sums that are empty get no
// columns.
MixedModel compile_psplit(const DisjunctiveProblem& problem,
                          const std::vector<Partition>& parts,
                          const std::vector<AlphaBounds>& bounds,
                          const PsplitOptions& options = {});

// Extended formulation with per-disjunct copies of the disjunction's support
// variables. Throws ModelError("unsupported formulation ...") on any
// quadratic term.
MixedModel compile_hull_linear(const DisjunctiveProblem& problem);

struct TwoTermCut {
  int disjunct = 0;
  std::vector<int> subset;  // splits summed on the left
  SeparableFunction lhs;    // split sums plus the lambda terms
  double rhs = 0.0;
};

// For each disjunct and each nonempty subset of splits:
//   sum_{s in subset} S_s(x) <= (b - c - sum_{s not in subset} lo_s) lambda_self
//                              + (sum_{s in subset} hi_s) lambda_other,
// written as lhs <= 0. Requires two disjuncts with one constraint each.
std::vector<TwoTermCut> two_term_cuts(const Disjunction& d, const Partition& p,
                                      const AlphaBounds& bounds,
                                      std::array<int, 2> lambda_cols);

// The non-extended formulation built only from two_term_cuts rows.
MixedModel compile_two_term(const DisjunctiveProblem& problem,
                            const std::vector<Partition>& parts,
                            const std::vector<AlphaBounds>& bounds);
// Appends two_term_cuts rows to a model that already has the indicators.
void add_two_term_cuts(MixedModel& m, const DisjunctiveProblem& problem,
                       const std::vector<Partition>& parts,
                       const std::vector<AlphaBounds>& bounds);

struct LinkingConstraint {
  int disjunct = 0;
  int k = 0;  // first constraint
  int j = 0;  // second constraint, k < j
  int split = 0;
  int rho1 = 1;
  int rho2 = 1;
  double lower = 0.0;  // range of rho1*S_k + rho2*S_j over the box
  double upper = 0.0;
  bool use_lower = false;
  bool use_upper = false;
};

struct LinkingReport {
  int candidates = 0;  // pairs x splits x sign pairs x 2 sides
  int dropped_no_overlap = 0;
  int dropped_same_signs = 0;
  int dropped_redundant = 0;
  std::vector<LinkingConstraint> kept;  // at least one side in use
  int kept_sides() const;
};

// Linking candidates of disjunct `l`. A side is dropped when the two split
// sums share no variable, when (affine case) every shared variable has the
// same sign in both scaled sums, or when its combined bound is no tighter
// than the sum of the separate alpha bounds.
LinkingReport generate_linking(const Disjunction& d, int l, const Partition& p,
                               const AlphaBounds& bounds,
                               std::span<const double> lower,
                               std::span<const double> upper);

}  // namespace splitform
