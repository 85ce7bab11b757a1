#pragma once

// Reference computations the tests compare the library against. None of them
// goes through the formulation compilers.

#include <cstdint>
#include <functional>
#include <optional>
#include <random>
#include <vector>

#include "splitform/lp.hpp"
#include "splitform/mixed_model.hpp"
#include "splitform/model.hpp"
#include "splitform/solver.hpp"

namespace oracle {

using splitform::DisjunctiveProblem;
using splitform::MixedModel;

struct Enumeration {
  bool feasible = false;
  double objective = 0.0;            // model sense
  std::vector<int> choice;           // active disjunct per disjunction
  std::vector<double> x;
  int patterns = 0;                  // assignments that passed the indicator rows
};

// Exhaustive search over one active disjunct per disjunction. Each pattern is
// a convex program (box, globals, chosen disjuncts) solved on its own.
Enumeration enumerate_assignments(const DisjunctiveProblem& p,
                                  double violation_tol = 1e-9);

// Best vertex of {lower <= x <= upper, rows} by solving every square
// subsystem of active constraints. Small problems only.
std::optional<double> vertex_enumeration_min(const splitform::LpProblem& lp,
                                             double tol = 1e-9);
splitform::LpProblem linear_part(const MixedModel& m);

// Calls f on every point of the regular grid with `steps` points per axis.
void for_each_grid_point(const std::vector<double>& lower,
                         const std::vector<double>& upper, int steps,
                         const std::function<void(const std::vector<double>&)>& f);

// Min and max of f over `samples` evenly spaced points of [l, u].
std::pair<double, double> sampled_range(const std::function<double(double)>& f,
                                        double l, double u, int samples);

// Is the continuous relaxation of m feasible with the x columns fixed to x
// and the indicators fixed to `choice`?
bool lifted_point_exists(const MixedModel& m, const std::vector<double>& x,
                         const std::vector<int>& choice, double tol = 1e-7);

// Index of the first satisfied disjunct of every disjunction, or nullopt.
std::optional<std::vector<int>> satisfied_choice(const DisjunctiveProblem& p,
                                                 const std::vector<double>& x,
                                                 double tol = 1e-9);

// Seeded objective with coefficients uniform in [-1, 1] on x columns.
std::vector<double> random_objective(std::mt19937_64& rng, int n, int total);

}  // namespace oracle
