#pragma once

#include <stdexcept>
#include <string>
#include <vector>

#include "splitform/mixed_model.hpp"

namespace splitform {

// { y : a_r . y <= b_r for every row r } over named columns.
struct Polyhedron {
  std::vector<std::string> vars;
  struct Row {
    std::vector<double> a;
    double b = 0.0;
  };
  std::vector<Row> rows;

  int dim() const { return static_cast<int>(vars.size()); }
  bool contains(const std::vector<double>& y, double tol = 1e-9) const;
};

class FmLimitError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct FmLimits {
  int max_vars = 12;
  int max_rows = 64;
  int max_intermediate_rows = 4000;
};

// Linear rows and finite column bounds of a model without convex rows.
// Equalities become two rows.
Polyhedron to_polyhedron(const MixedModel& m);

// Eliminates the given columns (indices into p.vars) one at a time, dropping
// rows that are zero, or duplicates of another row up to a positive factor
// (the smaller right-hand side wins). Throws FmLimitError past the limits.
Polyhedron fm_project(const Polyhedron& p, const std::vector<int>& eliminate,
                      const FmLimits& limits = {});

// Drops every row implied by the others (one LP per row).
Polyhedron remove_redundant(const Polyhedron& p, double tol = 1e-9);

// max over `inner` of a.y - b for every row of `outer`; <= tol means inner is
// contained in outer. Returns +inf when inner is unbounded in some row's
// direction and -inf when inner is empty. Columns are matched by name.
double containment_violation(const Polyhedron& inner, const Polyhedron& outer);

// Restricts p to a subset of named columns by permutation; the caller must
// have eliminated every other column.
Polyhedron reorder(const Polyhedron& p, const std::vector<std::string>& vars);

}  // namespace splitform
