#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <vector>

#include "splitform/mixed_model.hpp"
#include "splitform/model.hpp"

namespace splitform {

// LP-file dialect: Minimize/Maximize, Subject To (quadratic parts in
// [ ... ] brackets, expanded to q x ^2 + b x with the constant moved to the
// right-hand side), Bounds, Binaries, End. Coefficients use 17 significant
// digits.
void write_lp(const MixedModel& m, std::ostream& out);
void save_lp(const MixedModel& m, const std::string& path);
// Reads what write_lp writes. Roles are not stored in the file and come back
// as Role::kOther; quadratic terms come back as q x^2 + b x with center 0.
MixedModel read_lp(std::istream& in);

// Fixed-layout MPS with generated 8-character names (C0000001, R0000001);
// a leading comment block maps them back to the model names. Number fields
// are written at full precision, so they may run past the classic column
// widths; the reader splits on whitespace. Throws ModelError for models with
// convex rows.
void write_mps(const MixedModel& m, std::ostream& out);
void save_mps(const MixedModel& m, const std::string& path);
MixedModel read_mps(std::istream& in);

// Canonical comparison for round trips: names, bounds, kinds, senses and
// polynomial coefficients of every row agree within rel_tol.
bool models_equivalent(const MixedModel& a, const MixedModel& b, double rel_tol = 1e-12,
                       std::string* why = nullptr);

struct GridRange {
  double lo_i = 0.0;
  double hi_i = 0.0;
  double lo_j = 0.0;
  double hi_j = 0.0;
};

struct FeasibilityGrid {
  int i = 0;
  int j = 1;
  GridRange range;
  int resolution = 0;
  std::string label;
  // flags[a * resolution + b] = 1 when the cell centered at (center_i(a),
  // center_j(b)) is feasible.
  std::vector<std::uint8_t> flags;

  double center_i(int a) const;
  double center_j(int b) const;
  int count() const;
  bool subset_of(const FeasibilityGrid& other) const;
};

struct ProjectOptions {
  int threads = 0;  // 0 = hardware concurrency
  double violation_tol = 1e-6;
};

// Fixes x_i, x_j at every cell center and tests feasibility of the
// continuous relaxation of m. Cells are processed in fixed chunks so the
// result does not depend on the thread count.
FeasibilityGrid project_2d(const MixedModel& m, int i, int j, int resolution,
                           const GridRange& range, const ProjectOptions& options = {});
// Same grid for the disjunction itself: a cell is feasible when some disjunct
// of every disjunction is feasible with x_i, x_j fixed (each disjunction is
// tested on its own, which is exact for a single disjunction).
FeasibilityGrid project_disjunction(const DisjunctiveProblem& p, int i, int j,
                                    int resolution, const GridRange& range,
                                    const ProjectOptions& options = {});
GridRange box_range(const DisjunctiveProblem& p, int i, int j);

void write_grid_csv(const FeasibilityGrid& g, std::ostream& out);
void write_grid_svg(const FeasibilityGrid& g, std::ostream& out);
// Writes <stem>.csv and <stem>.svg.
void render_grid(const FeasibilityGrid& g, const std::string& stem);

}  // namespace splitform
