#pragma once

// Core data model: disjunctions of convex additively separable constraints
// over a finite box, optionally intersected with global linear rows.

#include <compare>
#include <span>
#include <stdexcept>
#include <string>
#include <vector>

namespace splitform {

inline constexpr double kDefaultFeasibilityTol = 1e-7;

// Thrown for malformed input (bad indices, bad shapes, failed validation).
class ModelError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// A formulation or file format that cannot express the given model.
class UnsupportedError : public ModelError {
 public:
  using ModelError::ModelError;
};

enum class Sense { kLessEqual, kGreaterEqual, kEqual };
enum class ObjectiveSense { kMinimize, kMaximize };

struct LinearTerm {
  int var = 0;
  double coeff = 0.0;
  friend bool operator==(const LinearTerm&, const LinearTerm&) = default;
};

// q * (x - c)^2 + a * x on a single variable. q >= 0 keeps it convex.
struct UnivariateTerm {
  int var = 0;
  double quad = 0.0;
  double center = 0.0;
  double lin = 0.0;

  double value(double x) const {
    const double d = x - center;
    return quad * d * d + lin * x;
  }
  double derivative(double x) const { return 2.0 * quad * (x - center) + lin; }
  bool is_affine() const { return quad == 0.0; }
  friend bool operator==(const UnivariateTerm&, const UnivariateTerm&) = default;
};

// constant + sum of univariate terms, at most one term per variable. Terms are
// kept sorted by variable index; adding a term on an existing variable merges
// it into the canonical q*(x-c)^2 + a*x form.
class SeparableFunction {
 public:
  SeparableFunction() = default;
  explicit SeparableFunction(double constant) : constant_(constant) {}

  SeparableFunction& add_term(const UnivariateTerm& term);
  SeparableFunction& add_linear(int var, double coeff) {
    return add_term({var, 0.0, 0.0, coeff});
  }
  SeparableFunction& add_quadratic(int var, double quad, double center) {
    return add_term({var, quad, center, 0.0});
  }
  SeparableFunction& add_constant(double c) {
    constant_ += c;
    return *this;
  }

  const std::vector<UnivariateTerm>& terms() const { return terms_; }
  double constant() const { return constant_; }
  bool empty() const { return terms_.empty(); }
  bool is_affine() const;
  // Pointer to the term on `var`, or nullptr.
  const UnivariateTerm* find(int var) const;
  std::vector<int> support() const;

  double evaluate(std::span<const double> x) const;

  // The terms whose variable satisfies `keep`, without the constant.
  template <typename Pred>
  SeparableFunction restrict_to(Pred keep) const {
    SeparableFunction out;
    for (const auto& t : terms_)
      if (keep(t.var)) out.terms_.push_back(t);
    return out;
  }
  SeparableFunction scaled(double factor) const;
  // Relabels every variable index through `map` (map[old] = new).
  SeparableFunction remapped(std::span<const int> map) const;

  friend bool operator==(const SeparableFunction&,
                         const SeparableFunction&) = default;

 private:
  std::vector<UnivariateTerm> terms_;
  double constant_ = 0.0;
};

// lhs(x) <= rhs
struct DisjunctConstraint {
  SeparableFunction lhs;
  double rhs = 0.0;
  friend bool operator==(const DisjunctConstraint&,
                         const DisjunctConstraint&) = default;
};

struct Disjunct {
  std::vector<DisjunctConstraint> constraints;
  friend bool operator==(const Disjunct&, const Disjunct&) = default;
};

struct Disjunction {
  std::vector<Disjunct> disjuncts;
  // Union of the variable supports of every constraint, sorted.
  std::vector<int> support() const;
  friend bool operator==(const Disjunction&, const Disjunction&) = default;
};

// terms . x (sense) rhs over the problem variables.
struct LinearConstraint {
  std::vector<LinearTerm> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  friend bool operator==(const LinearConstraint&,
                         const LinearConstraint&) = default;
};

// A linear row over disjunct indicators, e.g. "each ball takes at most one
// point". Terms refer to (disjunction, disjunct) pairs.
struct IndicatorTerm {
  int disjunction = 0;
  int disjunct = 0;
  double coeff = 0.0;
  friend bool operator==(const IndicatorTerm&, const IndicatorTerm&) = default;
};
struct IndicatorConstraint {
  std::vector<IndicatorTerm> terms;
  Sense sense = Sense::kLessEqual;
  double rhs = 0.0;
  friend bool operator==(const IndicatorConstraint&,
                         const IndicatorConstraint&) = default;
};

struct Objective {
  std::vector<double> coeffs;  // length n
  double constant = 0.0;
  ObjectiveSense sense = ObjectiveSense::kMinimize;
  friend bool operator==(const Objective&, const Objective&) = default;
};

struct DisjunctiveProblem {
  std::string name;
  int n = 0;
  std::vector<double> lower;
  std::vector<double> upper;
  std::vector<std::string> var_names;  // empty or length n
  std::vector<LinearConstraint> globals;
  Objective objective;
  std::vector<Disjunction> disjunctions;
  std::vector<IndicatorConstraint> indicator_rows;
  // Optional per-disjunction grouping of variables that default partitioning
  // keeps together (e.g. one coordinate of every cluster center). Empty means
  // every support variable is its own atom, in index order.
  std::vector<std::vector<std::vector<int>>> partition_atoms;

  std::string var_name(int i) const;
  friend bool operator==(const DisjunctiveProblem&,
                         const DisjunctiveProblem&) = default;
};

struct ValidationReport {
  std::vector<std::string> errors;
  std::vector<std::string> warnings;
  bool ok() const { return errors.empty(); }
};

// Structural checks plus one convex feasibility solve per disjunct.
ValidationReport validate(const DisjunctiveProblem& problem,
                          double tol = kDefaultFeasibilityTol);
// Throws ModelError listing every error if validate() fails.
void require_valid(const DisjunctiveProblem& problem);

double evaluate(const SeparableFunction& f, std::span<const double> x);

bool disjunct_satisfied(const Disjunct& d, std::span<const double> x,
                        double tol = kDefaultFeasibilityTol);
bool disjunction_satisfied(const Disjunction& d, std::span<const double> x,
                           double tol = kDefaultFeasibilityTol);

// Every disjunction satisfied, globals and box respected.
bool problem_feasible(const DisjunctiveProblem& problem,
                      std::span<const double> x,
                      double tol = kDefaultFeasibilityTol);

double objective_value(const DisjunctiveProblem& problem,
                       std::span<const double> x);

}  // namespace splitform
