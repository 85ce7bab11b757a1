#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "splitform/bounds.hpp"
#include "splitform/model.hpp"
#include "splitform/partition.hpp"

namespace splitform {

// sum x_i^2 <= 1  or  sum -x_i <= -12, x in [-4, 4]^4. Zero objective.
DisjunctiveProblem make_ex1();
// Two disjuncts of two affine rows each over [0, 5]^4. Zero objective.
DisjunctiveProblem make_ex2();

// The closed-form bounds of the ex-1 illustration that use -1 <= x_i, for a
// uniform P-split with P in {1, 2, 4}: with m = 0.5P^2 - 3.5P + 7, disjunct 0
// splits get [0, 16m] and disjunct 1 splits get [-4m, m]. Provenance user.
AlphaBounds ex1_closed_form_bounds(int P);

using Point = std::vector<double>;

// One disjunction per point, disjunct j: ||c_j - p||^2 - r_i <= 0.
// Columns: center j coordinate d at j*dim + d, r_i at k*dim + i. Centers live
// in the data bounding box, r_i in [0, max pairwise squared distance].
// Minimizes sum r_i. Partition atoms group each coordinate across centers;
// r_i joins the last atom.
DisjunctiveProblem make_clustering(const std::vector<Point>& points, int k);
// Lower 0 and upper = largest squared pairwise distance over the split's
// coordinates (minus r_i's range when r_i is in the split). These hold at any
// solution whose centers lie in the convex hull of the data, which includes
// every optimum, but not over the whole box.
std::vector<AlphaBounds> clustering_alpha_bounds(
    const std::vector<Point>& points, int k, const DisjunctiveProblem& problem,
    const std::vector<Partition>& parts);
// CSV, one point per row, optional non-numeric header line.
std::vector<Point> load_points_csv(const std::string& path);

// Unit balls with seeded centers uniform in [0, 10]^dim, one disjunction per
// point over the balls, at most one point per ball, minimizing the total l1
// distance over unordered point pairs through t >= |x^a_d - x^b_d|.
DisjunctiveProblem make_pball(int n_balls, int n_points, int dim,
                              std::uint64_t seed);
DisjunctiveProblem make_pball_with_centers(const std::vector<Point>& centers,
                                           int n_points);
std::vector<Point> pball_centers(int n_balls, int dim, std::uint64_t seed);

enum class Activation { kRelu, kLinear };

struct Layer {
  std::vector<std::vector<double>> w;  // out x in
  std::vector<double> b;
  Activation act = Activation::kRelu;
  friend bool operator==(const Layer&, const Layer&) = default;
};

struct NetworkWeights {
  std::vector<Layer> layers;
  int inputs() const;
  friend bool operator==(const NetworkWeights&, const NetworkWeights&) = default;
};

// Throws ModelError on empty networks and broken dimension chains.
void check_network(const NetworkWeights& nn);
NetworkWeights network_from_json(const std::string& text);
std::string network_to_json(const NetworkWeights& nn);
NetworkWeights load_network(const std::string& path);
void save_network(const std::string& path, const NetworkWeights& nn);
// Weights and biases uniform in [-1, 1]; hidden layers relu, last linear.
NetworkWeights random_network(const std::vector<int>& sizes, std::uint64_t seed);
// Activations of every layer for input x (last entry = outputs).
std::vector<std::vector<double>> forward(const NetworkWeights& nn,
                                         const std::vector<double>& x);

// Maximizes output `target` over inputs in [0, 1] with sum x <= l1_budget.
// Hidden nodes get columns named "h<layer>_<node>"; node bounds come from
// interval arithmetic. Stable nodes need no disjunction: inactive ones are
// fixed to 0, active ones get an equality row. Every unstable node becomes a
// two-disjunct disjunction with three rows per disjunct.
DisjunctiveProblem make_osif(const NetworkWeights& nn, int target, double l1_budget);

// Seeded random affine disjunction over [-1, 1]^n: `terms` disjuncts with one
// or two rows each, every disjunct nonempty over the box. Zero objective.
DisjunctiveProblem make_random_affine(int n, int terms, std::uint64_t seed);

}  // namespace splitform
