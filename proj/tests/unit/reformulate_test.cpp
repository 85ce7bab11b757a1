#include <random>

#include "doctest.h"
#include "oracles.hpp"
#include "splitform/bounds.hpp"
#include "splitform/instances.hpp"
#include "splitform/reformulate.hpp"

using namespace splitform;

namespace {

MixedModel psplit(const DisjunctiveProblem& p, int P, PsplitOptions o = {}) {
  const auto parts = partitions_for(p, P);
  return compile_psplit(p, parts, alpha_bounds_interval(p, parts), o);
}

}  // namespace

TEST_CASE("p-split column and row counts on ex1") {
  const auto p = make_ex1();
  const auto m = psplit(p, 2);
  CHECK(m.num_original == 4);
  CHECK(m.num_binaries() == 2);
  CHECK(m.count_role(Role::kAlpha) == 4);
  CHECK(m.count_role(Role::kNu) == 8);
  // The quadratic disjunct's epigraph rows are convex, the affine ones linear.
  CHECK(m.convex_rows.size() == 2);
  CHECK(m.lambda.size() == 1);
  CHECK(m.lambda[0].size() == 2);
}

TEST_CASE("hull is affine only") {
  CHECK_THROWS_AS(compile_hull_linear(make_ex1()), UnsupportedError);
  const auto h = compile_hull_linear(make_ex2());
  CHECK(h.count_role(Role::kHullCopy) == 8);
  CHECK(h.convex_rows.empty());
}

TEST_CASE("every formulation keeps the points of the disjunction") {
  std::mt19937_64 rng(5);
  for (const auto& p : {make_ex1(), make_ex2(), make_random_affine(4, 3, 9)}) {
    const auto parts1 = partitions_for(p, 1);
    std::vector<MixedModel> models{
        compile_bigm(p, alpha_bounds_interval(p, parts1)), psplit(p, 1), psplit(p, 2),
        psplit(p, 2, {true, true, true})};
    int checked = 0;
    for (int trial = 0; trial < 400 && checked < 40; ++trial) {
      std::vector<double> x(static_cast<std::size_t>(p.n));
      for (int i = 0; i < p.n; ++i)
        x[static_cast<std::size_t>(i)] = std::uniform_real_distribution<double>(
            p.lower[static_cast<std::size_t>(i)], p.upper[static_cast<std::size_t>(i)])(rng);
      const auto choice = oracle::satisfied_choice(p, x);
      if (!choice) continue;
      ++checked;
      for (const auto& m : models) CHECK(oracle::lifted_point_exists(m, x, *choice));
    }
    CHECK(checked > 0);
  }
}

TEST_CASE("two-term cuts enumerate every nonempty subset") {
  const auto p = make_ex1();
  const auto part = partition_uniform(4, 2);
  const auto b = alpha_bounds_interval(p.disjunctions[0], part, p.lower, p.upper);
  const auto cuts = two_term_cuts(p.disjunctions[0], part, b, {4, 5});
  CHECK(cuts.size() == 6);  // 2 disjuncts x 3 subsets
  CHECK_THROWS(two_term_cuts(make_ex2().disjunctions[0], part,
                             alpha_bounds_interval(make_ex2().disjunctions[0], part,
                                                   make_ex2().lower, make_ex2().upper),
                             {4, 5}));
}

TEST_CASE("linking candidates on ex2") {
  const auto p = make_ex2();
  const auto part = partition_uniform(4, 2);
  const auto b = alpha_bounds_interval(p.disjunctions[0], part, p.lower, p.upper);
  int total = 0;
  for (int l = 0; l < 2; ++l) {
    const auto r = generate_linking(p.disjunctions[0], l, part, b, p.lower, p.upper);
    CHECK(r.candidates == r.dropped_no_overlap + r.dropped_same_signs +
                              r.dropped_redundant + r.kept_sides());
    total += r.candidates;
  }
  CHECK(total == 16);
}
