#include "doctest.h"
#include "oracles.hpp"
#include "splitform/bounds.hpp"
#include "splitform/instances.hpp"
#include "splitform/reformulate.hpp"
#include "splitform/solver.hpp"

using namespace splitform;

namespace {

DisjunctiveProblem with_sum_objective(DisjunctiveProblem p) {
  p.objective.coeffs.assign(static_cast<std::size_t>(p.n), 1.0);
  return p;
}

}  // namespace

TEST_CASE("relaxation tangents converge on a ball") {
  // min x0 + x1 over x0^2 + x1^2 <= 1.
  auto p = with_sum_objective(make_ex1());
  p.disjunctions[0].disjuncts.pop_back();
  const auto parts = partitions_for(p, 2);
  const auto m = compile_psplit(p, parts, alpha_bounds_interval(p, parts));
  RelaxOptions o;
  o.violation_tol = 1e-9;
  o.max_cuts_per_term = 400;
  const auto r = solve_relaxation(m, o);
  REQUIRE(r.status == LpStatus::kOptimal);
  CHECK(r.converged);
  CHECK(r.objective == doctest::Approx(-2.0).epsilon(1e-7));
  CHECK(m.max_violation(r.x) <= 1e-8);
}

TEST_CASE("branch and bound matches enumeration") {
  for (auto p : {with_sum_objective(make_ex1()), with_sum_objective(make_ex2()),
                 make_pball(2, 2, 2, 1)}) {
    const auto want = oracle::enumerate_assignments(p);
    REQUIRE(want.feasible);
    for (int P : {1, 2}) {
      const auto parts = partitions_for(p, P);
      const auto bounds = alpha_bounds_interval(p, parts);
      for (const auto& m : {compile_bigm(p, alpha_bounds_interval(p, partitions_for(p, 1))),
                            compile_psplit(p, parts, bounds)}) {
        BnbOptions o;
        o.relax.violation_tol = 1e-8;
        const auto r = solve_bnb(m, o);
        REQUIRE(r.status == MipStatus::kOptimal);
        CHECK(r.objective == doctest::Approx(want.objective).epsilon(1e-5));
        CHECK(m.max_violation(r.x) <= 1e-6);
      }
    }
  }
}

TEST_CASE("branch and bound status codes") {
  auto p = with_sum_objective(make_ex2());
  p.globals.push_back({{{0, 1.0}}, Sense::kGreaterEqual, 6.0});  // x0 above its box
  const auto parts = partitions_for(p, 1);
  const auto m = compile_bigm(p, alpha_bounds_interval(p, parts));
  CHECK(solve_bnb(m).status == MipStatus::kInfeasible);

  const auto q = make_pball(3, 3, 2, 2);
  const auto qp = partitions_for(q, 1);
  BnbOptions o;
  o.node_limit = 1;
  const auto r = solve_bnb(compile_bigm(q, alpha_bounds_interval(q, qp)), o);
  CHECK((r.status == MipStatus::kNodeLimit || r.status == MipStatus::kOptimal));
  CHECK(r.nodes <= 1);
}

TEST_CASE("clustering the unit square corners") {
  // Two centers at the midpoints of opposite edges leave every point at
  // squared distance 1/4.
  const auto p = make_clustering({{0, 0}, {1, 0}, {0, 1}, {1, 1}}, 2);
  const auto want = oracle::enumerate_assignments(p);
  REQUIRE(want.feasible);
  CHECK(want.objective == doctest::Approx(1.0).epsilon(1e-7));
  const auto parts = partitions_for(p, 2);
  BnbOptions o;
  o.relax.violation_tol = 1e-8;
  const auto r = solve_bnb(compile_psplit(p, parts, alpha_bounds_interval(p, parts)), o);
  REQUIRE(r.status == MipStatus::kOptimal);
  CHECK(r.objective == doctest::Approx(1.0).epsilon(1e-5));
}
