#include <vector>

#include "doctest.h"
#include "splitform/instances.hpp"
#include "splitform/model.hpp"
#include "splitform/problem_io.hpp"

using namespace splitform;

TEST_CASE("separable terms on one variable merge") {
  SeparableFunction f;
  f.add_linear(1, 3.0).add_quadratic(1, 2.0, 0.5).add_quadratic(0, 1.0, -1.0);
  f.add_quadratic(1, 1.0, 2.0).add_constant(4.0);
  REQUIRE(f.terms().size() == 2);
  CHECK(f.terms()[0].var == 0);
  CHECK(f.terms()[1].var == 1);
  for (double x1 : {-2.0, 0.0, 0.7, 3.0}) {
    const std::vector<double> x{0.25, x1};
    const double want = 1.0 * (0.25 + 1.0) * (0.25 + 1.0) + 3.0 * x1 +
                        2.0 * (x1 - 0.5) * (x1 - 0.5) +
                        (x1 - 2.0) * (x1 - 2.0) + 4.0;
    CHECK(f.evaluate(x) == doctest::Approx(want).epsilon(1e-13));
  }
  CHECK_FALSE(f.is_affine());
  CHECK(f.restrict_to([](int v) { return v == 0; }).terms().size() == 1);
  CHECK(f.support() == std::vector<int>{0, 1});
}

TEST_CASE("scaled and remapped") {
  SeparableFunction f(1.0);
  f.add_quadratic(0, 1.0, 2.0).add_linear(2, -1.0);
  const auto g = f.scaled(2.0);
  const std::vector<double> x{1.0, 0.0, 3.0};
  CHECK(g.evaluate(x) == doctest::Approx(2.0 * f.evaluate(x)));
  const std::vector<int> map{2, 1, 0};
  const auto h = f.remapped(map);
  const std::vector<double> xr{3.0, 0.0, 1.0};
  CHECK(h.evaluate(xr) == doctest::Approx(f.evaluate(x)));
}

TEST_CASE("built-in examples validate") {
  CHECK(validate(make_ex1()).ok());
  CHECK(validate(make_ex2()).ok());
  CHECK(validate(make_random_affine(5, 3, 11)).ok());
}

TEST_CASE("validation catches malformed problems") {
  auto p = make_ex2();
  p.lower[0] = 6.0;  // above upper
  CHECK_FALSE(validate(p).ok());

  p = make_ex2();
  p.disjunctions[0].disjuncts[0].constraints[0].lhs.add_linear(17, 1.0);
  CHECK_FALSE(validate(p).ok());
  CHECK_THROWS_AS(require_valid(p), ModelError);

  // A disjunct with no point in the box.
  p = make_ex1();
  p.disjunctions[0].disjuncts[1].constraints[0].rhs = -100.0;
  CHECK_FALSE(validate(p).ok());
}

TEST_CASE("feasibility helpers") {
  const auto p = make_ex1();
  CHECK(problem_feasible(p, std::vector<double>{0.5, 0.5, 0.0, 0.0}));
  CHECK(problem_feasible(p, std::vector<double>{3, 3, 3, 3}));
  CHECK_FALSE(problem_feasible(p, std::vector<double>{1, 1, 1, 1}));
  CHECK_FALSE(problem_feasible(p, std::vector<double>{5, 3, 3, 3}));
}

TEST_CASE("problem JSON round trip") {
  for (const auto& p :
       {make_ex1(), make_ex2(), make_pball(2, 2, 2, 3),
        make_clustering({{0, 0}, {1, 0}, {0, 1}}, 2),
        make_osif(random_network({2, 3, 2}, 4), 1, 1.0)}) {
    CHECK(problem_from_json(problem_to_json(p)) == p);
  }
  CHECK_THROWS_AS(problem_from_json("{\"vars\": 3}"), ModelError);
  CHECK_THROWS(problem_from_json("not json"));
}
