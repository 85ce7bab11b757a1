#include <limits>
#include <string>

#include "doctest.h"
#include "splitform/fourier_motzkin.hpp"

using namespace splitform;

TEST_CASE("projecting a triangle onto one axis") {
  // 0 <= y <= x, x + y <= 2, x >= 0; projecting out y leaves 0 <= x <= 2.
  Polyhedron p;
  p.vars = {"x", "y"};
  p.rows = {{{0, -1}, 0}, {{-1, 1}, 0}, {{1, 1}, 2}, {{-1, 0}, 0}};
  const auto q = remove_redundant(fm_project(p, {1}));
  const auto r = reorder(q, {"x"});
  Polyhedron w1;
  w1.vars = {"x"};
  w1.rows = {{{-1}, 0}, {{1}, 2}};
  CHECK(containment_violation(r, w1) <= 1e-9);
  CHECK(containment_violation(w1, r) <= 1e-9);
  CHECK(r.contains({1.5}));
  CHECK_FALSE(r.contains({2.5}));
}

TEST_CASE("containment extremes") {
  Polyhedron empty;
  empty.vars = {"x"};
  empty.rows = {{{1}, -1}, {{-1}, 0}};
  Polyhedron half;
  half.vars = {"x"};
  half.rows = {{{-1}, 0}};
  Polyhedron cap;
  cap.vars = {"x"};
  cap.rows = {{{1}, 1}};
  CHECK(containment_violation(empty, cap) == -std::numeric_limits<double>::infinity());
  CHECK(containment_violation(half, cap) == std::numeric_limits<double>::infinity());
}

TEST_CASE("limits are enforced") {
  Polyhedron p;
  for (int i = 0; i < 20; ++i) p.vars.push_back("v" + std::to_string(i));
  p.rows.push_back({std::vector<double>(20, 1.0), 1.0});
  CHECK_THROWS_AS(fm_project(p, {0}), FmLimitError);
}
