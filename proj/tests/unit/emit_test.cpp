#include <sstream>

#include "doctest.h"
#include "splitform/bounds.hpp"
#include "splitform/emit.hpp"
#include "splitform/instances.hpp"
#include "splitform/reformulate.hpp"

using namespace splitform;

namespace {

MixedModel psplit(const DisjunctiveProblem& p, int P) {
  const auto parts = partitions_for(p, P);
  return compile_psplit(p, parts, alpha_bounds_interval(p, parts));
}

}  // namespace

TEST_CASE("LP file round trip") {
  for (const auto& m : {psplit(make_ex1(), 2), psplit(make_ex2(), 2)}) {
    std::stringstream ss;
    write_lp(m, ss);
    const auto back = read_lp(ss);
    std::string why;
    CHECK_MESSAGE(models_equivalent(m, back, 1e-12, &why), why);
  }
}

TEST_CASE("MPS round trip and convex rows") {
  const auto p = make_ex2();
  const auto m = compile_bigm(p, alpha_bounds_interval(p, partitions_for(p, 1)));
  std::stringstream ss;
  write_mps(m, ss);
  std::string why;
  CHECK_MESSAGE(models_equivalent(m, read_mps(ss), 1e-12, &why), why);
  std::stringstream sink;
  CHECK_THROWS_AS(write_mps(psplit(make_ex1(), 1), sink), UnsupportedError);
}

TEST_CASE("LP writer output is deterministic") {
  const auto m = psplit(make_ex1(), 4);
  std::stringstream a, b;
  write_lp(m, a);
  write_lp(m, b);
  CHECK(a.str() == b.str());
}

TEST_CASE("relaxation grids contain the disjunction grid") {
  const auto p = make_ex2();
  const auto range = box_range(p, 0, 1);
  const auto exact = project_disjunction(p, 0, 1, 11, range);
  const auto m1 = psplit(p, 1);
  const auto m2 = psplit(p, 2);
  const auto g1 = project_2d(m1, 0, 1, 11, range);
  const auto g2 = project_2d(m2, 0, 1, 11, range);
  CHECK(exact.subset_of(g2));
  CHECK(g2.subset_of(g1));
  CHECK(exact.count() > 0);
  ProjectOptions one;
  one.threads = 1;
  CHECK(project_2d(m2, 0, 1, 11, range, one).flags == g2.flags);
}

TEST_CASE("grid CSV has one line per cell") {
  const auto p = make_ex2();
  const auto g = project_disjunction(p, 0, 1, 5, box_range(p, 0, 1));
  std::stringstream ss;
  write_grid_csv(g, ss);
  int lines = 0;
  for (std::string line; std::getline(ss, line);) ++lines;
  CHECK(lines == 1 + 25);
}
