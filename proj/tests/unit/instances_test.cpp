#include <random>

#include "doctest.h"
#include "splitform/instances.hpp"

using namespace splitform;

TEST_CASE("clustering layout") {
  const std::vector<Point> pts{{0, 0}, {1, 0}, {0, 1}, {1, 1}};
  const auto p = make_clustering(pts, 2);
  CHECK(p.n == 2 * 2 + 4);  // centers, then one r per point
  CHECK(p.disjunctions.size() == 4);
  CHECK(p.disjunctions[0].disjuncts.size() == 2);
  CHECK(p.var_name(0) == "c0_0");
  CHECK(p.var_name(4) == "r0");
  CHECK(p.upper[4] == doctest::Approx(2.0));
  CHECK(validate(p).ok());
  CHECK_THROWS_AS(make_clustering(pts, 0), ModelError);
}

TEST_CASE("p-ball generator is seeded") {
  CHECK(make_pball(3, 2, 2, 4) == make_pball(3, 2, 2, 4));
  CHECK_FALSE(make_pball(3, 2, 2, 4) == make_pball(3, 2, 2, 5));
  const auto p = make_pball(3, 2, 2, 4);
  CHECK(p.disjunctions.size() == 2);
  CHECK(p.indicator_rows.size() == 3);
  for (const auto& c : pball_centers(3, 2, 4))
    for (double v : c) CHECK((v >= 0.0 && v <= 10.0));
}

TEST_CASE("network JSON round trip and checks") {
  const auto nn = random_network({2, 4, 4, 2}, 9);
  CHECK(network_from_json(network_to_json(nn)) == nn);
  CHECK(nn.inputs() == 2);
  auto broken = nn;
  broken.layers[1].w.pop_back();
  CHECK_THROWS_AS(check_network(broken), ModelError);
}

TEST_CASE("forward passes are feasible points of the OSIF model") {
  const auto nn = random_network({3, 4, 4, 2}, 17);
  const auto p = make_osif(nn, 1, 1.5);
  std::mt19937_64 rng(2);
  std::uniform_real_distribution<double> u(0.0, 0.5);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<double> x{u(rng), u(rng), u(rng)};
    const auto acts = forward(nn, x);
    std::vector<double> point = x;
    for (std::size_t L = 0; L + 1 < acts.size(); ++L)
      point.insert(point.end(), acts[L].begin(), acts[L].end());
    REQUIRE(static_cast<int>(point.size()) == p.n);
    CHECK(problem_feasible(p, point, 1e-9));
    CHECK(objective_value(p, point) == doctest::Approx(acts.back()[1]).epsilon(1e-12));
  }
}

TEST_CASE("random affine disjunctions have nonempty disjuncts") {
  for (std::uint64_t seed = 1; seed <= 10; ++seed) {
    const auto p = make_random_affine(3 + static_cast<int>(seed % 4), 3, seed);
    CHECK(validate(p).ok());
  }
}
