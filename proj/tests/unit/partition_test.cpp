#include "doctest.h"
#include "splitform/instances.hpp"
#include "splitform/partition.hpp"

using namespace splitform;

TEST_CASE("uniform partition puts the remainder first") {
  CHECK(partition_uniform(5, 2).classes ==
        std::vector<std::vector<int>>{{0, 1, 2}, {3, 4}});
  CHECK(partition_uniform(4, 4).size() == 4);
  CHECK_THROWS_AS(partition_uniform(3, 4), PartitionError);
  CHECK_THROWS_AS(partition_uniform(3, 0), PartitionError);
}

TEST_CASE("validate_partition names the fault") {
  auto kind_of = [](const Partition& p, int n) {
    try {
      validate_partition(p, n);
    } catch (const PartitionError& e) {
      return static_cast<int>(e.kind());
    }
    return -1;
  };
  using K = PartitionError::Kind;
  CHECK(kind_of({{{0, 1}, {1, 2}}}, 3) == static_cast<int>(K::kOverlap));
  CHECK(kind_of({{{0}, {2}}}, 3) == static_cast<int>(K::kGap));
  CHECK(kind_of({{{0, 1, 2}, {}}}, 3) == static_cast<int>(K::kEmptyClass));
  CHECK(kind_of({{{0, 1}, {3}}}, 3) == static_cast<int>(K::kOutOfRange));
  CHECK(kind_of({{{0, 1}, {2}}}, 3) == -1);
}

TEST_CASE("partition text round trip") {
  const auto p = parse_partition("0,1|2,3");
  CHECK(p.classes == std::vector<std::vector<int>>{{0, 1}, {2, 3}});
  CHECK(format_partition(p) == "0,1|2,3");
  CHECK(parse_partition(format_partition(partition_uniform(7, 3))) ==
        partition_uniform(7, 3));
  CHECK_THROWS_AS(parse_partition("0,,1"), PartitionError);
  CHECK_THROWS_AS(parse_partition("a|b"), PartitionError);
  CHECK_THROWS_AS(parse_partition(""), PartitionError);
}

TEST_CASE("coefficient ordering") {
  const auto p = make_ex2();
  const auto part = partition_by_coefficient(p.disjunctions[0], 2, p.lower, p.upper);
  validate_partition(part, p.n);
  CHECK(part.size() == 2);
}

TEST_CASE("refinement chain halves down to singletons") {
  const auto p = make_ex1();
  const auto chain = refinement_chain(p, 0);
  REQUIRE(chain.size() == 3);
  CHECK(chain[0].size() == 1);
  CHECK(chain[1].size() == 2);
  CHECK(chain[2].size() == 4);
  for (std::size_t i = 1; i < chain.size(); ++i) {
    // Every class of the finer partition sits inside a class of the coarser.
    const auto owner = chain[i - 1].class_of(p.n);
    for (const auto& cls : chain[i].classes)
      for (int v : cls) CHECK(owner[static_cast<std::size_t>(v)] ==
                              owner[static_cast<std::size_t>(cls.front())]);
  }
  CHECK(max_splits(p, 0) == 4);
}

TEST_CASE("default partitions cover every variable") {
  const auto p = make_clustering({{0, 0}, {2, 1}, {1, 3}}, 2);
  for (int P = 1; P <= 3; ++P)
    for (const auto& part : partitions_for(p, P)) validate_partition(part, p.n);
}
