#pragma once

#include <span>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "splitform/model.hpp"

namespace splitform {

class PartitionError : public std::invalid_argument {
 public:
  enum class Kind { kInvalidArgument, kOverlap, kGap, kEmptyClass, kOutOfRange };
  PartitionError(Kind kind, const std::string& what)
      : std::invalid_argument(what), kind_(kind) {}
  Kind kind() const { return kind_; }

 private:
  Kind kind_;
};

// Classes I_1..I_P of variable indices. Each class is kept sorted.
struct Partition {
  std::vector<std::vector<int>> classes;

  int size() const { return static_cast<int>(classes.size()); }
  // class_of()[i] = index of the class holding variable i, or -1.
  std::vector<int> class_of(int n) const;
  friend bool operator==(const Partition&, const Partition&) = default;
};

// Contiguous blocks in index order; the first n % P blocks get the extra
// element.
Partition partition_uniform(int n, int P);

// Sort the disjunction's support by max |a| + |q| * (u - l) over all its
// constraints (descending, ties by index) and cut the order into P chunks.
// Variables outside the support are appended to the last class so the result
// covers 0..n-1 with n = lower.size().
Partition partition_by_coefficient(const Disjunction& d, int P,
                                   std::span<const double> lower,
                                   std::span<const double> upper);

// Throws PartitionError naming the first overlap, gap or empty class.
void validate_partition(const Partition& p, int n);

// Contiguous chunking of `order` into P classes, then `rest` appended to the
// last class.
Partition chunk_order(std::span<const int> order, int P,
                      std::span<const int> rest = {});

enum class PartitionStrategy { kUniform, kCoefficient };

// Default partition for disjunction `j` of `problem`: chunks the disjunction
// support (or the problem's partition atoms when P does not exceed their
// count), everything else goes to the last class.
Partition partition_for(const DisjunctiveProblem& problem, int j, int P,
                        PartitionStrategy strategy = PartitionStrategy::kUniform);
std::vector<Partition> partitions_for(
    const DisjunctiveProblem& problem, int P,
    PartitionStrategy strategy = PartitionStrategy::kUniform);

// Number of support variables of disjunction j (the largest meaningful P).
int max_splits(const DisjunctiveProblem& problem, int j);

// Splits every class with more than one element into two halves (the first
// half takes the extra element). Restricted to `support`, classes are halved
// on their support members only; the non-support tail stays in the last class.
Partition refine_halving(const Partition& p, std::span<const int> support);

// 1-split, then repeated halving until every support variable is alone.
std::vector<Partition> refinement_chain(const DisjunctiveProblem& problem,
                                        int j);

// "0,1|2,3" -> {{0,1},{2,3}}. Throws PartitionError on malformed text.
Partition parse_partition(std::string_view text);
std::string format_partition(const Partition& p);

}  // namespace splitform
