#pragma once

#include <compare>
#include <iosfwd>
#include <map>
#include <optional>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "splitform/model.hpp"
#include "splitform/partition.hpp"
#include "splitform/solver.hpp"

namespace splitform {

struct Interval {
  double lower = 0.0;
  double upper = 0.0;
  friend bool operator==(const Interval&, const Interval&) = default;
};

// Exact range of q(x-c)^2 + a*x on [l, u].
Interval term_range(const UnivariateTerm& t, double l, double u);
// Exact range of Q x^2 + B x on [l, u] for any sign of Q.
Interval quadratic_range(double Q, double B, double l, double u);

// Split sum of constraint k of disjunct l over class s: the terms of g_{l,k}
// whose variable lies in the class, without the constant.
SeparableFunction split_sum(const Disjunction& d, int l, int k,
                            const std::vector<int>& cls);

enum class BoundProvenance { kInterval, kObbtUnion, kLocal, kUser };
std::string_view provenance_name(BoundProvenance p);
BoundProvenance parse_provenance(std::string_view text);

struct AlphaKey {
  int disjunct = 0;
  int constraint = 0;
  int split = 0;
  auto operator<=>(const AlphaKey&) const = default;
};

struct AlphaEntry {
  double lower = 0.0;
  double upper = 0.0;
  BoundProvenance provenance = BoundProvenance::kInterval;
  friend bool operator==(const AlphaEntry&, const AlphaEntry&) = default;
};

// Bounds for the split sums of one disjunction. `global` entries hold over
// every disjunct; `local` entries, keyed by (key, region d), hold whenever
// disjunct d is the active one and are used for the disaggregated copy nu_d.
struct AlphaBounds {
  int num_splits = 0;
  std::map<AlphaKey, AlphaEntry> global;
  std::map<std::pair<AlphaKey, int>, AlphaEntry> local;

  void set(AlphaKey key, double lower, double upper, BoundProvenance p);
  void set_local(AlphaKey key, int region, double lower, double upper,
                 BoundProvenance p);
  // Throws ModelError when the key is missing.
  const AlphaEntry& at(AlphaKey key) const;
  bool contains(AlphaKey key) const { return global.count(key) != 0; }
  // The local entry for `region` when present, the global one otherwise.
  AlphaEntry for_region(AlphaKey key, int region) const;

  friend bool operator==(const AlphaBounds&, const AlphaBounds&) = default;
};

AlphaBounds alpha_bounds_interval(const Disjunction& d, const Partition& p,
                                  std::span<const double> lower,
                                  std::span<const double> upper);
std::vector<AlphaBounds> alpha_bounds_interval(
    const DisjunctiveProblem& problem, const std::vector<Partition>& parts);

struct RegionOptions {
  // Absolute+relative gap for the spatial search used to maximize a convex
  // quadratic.
  double tol = 1e-9;
  int max_nodes = 4000;
  RelaxOptions relax{1e-9, 400, {1e-10, 1e-10, 1e-9, 200000, 50, 200}};
};

// Optimizes split sums over {x in box, globals, and optionally the
// constraints of one disjunct}. Minimizing is convex. Maximizing an affine sum
// is an LP; maximizing a convex quadratic runs a spatial branch and bound on
// secant overestimators and always returns a valid upper bound.
class RegionOptimizer {
 public:
  // disjunction/disjunct < 0 means the plain domain (box + globals).
  RegionOptimizer(const DisjunctiveProblem& problem, int disjunction,
                  int disjunct, RegionOptions options = {});

  bool feasible() const { return feasible_; }
  double minimize(const SeparableFunction& s) const;
  double maximize(const SeparableFunction& s) const;
  // True when the last maximize() closed its gap; false means the returned
  // value is an upper bound that may be loose.
  bool last_max_exact() const { return last_exact_; }

 private:
  double maximize_quadratic(const SeparableFunction& s) const;
  double own_constraint_cap(const SeparableFunction& s) const;

  const DisjunctiveProblem* problem_;
  int disjunction_;
  int disjunct_;
  RegionOptions options_;
  MixedModel base_;
  bool feasible_ = true;
  mutable bool last_exact_ = true;
};

enum class ObbtMode { kUnion, kLocal };

// Range of every split sum over each disjunct's region. Union mode keeps the
// elementwise hull as global entries; local mode also records the
// per-region entries. Throws ModelError naming an empty disjunct.
AlphaBounds alpha_bounds_obbt(const DisjunctiveProblem& problem, int j,
                              const Partition& p, ObbtMode mode,
                              const RegionOptions& options = {});
std::vector<AlphaBounds> alpha_bounds_obbt(
    const DisjunctiveProblem& problem, const std::vector<Partition>& parts,
    ObbtMode mode, const RegionOptions& options = {});

struct IndependenceResult {
  int disjunct = 0;
  int constraint = 0;
  int split_a = 0;
  int split_b = 0;
  bool independent = true;
  Interval joint;     // range of the combined sum
  Interval separate;  // sums of the separate ranges
};

// Compares joint and separate optima of each split pair over the domain
// (box + globals), within `tol`.
std::vector<IndependenceResult> independence_check(
    const DisjunctiveProblem& problem, int j, const Partition& p,
    double tol = 1e-8);

struct SharedMember {
  AlphaKey key;
  double scale = 1.0;  // split sum = scale * representative
};
struct SharedGroup {
  AlphaKey representative;
  std::vector<SharedMember> members;  // includes the representative, scale 1
};
struct SharingPlan {
  std::vector<SharedGroup> groups;
  std::map<AlphaKey, std::pair<int, double>> lookup;  // key -> (group, scale)
};

// Groups split sums equal up to a positive factor (relative tolerance 1e-12).
// With allow_negative, affine sums may also be grouped with negative factors.
// Empty split sums are never grouped.
SharingPlan detect_shared_alphas(const Disjunction& d, const Partition& p,
                                 bool allow_negative = false);

// CSV with header
// disjunction,disjunct,constraint,split,region,lower,upper,provenance
// where region is "all" for global entries.
void write_bounds_csv(std::ostream& out, const std::vector<AlphaBounds>& bounds);
std::vector<AlphaBounds> read_bounds_csv(std::istream& in);
void save_bounds_csv(const std::string& path,
                     const std::vector<AlphaBounds>& bounds);
std::vector<AlphaBounds> load_bounds_csv(const std::string& path);

}  // namespace splitform
