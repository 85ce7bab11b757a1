#include "splitform/partition.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <numeric>

namespace splitform {

std::vector<int> Partition::class_of(int n) const {
  std::vector<int> out(static_cast<std::size_t>(n), -1);
  for (int s = 0; s < size(); ++s)
    for (int v : classes[static_cast<std::size_t>(s)])
      if (v >= 0 && v < n) out[static_cast<std::size_t>(v)] = s;
  return out;
}

Partition chunk_order(std::span<const int> order, int P,
                      std::span<const int> rest) {
  const int m = static_cast<int>(order.size());
  if (P < 1 || P > m)
    throw PartitionError(PartitionError::Kind::kInvalidArgument,
                         "need 1 <= P <= " + std::to_string(m) + ", got P=" +
                             std::to_string(P));
  Partition out;
  out.classes.resize(static_cast<std::size_t>(P));
  const int base = m / P;
  const int extra = m % P;
  int pos = 0;
  for (int s = 0; s < P; ++s) {
    const int len = base + (s < extra ? 1 : 0);
    auto& cls = out.classes[static_cast<std::size_t>(s)];
    cls.assign(order.begin() + pos, order.begin() + pos + len);
    pos += len;
  }
  auto& last = out.classes.back();
  last.insert(last.end(), rest.begin(), rest.end());
  for (auto& cls : out.classes) std::sort(cls.begin(), cls.end());
  return out;
}

Partition partition_uniform(int n, int P) {
  if (n < 1 || P < 1 || P > n)
    throw PartitionError(PartitionError::Kind::kInvalidArgument,
                         "partition_uniform: need 1 <= P <= n, got n=" +
                             std::to_string(n) + " P=" + std::to_string(P));
  std::vector<int> order(static_cast<std::size_t>(n));
  std::iota(order.begin(), order.end(), 0);
  return chunk_order(order, P);
}

Partition partition_by_coefficient(const Disjunction& d, int P,
                                   std::span<const double> lower,
                                   std::span<const double> upper) {
  const int n = static_cast<int>(lower.size());
  const std::vector<int> support = d.support();
  std::vector<double> key(static_cast<std::size_t>(n), 0.0);
  for (const auto& dj : d.disjuncts)
    for (const auto& c : dj.constraints)
      for (const auto& t : c.lhs.terms()) {
        const auto v = static_cast<std::size_t>(t.var);
        const double k =
            std::abs(t.lin) + std::abs(t.quad) * (upper[v] - lower[v]);
        key[v] = std::max(key[v], k);
      }
  std::vector<int> order = support;
  std::stable_sort(order.begin(), order.end(), [&](int a, int b) {
    return key[static_cast<std::size_t>(a)] > key[static_cast<std::size_t>(b)];
  });
  std::vector<int> rest;
  std::vector<bool> in_support(static_cast<std::size_t>(n), false);
  for (int v : support) in_support[static_cast<std::size_t>(v)] = true;
  for (int i = 0; i < n; ++i)
    if (!in_support[static_cast<std::size_t>(i)]) rest.push_back(i);
  return chunk_order(order, P, rest);
}

void validate_partition(const Partition& p, int n) {
  using Kind = PartitionError::Kind;
  std::vector<int> owner(static_cast<std::size_t>(n), -1);
  for (int s = 0; s < p.size(); ++s) {
    const auto& cls = p.classes[static_cast<std::size_t>(s)];
    if (cls.empty())
      throw PartitionError(Kind::kEmptyClass,
                           "empty class " + std::to_string(s));
    for (int v : cls) {
      if (v < 0 || v >= n)
        throw PartitionError(Kind::kOutOfRange,
                             "variable " + std::to_string(v) +
                                 " out of range in class " + std::to_string(s));
      auto& o = owner[static_cast<std::size_t>(v)];
      if (o != -1)
        throw PartitionError(Kind::kOverlap,
                             "overlap: variable " + std::to_string(v) +
                                 " in classes " + std::to_string(o) + " and " +
                                 std::to_string(s));
      o = s;
    }
  }
  for (int i = 0; i < n; ++i)
    if (owner[static_cast<std::size_t>(i)] == -1)
      throw PartitionError(Kind::kGap,
                           "gap: variable " + std::to_string(i) +
                               " is in no class");
}

namespace {

std::vector<int> complement(const std::vector<int>& support, int n) {
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int v : support) in[static_cast<std::size_t>(v)] = true;
  std::vector<int> rest;
  for (int i = 0; i < n; ++i)
    if (!in[static_cast<std::size_t>(i)]) rest.push_back(i);
  return rest;
}

const std::vector<std::vector<int>>* atoms_for(const DisjunctiveProblem& problem,
                                               int j) {
  if (static_cast<std::size_t>(j) >= problem.partition_atoms.size())
    return nullptr;
  const auto& atoms = problem.partition_atoms[static_cast<std::size_t>(j)];
  return atoms.empty() ? nullptr : &atoms;
}

}  // namespace

int max_splits(const DisjunctiveProblem& problem, int j) {
  return static_cast<int>(
      problem.disjunctions[static_cast<std::size_t>(j)].support().size());
}

Partition partition_for(const DisjunctiveProblem& problem, int j, int P,
                        PartitionStrategy strategy) {
  const auto& d = problem.disjunctions[static_cast<std::size_t>(j)];
  const std::vector<int> support = d.support();
  const std::vector<int> rest = complement(support, problem.n);
  if (support.empty()) {
    if (P != 1)
      throw PartitionError(PartitionError::Kind::kInvalidArgument,
                           "disjunction has an empty support; only P=1");
    return partition_uniform(problem.n, 1);
  }
  if (strategy == PartitionStrategy::kCoefficient)
    return partition_by_coefficient(d, P, problem.lower, problem.upper);

  const auto* atoms = atoms_for(problem, j);
  if (atoms != nullptr && P <= static_cast<int>(atoms->size())) {
    // Chunk whole atoms; support variables missing from every atom go last.
    const int a = static_cast<int>(atoms->size());
    Partition out;
    out.classes.resize(static_cast<std::size_t>(P));
    const int base = a / P;
    const int extra = a % P;
    int pos = 0;
    std::vector<bool> used(static_cast<std::size_t>(problem.n), false);
    for (int s = 0; s < P; ++s) {
      const int len = base + (s < extra ? 1 : 0);
      for (int t = 0; t < len; ++t, ++pos)
        for (int v : (*atoms)[static_cast<std::size_t>(pos)]) {
          out.classes[static_cast<std::size_t>(s)].push_back(v);
          used[static_cast<std::size_t>(v)] = true;
        }
    }
    for (int i = 0; i < problem.n; ++i)
      if (!used[static_cast<std::size_t>(i)]) out.classes.back().push_back(i);
    for (auto& cls : out.classes) std::sort(cls.begin(), cls.end());
    return out;
  }
  return chunk_order(support, P, rest);
}

std::vector<Partition> partitions_for(const DisjunctiveProblem& problem, int P,
                                      PartitionStrategy strategy) {
  std::vector<Partition> out;
  out.reserve(problem.disjunctions.size());
  for (int j = 0; j < static_cast<int>(problem.disjunctions.size()); ++j)
    out.push_back(partition_for(problem, j, P, strategy));
  return out;
}

Partition refine_halving(const Partition& p, std::span<const int> support) {
  int n = 0;
  for (const auto& cls : p.classes)
    for (int v : cls) n = std::max(n, v + 1);
  std::vector<bool> in(static_cast<std::size_t>(n), false);
  for (int v : support)
    if (v < n) in[static_cast<std::size_t>(v)] = true;

  Partition out;
  std::vector<int> tail;
  for (const auto& cls : p.classes) {
    std::vector<int> members;
    for (int v : cls) {
      if (in[static_cast<std::size_t>(v)])
        members.push_back(v);
      else
        tail.push_back(v);
    }
    if (members.empty()) continue;
    if (members.size() == 1) {
      out.classes.push_back(members);
      continue;
    }
    const std::size_t half = (members.size() + 1) / 2;
    out.classes.emplace_back(members.begin(), members.begin() + half);
    out.classes.emplace_back(members.begin() + half, members.end());
  }
  if (out.classes.empty()) out.classes.emplace_back();
  auto& last = out.classes.back();
  last.insert(last.end(), tail.begin(), tail.end());
  for (auto& cls : out.classes) std::sort(cls.begin(), cls.end());
  return out;
}

std::vector<Partition> refinement_chain(const DisjunctiveProblem& problem,
                                        int j) {
  const std::vector<int> support =
      problem.disjunctions[static_cast<std::size_t>(j)].support();
  std::vector<Partition> chain{partition_for(problem, j, 1)};
  const int target = std::max<int>(1, static_cast<int>(support.size()));
  while (chain.back().size() < target)
    chain.push_back(refine_halving(chain.back(), support));
  return chain;
}

Partition parse_partition(std::string_view text) {
  using Kind = PartitionError::Kind;
  Partition out;
  std::vector<int> current;
  std::size_t pos = 0;
  auto fail = [&](const std::string& why) {
    throw PartitionError(Kind::kInvalidArgument,
                         "bad partition \"" + std::string(text) + "\": " + why);
  };
  bool expect_number = true;
  while (pos <= text.size()) {
    while (pos < text.size() && text[pos] == ' ') ++pos;
    if (expect_number) {
      int value = 0;
      const char* begin = text.data() + pos;
      const char* end = text.data() + text.size();
      auto [ptr, ec] = std::from_chars(begin, end, value);
      if (ec != std::errc() || ptr == begin) fail("expected an index");
      if (value < 0) fail("negative index");
      current.push_back(value);
      pos += static_cast<std::size_t>(ptr - begin);
      expect_number = false;
      continue;
    }
    if (pos == text.size()) break;
    const char c = text[pos++];
    if (c == ',') {
      expect_number = true;
    } else if (c == '|') {
      std::sort(current.begin(), current.end());
      out.classes.push_back(std::move(current));
      current.clear();
      expect_number = true;
    } else {
      fail(std::string("unexpected character '") + c + "'");
    }
  }
  std::sort(current.begin(), current.end());
  out.classes.push_back(std::move(current));
  return out;
}

std::string format_partition(const Partition& p) {
  std::string out;
  for (std::size_t s = 0; s < p.classes.size(); ++s) {
    if (s > 0) out += '|';
    for (std::size_t i = 0; i < p.classes[s].size(); ++i) {
      if (i > 0) out += ',';
      out += std::to_string(p.classes[s][i]);
    }
  }
  return out;
}

}  // namespace splitform
