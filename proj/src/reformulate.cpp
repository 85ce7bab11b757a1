#include "splitform/reformulate.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>
#include <optional>
#include <stdexcept>

namespace splitform {
namespace {

std::string idx(std::initializer_list<std::size_t> parts) {
  std::string out;
  for (std::size_t p : parts) out += "_" + std::to_string(p);
  return out;
}

void require_bounds_shape(const DisjunctiveProblem& problem,
                          const std::vector<AlphaBounds>& bounds) {
  if (bounds.size() != problem.disjunctions.size())
    throw ModelError("expected bounds for " + std::to_string(problem.disjunctions.size()) +
                     " disjunctions, got " + std::to_string(bounds.size()));
}

// Upper end of the range of c1*t1(x) + c2*t2(x) over [l, u]; either term may
// be null. Evaluated at the endpoints and the stationary point.
Interval combined_range(const UnivariateTerm* t1, double c1, const UnivariateTerm* t2,
                        double c2, double l, double u) {
  auto f = [&](double x) {
    double v = 0.0;
    if (t1) v += c1 * t1->value(x);
    if (t2) v += c2 * t2->value(x);
    return v;
  };
  double Q = 0.0;
  double B = 0.0;
  if (t1) {
    Q += c1 * t1->quad;
    B += c1 * (t1->lin - 2.0 * t1->quad * t1->center);
  }
  if (t2) {
    Q += c2 * t2->quad;
    B += c2 * (t2->lin - 2.0 * t2->quad * t2->center);
  }
  Interval r{std::min(f(l), f(u)), std::max(f(l), f(u))};
  if (Q != 0.0) {
    const double x = -B / (2.0 * Q);
    if (x > l && x < u) {
      r.lower = std::min(r.lower, f(x));
      r.upper = std::max(r.upper, f(x));
    }
  }
  return r;
}

int sign_of(double v) { return (v > 0.0) - (v < 0.0); }

struct Slot {
  bool empty = true;
  int group = -1;
  double scale = 1.0;
};

struct Group {
  AlphaKey rep;
  SeparableFunction sum;
  int alpha = -1;
  std::vector<int> nu;  // per disjunct
  double lower = -std::numeric_limits<double>::infinity();
  double upper = std::numeric_limits<double>::infinity();
  std::vector<Interval> region;  // per disjunct, in representative units
};

Interval unscale(double lo, double hi, double scale) {
  return scale > 0 ? Interval{lo / scale, hi / scale} : Interval{hi / scale, lo / scale};
}

}  // namespace

MixedModel compile_bigm(const DisjunctiveProblem& problem,
                        const std::vector<AlphaBounds>& bounds) {
  require_bounds_shape(problem, bounds);
  MixedModel m = model_skeleton(problem, "bigm");
  add_indicators(m, problem);
  for (std::size_t j = 0; j < problem.disjunctions.size(); ++j) {
    const auto& d = problem.disjunctions[j];
    const AlphaBounds& b = bounds[j];
    if (b.num_splits != 1)
      throw ModelError("big-M needs 1-split bounds, disjunction " + std::to_string(j) +
                       " has " + std::to_string(b.num_splits));
    const int nd = static_cast<int>(d.disjuncts.size());
    for (int l = 0; l < nd; ++l) {
      const auto& dj = d.disjuncts[static_cast<std::size_t>(l)];
      for (int k = 0; k < static_cast<int>(dj.constraints.size()); ++k) {
        const auto& c = dj.constraints[static_cast<std::size_t>(k)];
        const AlphaKey key{l, k, 0};
        double top = -std::numeric_limits<double>::infinity();
        for (int r = 0; r < nd; ++r)
          if (r != l) top = std::max(top, b.for_region(key, r).upper);
        const double rhs = c.rhs - c.lhs.constant();
        const double M = nd > 1 ? top - rhs : 0.0;
        SeparableFunction f = c.lhs;
        f.add_linear(m.lambda[j][static_cast<std::size_t>(l)], M);
        add_separable_row(m, "bigm" + idx({j, static_cast<std::size_t>(l), static_cast<std::size_t>(k)}),
                          f, c.rhs + M, Role::kBigM);
      }
    }
  }
  return m;
}

MixedModel compile_psplit(const DisjunctiveProblem& problem,
                          const std::vector<Partition>& parts,
                          const std::vector<AlphaBounds>& bounds,
                          const PsplitOptions& options) {
  require_bounds_shape(problem, bounds);
  if (parts.size() != problem.disjunctions.size())
    throw ModelError("expected one partition per disjunction");
  MixedModel m = model_skeleton(problem, "psplit");
  add_indicators(m, problem);

  for (std::size_t j = 0; j < problem.disjunctions.size(); ++j) {
    const auto& d = problem.disjunctions[j];
    const Partition& p = parts[j];
    validate_partition(p, problem.n);
    const AlphaBounds& b = bounds[j];
    if (b.num_splits != p.size())
      throw ModelError("bounds of disjunction " + std::to_string(j) + " have " +
                       std::to_string(b.num_splits) + " splits, partition has " +
                       std::to_string(p.size()));
    const int nd = static_cast<int>(d.disjuncts.size());
    const auto& lam = m.lambda[j];

    std::map<AlphaKey, Slot> slots;
    std::vector<Group> groups;
    std::optional<SharingPlan> plan;
    if (options.share_alpha) plan = detect_shared_alphas(d, p, options.allow_negative);
    std::map<int, int> plan_group;  // plan group -> groups index

    for (int l = 0; l < nd; ++l) {
      const auto& dj = d.disjuncts[static_cast<std::size_t>(l)];
      for (int k = 0; k < static_cast<int>(dj.constraints.size()); ++k)
        for (int s = 0; s < p.size(); ++s) {
          const AlphaKey key{l, k, s};
          Slot& slot = slots[key];
          SeparableFunction sum = split_sum(d, l, k, p.classes[static_cast<std::size_t>(s)]);
          if (sum.empty()) continue;
          slot.empty = false;
          int g = -1;
          if (plan) {
            const auto [pg, scale] = plan->lookup.at(key);
            slot.scale = scale;
            auto it = plan_group.find(pg);
            if (it != plan_group.end()) g = it->second;
            else plan_group[pg] = g = static_cast<int>(groups.size());
          } else {
            g = static_cast<int>(groups.size());
          }
          if (g == static_cast<int>(groups.size())) {
            Group grp;
            grp.rep = key;
            grp.sum = std::move(sum);
            grp.region.assign(static_cast<std::size_t>(nd),
                              {-std::numeric_limits<double>::infinity(),
                               std::numeric_limits<double>::infinity()});
            groups.push_back(std::move(grp));
          }
          slot.group = g;
          Group& grp = groups[static_cast<std::size_t>(g)];
          const AlphaEntry& e = b.at(key);
          const Interval u = unscale(e.lower, e.upper, slot.scale);
          grp.lower = std::max(grp.lower, u.lower);
          grp.upper = std::min(grp.upper, u.upper);
          for (int r = 0; r < nd; ++r) {
            const AlphaEntry er = b.for_region(key, r);
            const Interval ur = unscale(er.lower, er.upper, slot.scale);
            auto& reg = grp.region[static_cast<std::size_t>(r)];
            reg.lower = std::max(reg.lower, ur.lower);
            reg.upper = std::min(reg.upper, ur.upper);
          }
        }
    }

    for (auto& grp : groups) {
      if (grp.lower > grp.upper)
        throw ModelError("inconsistent shared alpha bounds in disjunction " + std::to_string(j));
      const std::string tag = idx({j, static_cast<std::size_t>(grp.rep.disjunct),
                                   static_cast<std::size_t>(grp.rep.constraint),
                                   static_cast<std::size_t>(grp.rep.split)});
      grp.alpha = m.add_var({"a" + tag, grp.lower, grp.upper, VarKind::kContinuous, Role::kAlpha});
      ModelRow dis{"dis" + tag, {{grp.alpha, 1.0}}, Sense::kEqual, 0.0, Role::kDisaggregation};
      for (int r = 0; r < nd; ++r) {
        const Interval reg = grp.region[static_cast<std::size_t>(r)];
        const int nu = m.add_var({"nu" + tag + "_" + std::to_string(r), std::min(reg.lower, 0.0),
                                  std::max(reg.upper, 0.0), VarKind::kContinuous, Role::kNu});
        grp.nu.push_back(nu);
        dis.terms.push_back({nu, -1.0});
        const int lc = lam[static_cast<std::size_t>(r)];
        m.add_row({"nub" + tag + "_" + std::to_string(r), {{nu, 1.0}, {lc, -reg.upper}},
                   Sense::kLessEqual, 0.0, Role::kBoundUpper});
        m.add_row({"nlb" + tag + "_" + std::to_string(r), {{nu, 1.0}, {lc, -reg.lower}},
                   Sense::kGreaterEqual, 0.0, Role::kBoundLower});
      }
      m.add_row(std::move(dis));
      SeparableFunction epi = grp.sum;
      epi.add_linear(grp.alpha, -1.0);
      add_separable_row(m, "epi" + tag, epi, 0.0, Role::kEpigraph, grp.sum.is_affine());
    }

    for (int l = 0; l < nd; ++l) {
      const auto& dj = d.disjuncts[static_cast<std::size_t>(l)];
      for (int k = 0; k < static_cast<int>(dj.constraints.size()); ++k) {
        const auto& c = dj.constraints[static_cast<std::size_t>(k)];
        ModelRow budget{"bud" + idx({j, static_cast<std::size_t>(l), static_cast<std::size_t>(k)}),
                        {}, Sense::kLessEqual, 0.0, Role::kBudget};
        for (int s = 0; s < p.size(); ++s) {
          const Slot& slot = slots[{l, k, s}];
          if (slot.empty) continue;
          budget.terms.push_back(
              {groups[static_cast<std::size_t>(slot.group)].nu[static_cast<std::size_t>(l)],
               slot.scale});
        }
        budget.terms.push_back({lam[static_cast<std::size_t>(l)], -(c.rhs - c.lhs.constant())});
        m.add_row(std::move(budget));
      }
    }

    if (!options.linking) continue;
    for (int l = 0; l < nd; ++l) {
      const LinkingReport rep = generate_linking(d, l, p, b, problem.lower, problem.upper);
      for (const auto& lc : rep.kept) {
        const Slot& sk = slots[{l, lc.k, lc.split}];
        const Slot& sj = slots[{l, lc.j, lc.split}];
        const auto& gk = groups[static_cast<std::size_t>(sk.group)];
        const auto& gj = groups[static_cast<std::size_t>(sj.group)];
        for (int r = 0; r < nd; ++r) {
          const std::string tag =
              idx({j, static_cast<std::size_t>(l), static_cast<std::size_t>(lc.k),
                   static_cast<std::size_t>(lc.j), static_cast<std::size_t>(lc.split),
                   static_cast<std::size_t>(lc.rho2 > 0 ? 0 : 1), static_cast<std::size_t>(r)});
          std::vector<LinearTerm> terms{{gk.nu[static_cast<std::size_t>(r)], lc.rho1 * sk.scale},
                                        {gj.nu[static_cast<std::size_t>(r)], lc.rho2 * sj.scale}};
          const int lcol = lam[static_cast<std::size_t>(r)];
          if (lc.use_upper) {
            auto t = terms;
            t.push_back({lcol, -lc.upper});
            m.add_row({"lku" + tag, std::move(t), Sense::kLessEqual, 0.0, Role::kLinking});
          }
          if (lc.use_lower) {
            auto t = terms;
            t.push_back({lcol, -lc.lower});
            m.add_row({"lkl" + tag, std::move(t), Sense::kGreaterEqual, 0.0, Role::kLinking});
          }
        }
      }
    }
  }
  return m;
}

MixedModel compile_hull_linear(const DisjunctiveProblem& problem) {
  for (const auto& d : problem.disjunctions)
    for (const auto& dj : d.disjuncts)
      for (const auto& c : dj.constraints)
        if (!c.lhs.is_affine())
          throw UnsupportedError("unsupported formulation: hull needs affine disjuncts");
  MixedModel m = model_skeleton(problem, "hull");
  add_indicators(m, problem);
  for (std::size_t j = 0; j < problem.disjunctions.size(); ++j) {
    const auto& d = problem.disjunctions[j];
    const std::vector<int> support = d.support();
    const auto& lam = m.lambda[j];
    std::vector<std::vector<int>> copies(d.disjuncts.size());
    for (std::size_t l = 0; l < d.disjuncts.size(); ++l)
      for (int i : support) {
        const auto vi = static_cast<std::size_t>(i);
        const double lo = problem.lower[vi];
        const double hi = problem.upper[vi];
        const std::string tag = idx({j, l, vi});
        const int col = m.add_var({"xh" + tag, std::min(lo, 0.0), std::max(hi, 0.0),
                                   VarKind::kContinuous, Role::kHullCopy});
        copies[l].push_back(col);
        m.add_row({"hub" + tag, {{col, 1.0}, {lam[l], -hi}}, Sense::kLessEqual, 0.0, Role::kBoundUpper});
        m.add_row({"hlb" + tag, {{col, 1.0}, {lam[l], -lo}}, Sense::kGreaterEqual, 0.0, Role::kBoundLower});
      }
    for (std::size_t a = 0; a < support.size(); ++a) {
      ModelRow sum{"hsum" + idx({j, static_cast<std::size_t>(support[a])}),
                   {{support[a], 1.0}}, Sense::kEqual, 0.0, Role::kDisaggregation};
      for (std::size_t l = 0; l < d.disjuncts.size(); ++l) sum.terms.push_back({copies[l][a], -1.0});
      m.add_row(std::move(sum));
    }
    for (std::size_t l = 0; l < d.disjuncts.size(); ++l) {
      const auto& dj = d.disjuncts[l];
      for (std::size_t k = 0; k < dj.constraints.size(); ++k) {
        const auto& c = dj.constraints[k];
        ModelRow row{"hrow" + idx({j, l, k}), {}, Sense::kLessEqual, 0.0, Role::kHullRow};
        for (const auto& t : c.lhs.terms()) {
          const auto pos = std::lower_bound(support.begin(), support.end(), t.var) - support.begin();
          row.terms.push_back({copies[l][static_cast<std::size_t>(pos)], t.lin});
        }
        row.terms.push_back({lam[l], -(c.rhs - c.lhs.constant())});
        m.add_row(std::move(row));
      }
    }
  }
  return m;
}

std::vector<TwoTermCut> two_term_cuts(const Disjunction& d, const Partition& p,
                                      const AlphaBounds& bounds,
                                      std::array<int, 2> lambda_cols) {
  if (d.disjuncts.size() != 2)
    throw std::invalid_argument("two-term cuts need exactly two disjuncts");
  for (const auto& dj : d.disjuncts)
    if (dj.constraints.size() != 1)
      throw std::invalid_argument("two-term cuts need one constraint per disjunct");
  const int P = p.size();
  if (P > 20) throw std::invalid_argument("two-term cuts: too many splits");
  std::vector<TwoTermCut> out;
  for (int l = 0; l < 2; ++l) {
    const auto& c = d.disjuncts[static_cast<std::size_t>(l)].constraints.front();
    std::vector<SeparableFunction> sums;
    for (const auto& cls : p.classes) sums.push_back(split_sum(d, l, 0, cls));
    for (std::uint32_t mask = 1; mask < (1u << P); ++mask) {
      TwoTermCut cut;
      cut.disjunct = l;
      double self = c.rhs - c.lhs.constant();
      double other = 0.0;
      for (int s = 0; s < P; ++s) {
        const AlphaEntry& e = bounds.at({l, 0, s});
        if (mask & (1u << s)) {
          cut.subset.push_back(s);
          for (const auto& t : sums[static_cast<std::size_t>(s)].terms()) cut.lhs.add_term(t);
          other += e.upper;
        } else {
          self -= e.lower;
        }
      }
      cut.lhs.add_linear(lambda_cols[static_cast<std::size_t>(l)], -self);
      cut.lhs.add_linear(lambda_cols[static_cast<std::size_t>(1 - l)], -other);
      out.push_back(std::move(cut));
    }
  }
  return out;
}

void add_two_term_cuts(MixedModel& m, const DisjunctiveProblem& problem,
                       const std::vector<Partition>& parts,
                       const std::vector<AlphaBounds>& bounds) {
  require_bounds_shape(problem, bounds);
  for (std::size_t j = 0; j < problem.disjunctions.size(); ++j) {
    const auto& lam = m.lambda.at(j);
    if (lam.size() != 2)
      throw std::invalid_argument("two-term cuts need exactly two disjuncts");
    const auto cuts = two_term_cuts(problem.disjunctions[j], parts.at(j), bounds[j], {lam[0], lam[1]});
    for (std::size_t c = 0; c < cuts.size(); ++c)
      add_separable_row(m, "cut" + idx({j, static_cast<std::size_t>(cuts[c].disjunct), c}),
                        cuts[c].lhs, cuts[c].rhs, Role::kCut);
  }
}

MixedModel compile_two_term(const DisjunctiveProblem& problem,
                            const std::vector<Partition>& parts,
                            const std::vector<AlphaBounds>& bounds) {
  MixedModel m = model_skeleton(problem, "2term-cuts");
  add_indicators(m, problem);
  add_two_term_cuts(m, problem, parts, bounds);
  return m;
}

int LinkingReport::kept_sides() const {
  int n = 0;
  for (const auto& k : kept) n += static_cast<int>(k.use_lower) + static_cast<int>(k.use_upper);
  return n;
}

LinkingReport generate_linking(const Disjunction& d, int l, const Partition& p,
                               const AlphaBounds& bounds,
                               std::span<const double> lower,
                               std::span<const double> upper) {
  LinkingReport rep;
  const auto& dj = d.disjuncts.at(static_cast<std::size_t>(l));
  const int nc = static_cast<int>(dj.constraints.size());
  for (int k = 0; k < nc; ++k)
    for (int j = k + 1; j < nc; ++j)
      for (int s = 0; s < p.size(); ++s) {
        const auto& cls = p.classes[static_cast<std::size_t>(s)];
        const SeparableFunction sk = split_sum(d, l, k, cls);
        const SeparableFunction sj = split_sum(d, l, j, cls);
        std::vector<int> vars;
        bool overlap = false;
        for (const auto& t : sk.terms()) vars.push_back(t.var);
        for (const auto& t : sj.terms()) {
          if (sk.find(t.var)) overlap = true;
          else vars.push_back(t.var);
        }
        std::sort(vars.begin(), vars.end());
        for (int rho2 : {1, -1}) {
          rep.candidates += 2;
          if (!overlap) {
            rep.dropped_no_overlap += 2;
            continue;
          }
          if (sk.is_affine() && sj.is_affine()) {
            bool all_same = true;
            for (const auto& t : sk.terms())
              if (const auto* u = sj.find(t.var))
                if (sign_of(t.lin) != sign_of(rho2 * u->lin)) all_same = false;
            if (all_same) {
              rep.dropped_same_signs += 2;
              continue;
            }
          }
          LinkingConstraint lc{l, k, j, s, 1, rho2, 0.0, 0.0, false, false};
          for (int v : vars) {
            const auto vi = static_cast<std::size_t>(v);
            const Interval r = combined_range(sk.find(v), 1.0, sj.find(v), rho2, lower[vi], upper[vi]);
            lc.lower += r.lower;
            lc.upper += r.upper;
          }
          const AlphaEntry& ek = bounds.at({l, k, s});
          const AlphaEntry& ej = bounds.at({l, j, s});
          const double sep_hi = ek.upper + (rho2 > 0 ? ej.upper : -ej.lower);
          const double sep_lo = ek.lower + (rho2 > 0 ? ej.lower : -ej.upper);
          const double tol = 1e-9;
          lc.use_upper = lc.upper < sep_hi - tol * (1.0 + std::abs(sep_hi));
          lc.use_lower = lc.lower > sep_lo + tol * (1.0 + std::abs(sep_lo));
          rep.dropped_redundant += static_cast<int>(!lc.use_upper) + static_cast<int>(!lc.use_lower);
          if (lc.use_upper || lc.use_lower) rep.kept.push_back(lc);
        }
      }
  return rep;
}

}  // namespace splitform
