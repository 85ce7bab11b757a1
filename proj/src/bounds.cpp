#include "splitform/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>
#include <queue>
#include <sstream>

#include "splitform/text.hpp"

namespace splitform {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

bool close_rel(double a, double b, double tol) {
  return std::abs(a - b) <= tol * std::max({1e-300, std::abs(a), std::abs(b)});
}

}  // namespace

Interval term_range(const UnivariateTerm& t, double l, double u) {
  const double fl = t.value(l);
  const double fu = t.value(u);
  Interval out{std::min(fl, fu), std::max(fl, fu)};
  if (t.quad > 0.0) {
    const double stationary = std::clamp(t.center - t.lin / (2.0 * t.quad), l, u);
    out.lower = std::min(out.lower, t.value(stationary));
  }
  return out;
}

Interval quadratic_range(double Q, double B, double l, double u) {
  auto f = [&](double x) { return Q * x * x + B * x; };
  Interval out{std::min(f(l), f(u)), std::max(f(l), f(u))};
  if (Q != 0.0) {
    const double x = -B / (2.0 * Q);
    if (x > l && x < u) {
      out.lower = std::min(out.lower, f(x));
      out.upper = std::max(out.upper, f(x));
    }
  }
  return out;
}

SeparableFunction split_sum(const Disjunction& d, int l, int k,
                            const std::vector<int>& cls) {
  const auto& g = d.disjuncts[static_cast<std::size_t>(l)]
                      .constraints[static_cast<std::size_t>(k)]
                      .lhs;
  return g.restrict_to([&](int v) {
    return std::binary_search(cls.begin(), cls.end(), v);
  });
}

std::string_view provenance_name(BoundProvenance p) {
  switch (p) {
    case BoundProvenance::kInterval: return "interval";
    case BoundProvenance::kObbtUnion: return "obbt-union";
    case BoundProvenance::kLocal: return "local";
    case BoundProvenance::kUser: return "user";
  }
  return "user";
}

BoundProvenance parse_provenance(std::string_view text) {
  if (text == "interval") return BoundProvenance::kInterval;
  if (text == "obbt-union") return BoundProvenance::kObbtUnion;
  if (text == "local") return BoundProvenance::kLocal;
  if (text == "user") return BoundProvenance::kUser;
  throw ModelError("unknown bound provenance \"" + std::string(text) + "\"");
}

void AlphaBounds::set(AlphaKey key, double lower, double upper,
                      BoundProvenance p) {
  if (lower > upper)
    throw ModelError("alpha bound lower > upper for (" +
                     std::to_string(key.disjunct) + "," +
                     std::to_string(key.constraint) + "," +
                     std::to_string(key.split) + ")");
  global[key] = {lower, upper, p};
}

void AlphaBounds::set_local(AlphaKey key, int region, double lower,
                            double upper, BoundProvenance p) {
  if (lower > upper)
    throw ModelError("local alpha bound lower > upper");
  local[{key, region}] = {lower, upper, p};
}

const AlphaEntry& AlphaBounds::at(AlphaKey key) const {
  auto it = global.find(key);
  if (it == global.end())
    throw ModelError("missing alpha bound for disjunct " +
                     std::to_string(key.disjunct) + ", constraint " +
                     std::to_string(key.constraint) + ", split " +
                     std::to_string(key.split));
  return it->second;
}

AlphaEntry AlphaBounds::for_region(AlphaKey key, int region) const {
  auto it = local.find({key, region});
  if (it != local.end()) return it->second;
  return at(key);
}

AlphaBounds alpha_bounds_interval(const Disjunction& d, const Partition& p,
                                  std::span<const double> lower,
                                  std::span<const double> upper) {
  AlphaBounds out;
  out.num_splits = p.size();
  for (int l = 0; l < static_cast<int>(d.disjuncts.size()); ++l) {
    const auto& dj = d.disjuncts[static_cast<std::size_t>(l)];
    for (int k = 0; k < static_cast<int>(dj.constraints.size()); ++k)
      for (int s = 0; s < p.size(); ++s) {
        const SeparableFunction sum =
            split_sum(d, l, k, p.classes[static_cast<std::size_t>(s)]);
        double lo = 0.0;
        double hi = 0.0;
        for (const auto& t : sum.terms()) {
          const auto v = static_cast<std::size_t>(t.var);
          const Interval r = term_range(t, lower[v], upper[v]);
          lo += r.lower;
          hi += r.upper;
        }
        out.set({l, k, s}, lo, hi, BoundProvenance::kInterval);
      }
  }
  return out;
}

std::vector<AlphaBounds> alpha_bounds_interval(
    const DisjunctiveProblem& problem, const std::vector<Partition>& parts) {
  std::vector<AlphaBounds> out;
  for (std::size_t j = 0; j < problem.disjunctions.size(); ++j)
    out.push_back(alpha_bounds_interval(problem.disjunctions[j], parts.at(j),
                                        problem.lower, problem.upper));
  return out;
}

// ---------------------------------------------------------------------------
// Region optimization

RegionOptimizer::RegionOptimizer(const DisjunctiveProblem& problem,
                                 int disjunction, int disjunct,
                                 RegionOptions options)
    : problem_(&problem),
      disjunction_(disjunction),
      disjunct_(disjunct),
      options_(options),
      base_(model_skeleton(problem, "region")) {
  base_.objective.coeffs.assign(base_.objective.coeffs.size(), 0.0);
  base_.objective.constant = 0.0;
  base_.objective.sense = ObjectiveSense::kMinimize;
  if (disjunction >= 0 && disjunct >= 0) {
    const auto& dj = problem.disjunctions[static_cast<std::size_t>(disjunction)]
                         .disjuncts[static_cast<std::size_t>(disjunct)];
    for (std::size_t k = 0; k < dj.constraints.size(); ++k)
      add_separable_row(base_, "c" + std::to_string(k), dj.constraints[k].lhs,
                        dj.constraints[k].rhs, Role::kOther);
  }
  const RelaxResult r = solve_relaxation(base_, options_.relax);
  feasible_ = r.status == LpStatus::kOptimal;
}

double RegionOptimizer::minimize(const SeparableFunction& s) const {
  if (s.is_affine()) {
    RelaxationSession session(base_, options_.relax);
    std::vector<double> c(static_cast<std::size_t>(base_.num_vars()), 0.0);
    for (const auto& t : s.terms()) c[static_cast<std::size_t>(t.var)] = t.lin;
    session.set_objective(c, ObjectiveSense::kMinimize, s.constant());
    const RelaxResult r = session.solve();
    return r.status == LpStatus::kOptimal ? r.objective : kInf;
  }
  MixedModel m = base_;
  double lo = s.constant();
  double hi = s.constant();
  for (const auto& t : s.terms()) {
    const auto v = static_cast<std::size_t>(t.var);
    const Interval r = term_range(t, problem_->lower[v], problem_->upper[v]);
    lo += r.lower;
    hi += r.upper;
  }
  const int tcol = m.add_var({"t", lo, hi, VarKind::kContinuous, Role::kOther});
  SeparableFunction row = s;
  row.add_linear(tcol, -1.0);
  add_separable_row(m, "epi", row, 0.0, Role::kEpigraph);
  m.objective.coeffs[static_cast<std::size_t>(tcol)] = 1.0;
  const RelaxResult r = solve_relaxation(m, options_.relax);
  return r.status == LpStatus::kOptimal ? r.objective : kInf;
}

double RegionOptimizer::maximize(const SeparableFunction& s) const {
  last_exact_ = true;
  if (!s.is_affine()) return maximize_quadratic(s);
  RelaxationSession session(base_, options_.relax);
  std::vector<double> c(static_cast<std::size_t>(base_.num_vars()), 0.0);
  for (const auto& t : s.terms()) c[static_cast<std::size_t>(t.var)] = t.lin;
  session.set_objective(c, ObjectiveSense::kMaximize, s.constant());
  const RelaxResult r = session.solve();
  return r.status == LpStatus::kOptimal ? r.objective : -kInf;
}

double RegionOptimizer::own_constraint_cap(const SeparableFunction& s) const {
  if (disjunction_ < 0 || disjunct_ < 0) return kInf;
  const auto& dj = problem_->disjunctions[static_cast<std::size_t>(disjunction_)]
                       .disjuncts[static_cast<std::size_t>(disjunct_)];
  double cap = kInf;
  for (const auto& c : dj.constraints) {
    bool covers = true;
    for (const auto& t : s.terms()) {
      const UnivariateTerm* g = c.lhs.find(t.var);
      if (g == nullptr || !(*g == t)) {
        covers = false;
        break;
      }
    }
    if (!covers) continue;
    const SeparableFunction rest =
        c.lhs.restrict_to([&](int v) { return s.find(v) == nullptr; });
    const double rest_min = rest.empty() ? 0.0 : minimize(rest);
    cap = std::min(cap, c.rhs - c.lhs.constant() - rest_min + s.constant());
  }
  return cap;
}

double RegionOptimizer::maximize_quadratic(const SeparableFunction& s) const {
  struct Box {
    std::vector<double> lo, hi;
    double ub = kInf;
    std::int64_t id = 0;
  };
  struct Lower {
    bool operator()(const Box& a, const Box& b) const {
      if (a.ub != b.ub) return a.ub < b.ub;
      return a.id > b.id;
    }
  };
  std::vector<const UnivariateTerm*> quads;
  for (const auto& t : s.terms())
    if (t.quad != 0.0) quads.push_back(&t);

  const double cap = own_constraint_cap(s);
  RelaxationSession master(base_, options_.relax);
  double incumbent = -kInf;
  std::int64_t next_id = 0;
  const auto nv = static_cast<std::size_t>(base_.num_vars());

  // Solves the secant relaxation on a box; returns false when it is empty.
  auto evaluate = [&](Box& box, std::vector<double>& x) {
    RelaxationSession session = master;
    const std::size_t before = session.num_cuts();
    std::vector<double> c(nv, 0.0);
    double constant = s.constant();
    std::size_t qi = 0;
    for (const auto& t : s.terms()) {
      const auto v = static_cast<std::size_t>(t.var);
      if (t.quad == 0.0) {
        c[v] += t.lin;
        continue;
      }
      const double l = box.lo[qi];
      const double u = box.hi[qi];
      session.set_bounds(t.var, l, u);
      const double slope = t.quad * (u + l - 2.0 * t.center);
      c[v] += slope + t.lin;
      constant += t.quad * (l - t.center) * (l - t.center) - slope * l;
      ++qi;
    }
    session.set_objective(c, ObjectiveSense::kMaximize, constant);
    const RelaxResult r = session.solve();
    master.import_cuts(session, before);
    if (r.status != LpStatus::kOptimal) return false;
    box.ub = r.objective;
    x = r.x;
    if (base_.max_violation(x) <= 1e-7) incumbent = std::max(incumbent, s.evaluate(x));
    return true;
  };

  // Successive linearization: each step maximizes the gradient of s at the
  // current point over the region, which never decreases s.
  auto ascend = [&](std::vector<double> x) {
    double best = s.evaluate(x);
    for (int it = 0; it < 50; ++it) {
      std::vector<double> c(nv, 0.0);
      for (const auto& t : s.terms())
        c[static_cast<std::size_t>(t.var)] = t.derivative(x[static_cast<std::size_t>(t.var)]);
      RelaxationSession session = master;
      const std::size_t before = session.num_cuts();
      session.set_objective(c, ObjectiveSense::kMaximize);
      const RelaxResult r = session.solve();
      master.import_cuts(session, before);
      if (r.status != LpStatus::kOptimal) break;
      const double v = s.evaluate(r.x);
      if (base_.max_violation(r.x) <= 1e-7) incumbent = std::max(incumbent, v);
      if (v <= best + 1e-13 * std::max(1.0, std::abs(best))) break;
      best = v;
      x = r.x;
    }
  };

  Box root;
  for (const auto* t : quads) {
    root.lo.push_back(problem_->lower[static_cast<std::size_t>(t->var)]);
    root.hi.push_back(problem_->upper[static_cast<std::size_t>(t->var)]);
  }
  std::priority_queue<Box, std::vector<Box>, Lower> open;
  std::vector<double> x;
  root.id = next_id++;
  if (!evaluate(root, x)) return -kInf;
  std::vector<std::vector<double>> sol_of;
  sol_of.push_back(x);
  open.push(root);
  ascend(x);

  auto gap_ok = [&](double ub) {
    return ub - incumbent <= options_.tol * std::max(1.0, std::abs(incumbent));
  };
  int nodes = 1;
  double pruned = -kInf;
  while (!open.empty()) {
    const Box top = open.top();
    if (gap_ok(top.ub)) return std::min(cap, top.ub);
    if (incumbent >= cap - options_.tol * std::max(1.0, std::abs(cap))) return cap;
    if (nodes >= options_.max_nodes) break;
    open.pop();

    const auto& xs = sol_of[static_cast<std::size_t>(top.id)];
    std::size_t pick = 0;
    double worst = -1.0;
    for (std::size_t i = 0; i < quads.size(); ++i) {
      const double w = top.hi[i] - top.lo[i];
      if (w <= 0.0) continue;
      const auto* t = quads[i];
      const double v = xs[static_cast<std::size_t>(t->var)];
      const double secant =
          t->quad * ((top.lo[i] - t->center) * (top.lo[i] - t->center)) +
          t->quad * (top.hi[i] + top.lo[i] - 2.0 * t->center) * (v - top.lo[i]);
      const double gap = secant - t->quad * (v - t->center) * (v - t->center);
      const double score = std::max(gap, 0.0) + 1e-12 * t->quad * w * w;
      if (score > worst) {
        worst = score;
        pick = i;
      }
    }
    if (worst < 0.0) return std::min(cap, top.ub);
    const double mid = 0.5 * (top.lo[pick] + top.hi[pick]);
    for (int side = 0; side < 2; ++side) {
      Box child = top;
      if (side == 0)
        child.hi[pick] = mid;
      else
        child.lo[pick] = mid;
      child.id = next_id++;
      sol_of.emplace_back();
      ++nodes;
      if (!evaluate(child, x)) continue;
      if (gap_ok(child.ub)) {
        pruned = std::max(pruned, child.ub);
        continue;
      }
      sol_of[static_cast<std::size_t>(child.id)] = x;
      open.push(child);
    }
  }
  last_exact_ = false;
  if (open.empty()) return std::min(cap, std::max(incumbent, pruned));
  return std::min(cap, open.top().ub);
}

AlphaBounds alpha_bounds_obbt(const DisjunctiveProblem& problem, int j,
                              const Partition& p, ObbtMode mode,
                              const RegionOptions& options) {
  const auto& d = problem.disjunctions[static_cast<std::size_t>(j)];
  const AlphaBounds interval =
      alpha_bounds_interval(d, p, problem.lower, problem.upper);
  std::vector<RegionOptimizer> regions;
  for (int r = 0; r < static_cast<int>(d.disjuncts.size()); ++r) {
    regions.emplace_back(problem, j, r, options);
    if (!regions.back().feasible())
      throw ModelError("disjunct " + std::to_string(r) + " of disjunction " +
                       std::to_string(j) + " is empty over the domain");
  }
  AlphaBounds out;
  out.num_splits = p.size();
  for (const auto& [key, entry] : interval.global) {
    const SeparableFunction sum =
        split_sum(d, key.disjunct, key.constraint,
                  p.classes[static_cast<std::size_t>(key.split)]);
    double lo = kInf;
    double hi = -kInf;
    for (int r = 0; r < static_cast<int>(regions.size()); ++r) {
      double rl = 0.0;
      double rh = 0.0;
      if (!sum.empty()) {
        rl = std::max(entry.lower, regions[static_cast<std::size_t>(r)].minimize(sum));
        rh = std::min(entry.upper, regions[static_cast<std::size_t>(r)].maximize(sum));
        rh = std::max(rh, rl);
      }
      lo = std::min(lo, rl);
      hi = std::max(hi, rh);
      if (mode == ObbtMode::kLocal)
        out.set_local(key, r, rl, rh, BoundProvenance::kLocal);
    }
    out.set(key, lo, hi, BoundProvenance::kObbtUnion);
  }
  return out;
}

std::vector<AlphaBounds> alpha_bounds_obbt(const DisjunctiveProblem& problem,
                                           const std::vector<Partition>& parts,
                                           ObbtMode mode,
                                           const RegionOptions& options) {
  std::vector<AlphaBounds> out;
  for (int j = 0; j < static_cast<int>(problem.disjunctions.size()); ++j)
    out.push_back(alpha_bounds_obbt(problem, j, parts.at(static_cast<std::size_t>(j)),
                                    mode, options));
  return out;
}

std::vector<IndependenceResult> independence_check(
    const DisjunctiveProblem& problem, int j, const Partition& p, double tol) {
  const auto& d = problem.disjunctions[static_cast<std::size_t>(j)];
  RegionOptimizer domain(problem, -1, -1);
  std::vector<IndependenceResult> out;
  for (int l = 0; l < static_cast<int>(d.disjuncts.size()); ++l) {
    const auto& dj = d.disjuncts[static_cast<std::size_t>(l)];
    for (int k = 0; k < static_cast<int>(dj.constraints.size()); ++k) {
      std::vector<SeparableFunction> sums;
      for (const auto& cls : p.classes) sums.push_back(split_sum(d, l, k, cls));
      for (int a = 0; a < p.size(); ++a)
        for (int b = a + 1; b < p.size(); ++b) {
          const auto& sa = sums[static_cast<std::size_t>(a)];
          const auto& sb = sums[static_cast<std::size_t>(b)];
          SeparableFunction joint = sa;
          for (const auto& t : sb.terms()) joint.add_term(t);
          IndependenceResult res{l, k, a, b, true, {}, {}};
          res.joint = {domain.minimize(joint), domain.maximize(joint)};
          res.separate = {domain.minimize(sa) + domain.minimize(sb),
                          domain.maximize(sa) + domain.maximize(sb)};
          auto same = [&](double x, double y) {
            return std::abs(x - y) <= tol * std::max(1.0, std::abs(y));
          };
          res.independent = same(res.joint.lower, res.separate.lower) &&
                            same(res.joint.upper, res.separate.upper);
          out.push_back(res);
        }
    }
  }
  return out;
}

namespace {

// Returns t with b = t * a, or nullopt.
std::optional<double> proportion(const SeparableFunction& a,
                                 const SeparableFunction& b) {
  constexpr double kTol = 1e-12;
  if (a.terms().size() != b.terms().size() || a.empty()) return std::nullopt;
  double t = 0.0;
  const auto& ta = a.terms().front();
  const auto& tb = b.terms().front();
  if (ta.var != tb.var) return std::nullopt;
  if (ta.quad != 0.0)
    t = tb.quad / ta.quad;
  else if (ta.lin != 0.0)
    t = tb.lin / ta.lin;
  if (t == 0.0 || !std::isfinite(t)) return std::nullopt;
  for (std::size_t i = 0; i < a.terms().size(); ++i) {
    const auto& x = a.terms()[i];
    const auto& y = b.terms()[i];
    if (x.var != y.var) return std::nullopt;
    if ((x.quad == 0.0) != (y.quad == 0.0)) return std::nullopt;
    if ((x.lin == 0.0) != (y.lin == 0.0)) return std::nullopt;
    if (x.quad != 0.0 && (!close_rel(y.quad, t * x.quad, kTol) ||
                          !close_rel(y.center, x.center, kTol)))
      return std::nullopt;
    if (x.lin != 0.0 && !close_rel(y.lin, t * x.lin, kTol)) return std::nullopt;
  }
  return t;
}

}  // namespace

SharingPlan detect_shared_alphas(const Disjunction& d, const Partition& p,
                                 bool allow_negative) {
  SharingPlan plan;
  std::vector<SeparableFunction> reps;
  for (int l = 0; l < static_cast<int>(d.disjuncts.size()); ++l) {
    const auto& dj = d.disjuncts[static_cast<std::size_t>(l)];
    for (int k = 0; k < static_cast<int>(dj.constraints.size()); ++k)
      for (int s = 0; s < p.size(); ++s) {
        const AlphaKey key{l, k, s};
        const SeparableFunction sum =
            split_sum(d, l, k, p.classes[static_cast<std::size_t>(s)]);
        int group = -1;
        double scale = 1.0;
        if (!sum.empty()) {
          for (std::size_t g = 0; g < reps.size(); ++g) {
            if (plan.groups[g].representative.split != s) continue;
            const auto t = proportion(reps[g], sum);
            if (!t) continue;
            if (*t < 0.0 && !(allow_negative && sum.is_affine())) continue;
            group = static_cast<int>(g);
            scale = *t;
            break;
          }
        }
        if (group < 0) {
          group = static_cast<int>(plan.groups.size());
          plan.groups.push_back({key, {}});
          reps.push_back(sum.empty() ? SeparableFunction{} : sum);
          if (sum.empty()) reps.back().add_constant(0.0);
          scale = 1.0;
        }
        plan.groups[static_cast<std::size_t>(group)].members.push_back({key, scale});
        plan.lookup[key] = {group, scale};
      }
  }
  return plan;
}

void write_bounds_csv(std::ostream& out, const std::vector<AlphaBounds>& bounds) {
  out << "disjunction,disjunct,constraint,split,region,lower,upper,provenance\n";
  for (std::size_t j = 0; j < bounds.size(); ++j) {
    for (const auto& [key, e] : bounds[j].global)
      out << j << ',' << key.disjunct << ',' << key.constraint << ','
          << key.split << ",all," << format_double(e.lower) << ','
          << format_double(e.upper) << ',' << provenance_name(e.provenance)
          << '\n';
    for (const auto& [kr, e] : bounds[j].local)
      out << j << ',' << kr.first.disjunct << ',' << kr.first.constraint << ','
          << kr.first.split << ',' << kr.second << ','
          << format_double(e.lower) << ',' << format_double(e.upper) << ','
          << provenance_name(e.provenance) << '\n';
  }
}

std::vector<AlphaBounds> read_bounds_csv(std::istream& in) {
  std::vector<AlphaBounds> out;
  std::string line;
  int line_no = 0;
  bool header = true;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    if (header) {
      header = false;
      if (line.rfind("disjunction", 0) == 0) continue;
    }
    const std::vector<std::string> f = split_fields(line, ',');
    if (f.size() != 8)
      throw ModelError("bounds CSV line " + std::to_string(line_no) +
                       ": expected 8 fields, got " + std::to_string(f.size()));
    try {
      const int j = std::stoi(f[0]);
      const AlphaKey key{std::stoi(f[1]), std::stoi(f[2]), std::stoi(f[3])};
      if (j < 0 || key.disjunct < 0 || key.constraint < 0 || key.split < 0)
        throw ModelError("negative index");
      if (static_cast<std::size_t>(j) >= out.size())
        out.resize(static_cast<std::size_t>(j) + 1);
      auto& b = out[static_cast<std::size_t>(j)];
      b.num_splits = std::max(b.num_splits, key.split + 1);
      const double lo = parse_double(f[5]);
      const double hi = parse_double(f[6]);
      const BoundProvenance prov = parse_provenance(f[7]);
      if (f[4] == "all")
        b.set(key, lo, hi, prov);
      else
        b.set_local(key, std::stoi(f[4]), lo, hi, prov);
    } catch (const ModelError& e) {
      throw ModelError("bounds CSV line " + std::to_string(line_no) + ": " +
                       e.what());
    } catch (const std::exception& e) {
      throw ModelError("bounds CSV line " + std::to_string(line_no) +
                       ": malformed number");
    }
  }
  return out;
}

void save_bounds_csv(const std::string& path,
                     const std::vector<AlphaBounds>& bounds) {
  std::ofstream f(path);
  if (!f) throw ModelError("cannot write " + path);
  write_bounds_csv(f, bounds);
}

std::vector<AlphaBounds> load_bounds_csv(const std::string& path) {
  std::ifstream f(path);
  if (!f) throw ModelError("cannot read " + path);
  return read_bounds_csv(f);
}

}  // namespace splitform
