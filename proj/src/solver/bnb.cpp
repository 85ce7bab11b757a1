#include <algorithm>
#include <chrono>
#include <cmath>
#include <queue>
#include <utility>

#include "splitform/solver.hpp"

namespace splitform {
namespace {

struct Node {
  std::int64_t id = 0;
  double bound = -std::numeric_limits<double>::infinity();  // minimize form
  std::vector<std::pair<int, double>> fixings;
};

struct WorseNode {
  bool operator()(const Node& a, const Node& b) const {
    if (a.bound != b.bound) return a.bound > b.bound;
    return a.id > b.id;
  }
};

}  // namespace

std::string_view status_name(MipStatus status) {
  switch (status) {
    case MipStatus::kOptimal: return "optimal";
    case MipStatus::kInfeasible: return "infeasible";
    case MipStatus::kTimeLimit: return "time_limit";
    case MipStatus::kNodeLimit: return "node_limit";
    case MipStatus::kUnbounded: return "unbounded";
    case MipStatus::kNumericalFailure: return "numerical_failure";
  }
  return "unknown";
}

MipResult solve_bnb(const MixedModel& model, const BnbOptions& options) {
  using Clock = std::chrono::steady_clock;
  const auto start = Clock::now();
  auto elapsed = [&] {
    return std::chrono::duration<double>(Clock::now() - start).count();
  };
  const double sign = model.objective.sense == ObjectiveSense::kMaximize ? -1.0 : 1.0;
  const std::vector<int> binaries = model.binary_columns();

  MipResult out;
  RelaxationSession master(model, options.relax);
  double incumbent = std::numeric_limits<double>::infinity();  // minimize form
  bool numerical_trouble = false;
  bool unbounded = false;

  auto gap_closed = [&](double bound) {
    const double tol = std::max(options.absolute_gap,
                                options.relative_gap * std::max(1.0, std::abs(incumbent)));
    return bound >= incumbent - tol;
  };

  std::priority_queue<Node, std::vector<Node>, WorseNode> open;
  std::int64_t next_id = 0;
  open.push({next_id++, -std::numeric_limits<double>::infinity(), {}});
  MipStatus limit_status = MipStatus::kOptimal;

  while (!open.empty()) {
    if (gap_closed(open.top().bound)) break;
    if (elapsed() > options.time_limit) {
      limit_status = MipStatus::kTimeLimit;
      break;
    }
    if (out.nodes >= options.node_limit) {
      limit_status = MipStatus::kNodeLimit;
      break;
    }
    Node node = open.top();
    open.pop();

    // Every node starts from the root's cuts. Cuts found deeper in the tree
    // stay with their node; importing them all makes the dense tableau grow
    // with the tree.
    RelaxationSession session = master;
    for (const auto& [col, value] : node.fixings) session.set_bounds(col, value, value);
    RelaxResult rel = session.solve();
    if (rel.status == LpStatus::kNumericalFailure ||
        rel.status == LpStatus::kIterationLimit) {
      RelaxationSession fresh(model, options.relax);
      for (const auto& [col, value] : node.fixings) fresh.set_bounds(col, value, value);
      rel = fresh.solve();
    } else if (node.fixings.empty()) {
      master = std::move(session);
    }
    ++out.nodes;
    out.lp_iterations += rel.lp_iterations;

    if (rel.status == LpStatus::kInfeasible) continue;
    if (rel.status == LpStatus::kUnbounded) {
      unbounded = true;
      break;
    }
    if (rel.status != LpStatus::kOptimal) {
      numerical_trouble = true;
      continue;
    }
    const double value = sign * rel.objective;
    if (gap_closed(value)) continue;

    int branch_col = -1;
    double best_frac = options.integrality_tol;
    for (int col : binaries) {
      const double v = rel.x[static_cast<std::size_t>(col)];
      const double frac = std::min(v - std::floor(v), std::ceil(v) - v);
      if (frac > best_frac) {
        best_frac = frac;
        branch_col = col;
      }
    }
    if (branch_col < 0) {
      incumbent = value;
      out.x = rel.x;
      for (int col : binaries) {
        auto& v = out.x[static_cast<std::size_t>(col)];
        v = std::round(v);
      }
      continue;
    }
    for (double side : {0.0, 1.0}) {
      Node child{next_id++, value, node.fixings};
      child.fixings.emplace_back(branch_col, side);
      open.push(std::move(child));
    }
  }

  out.seconds = elapsed();
  double bound = incumbent;
  if (!open.empty()) bound = std::min(bound, open.top().bound);
  if (out.has_incumbent()) {
    out.objective = sign * incumbent;
    out.bound = sign * bound;
    out.gap = std::abs(incumbent - bound) / std::max(1.0, std::abs(incumbent));
  } else if (std::isfinite(bound)) {
    out.bound = sign * bound;
  }

  if (unbounded) {
    out.status = MipStatus::kUnbounded;
  } else if (limit_status != MipStatus::kOptimal) {
    out.status = limit_status;
  } else if (out.has_incumbent()) {
    out.status = MipStatus::kOptimal;
  } else {
    out.status = numerical_trouble ? MipStatus::kNumericalFailure
                                   : MipStatus::kInfeasible;
  }
  return out;
}

}  // namespace splitform
