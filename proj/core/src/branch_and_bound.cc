#include <cmath>
#include <cstdio>
#include <memory>
#include <queue>
#include <set>
#include <sstream>
#include <tuple>

#include "lp_engine.h"

namespace twoscvrp {

const char* ToString(SolveStatus status) {
  switch (status) {
    case SolveStatus::kOptimal: return "optimal";
    case SolveStatus::kFeasible: return "feasible";
    case SolveStatus::kInfeasible: return "infeasible";
    case SolveStatus::kLimitReached: return "limitReached";
  }
  return "?";
}

std::string CheckPoint(const ModelIR& model, const std::vector<Rational>& values, double feas_tol,
                       double int_tol) {
  if (static_cast<int>(values.size()) != model.num_vars()) {
    return "expected " + std::to_string(model.num_vars()) + " values, got " + std::to_string(values.size());
  }
  for (int j = 0; j < model.num_vars(); ++j) {
    const VarDef& v = model.var(j);
    double x = values[j].ToDouble();
    if (v.lower && x < v.lower->ToDouble() - feas_tol) return "variable " + v.name + " below its lower bound";
    if (v.upper && x > v.upper->ToDouble() + feas_tol) return "variable " + v.name + " above its upper bound";
    if (v.is_integral() && std::fabs(x - std::round(x)) > int_tol) return "variable " + v.name + " is fractional";
  }
  for (int i = 0; i < model.num_constraints(); ++i) {
    const LinearConstraint& c = model.constraints()[i];
    long double viol;
    try {
      Rational lhs = model.EvaluateRow(i, values);
      Rational diff = c.sense == Sense::kGe ? c.rhs - lhs : lhs - c.rhs;
      viol = c.sense == Sense::kEq ? std::fabs(diff.ToDouble()) : diff.ToDouble();
    } catch (const std::overflow_error&) {
      long double lhs = 0;
      for (const Term& t : c.terms) lhs += static_cast<long double>(t.coef.ToDouble()) * values[t.var].ToDouble();
      long double diff = c.sense == Sense::kGe ? c.rhs.ToDouble() - lhs : lhs - c.rhs.ToDouble();
      viol = c.sense == Sense::kEq ? std::fabs(diff) : diff;
    }
    if (viol > feas_tol * (1.0 + std::fabs(c.rhs.ToDouble()))) {
      std::ostringstream os;
      os << "constraint " << c.name << " violated by " << static_cast<double>(viol);
      return os.str();
    }
  }
  return "";
}

namespace {

using detail::Clock;
using detail::LpEngine;
using detail::VarState;

struct BoundChange {
  int var;
  double lo, hi;
};

struct Node {
  std::vector<BoundChange> changes;
  double bound;
  std::shared_ptr<const std::vector<VarState>> basis;
  int64_t seq;
};

struct NodeAfter {
  bool operator()(const Node& a, const Node& b) const {
    return std::tie(a.bound, a.seq) > std::tie(b.bound, b.seq);
  }
};

Rational SnapContinuous(double x) {
  Rational r = Rational::FromDouble(x, 4096);
  if (std::fabs(r.ToDouble() - x) <= 1e-9) return r;
  return Rational::FromDouble(x);
}

std::vector<Rational> Snap(const ModelIR& model, const std::vector<double>& x) {
  std::vector<Rational> out(x.size());
  for (size_t j = 0; j < x.size(); ++j) {
    if (model.var(static_cast<VarId>(j)).is_integral()) {
      out[j] = Rational(static_cast<int64_t>(std::llround(x[j])));
    } else {
      out[j] = SnapContinuous(x[j]);
    }
  }
  return out;
}

Rational BoundToRational(double lb, bool integral) {
  if (integral) return Rational(static_cast<int64_t>(std::ceil(lb - 1e-6)));
  return Rational::FromDouble(lb);
}

}  // namespace

SolveResult SolveBnb(const ModelIR& model, const SolveOptions& options) {
  if (!(options.int_tol > 0) || !(options.lp_feas_tol > 0)) throw std::invalid_argument("tolerances must be positive");
  if (options.node_limit < 0 || options.time_limit < 0 || options.abs_gap < Rational(0)) {
    throw std::invalid_argument("limits must be nonnegative");
  }
  const auto start = Clock::now();
  auto elapsed = [&] { return std::chrono::duration<double>(Clock::now() - start).count(); };
  Clock::time_point deadline = Clock::time_point::max();
  if (std::isfinite(options.time_limit)) {
    deadline = start + std::chrono::duration_cast<Clock::duration>(std::chrono::duration<double>(options.time_limit));
  }

  SolveResult result;
  detail::LpData data = detail::LpData::FromModel(model);
  std::vector<int> int_vars;
  for (int j = 0; j < data.n; ++j) {
    if (!model.var(j).is_integral()) continue;
    int_vars.push_back(j);
    data.lower[j] = std::ceil(data.lower[j] - options.int_tol);
    data.upper[j] = std::floor(data.upper[j] + options.int_tol);
    if (data.lower[j] > data.upper[j]) {
      result.status = SolveStatus::kInfeasible;
      result.message = "empty integer domain for " + model.var(j).name;
      result.stats.wall_seconds = elapsed();
      return result;
    }
  }
  const std::vector<double> root_lower = data.lower, root_upper = data.upper;
  bool integral_objective = true;
  for (const Term& t : model.objective()) {
    if (!model.var(t.var).is_integral() || !t.coef.is_integer()) integral_objective = false;
  }
  const double gap = options.abs_gap.ToDouble();

  LpEngine engine(std::move(data), std::min(1e-9, options.lp_feas_tol * 0.01));
  engine.set_deadline(deadline);
  engine.SlackBasis(true);

  bool have_incumbent = false;
  double incumbent_value = 0;
  bool inexact = false;
  bool limit = false;
  double min_pruned = std::numeric_limits<double>::infinity();
  double reported_bound = -std::numeric_limits<double>::infinity();
  double last_log = 0;

  std::vector<Node> stack;
  std::priority_queue<Node, std::vector<Node>, NodeAfter> queue;
  std::multiset<double> open_bounds;
  const bool dfs = options.strategy == SearchStrategy::kDepthFirst;
  int64_t seq = 0;
  auto push = [&](Node node) {
    open_bounds.insert(node.bound);
    if (dfs) {
      stack.push_back(std::move(node));
    } else {
      queue.push(std::move(node));
    }
  };
  auto pop = [&] {
    Node node;
    if (dfs) {
      node = std::move(stack.back());
      stack.pop_back();
    } else {
      node = queue.top();
      queue.pop();
    }
    open_bounds.erase(open_bounds.find(node.bound));
    return node;
  };
  auto prunable = [&](double lb) {
    return have_incumbent && lb >= incumbent_value - gap - 1e-9 * (1.0 + std::fabs(incumbent_value));
  };

  push(Node{{}, -std::numeric_limits<double>::infinity(), nullptr, seq++});
  std::shared_ptr<const std::vector<VarState>> loaded;
  double interrupted_bound = std::numeric_limits<double>::infinity();

  while (!open_bounds.empty()) {
    if (result.stats.nodes >= options.node_limit || Clock::now() >= deadline) {
      limit = true;
      break;
    }
    Node node = pop();
    if (prunable(node.bound)) {
      min_pruned = std::min(min_pruned, node.bound);
      continue;
    }
    for (int j : int_vars) engine.SetBounds(j, root_lower[j], root_upper[j]);
    for (const BoundChange& c : node.changes) engine.SetBounds(c.var, c.lo, c.hi);
    if (node.basis && node.basis != loaded) {
      engine.SetBasis(*node.basis);
      loaded = node.basis;
    }
    LpStatus status = engine.Solve();
    ++result.stats.nodes;
    if (status == LpStatus::kNumericalFailure) {
      engine.SlackBasis(true);
      status = engine.Solve();
    }
    loaded = nullptr;
    if (status == LpStatus::kIterationLimit) {
      limit = true;
      interrupted_bound = node.bound;
      break;
    }
    if (status == LpStatus::kNumericalFailure) {
      inexact = true;
      result.message = "numerical failure in a node relaxation";
      continue;
    }
    if (status == LpStatus::kUnbounded) {
      if (!have_incumbent) result.message = "relaxation unbounded";
      inexact = true;
      continue;
    }
    if (status == LpStatus::kInfeasible) continue;

    double z = engine.Objective();
    double lb = integral_objective ? std::ceil(z - 1e-6) : z;
    lb = std::max(lb, node.bound);
    if (prunable(lb)) {
      min_pruned = std::min(min_pruned, lb);
      continue;
    }
    std::vector<double> x = engine.Values();
    int branch = -1;
    double best_frac = options.int_tol;
    for (int j : int_vars) {
      double f = x[j] - std::floor(x[j]);
      double score = std::min(f, 1.0 - f);
      if (score > best_frac) {
        best_frac = score;
        branch = j;
      }
    }
    if (branch < 0) {
      std::vector<Rational> values = Snap(model, x);
      std::string why = CheckPoint(model, values, options.lp_feas_tol, options.int_tol);
      if (!why.empty()) {
        // Re-solve with the integers fixed to their rounded values.
        for (int j : int_vars) engine.SetBounds(j, values[j].ToDouble(), values[j].ToDouble());
        if (engine.Solve() == LpStatus::kOptimal) {
          values = Snap(model, engine.Values());
          why = CheckPoint(model, values, options.lp_feas_tol, options.int_tol);
        }
      }
      if (!why.empty()) {
        inexact = true;
        result.message = "rejected an integral relaxation point: " + why;
        continue;
      }
      Rational obj;
      try {
        obj = model.EvaluateObjective(values);
      } catch (const std::overflow_error&) {
        obj = Rational::FromDouble(z);
      }
      if (!have_incumbent || obj < result.objective) {
        have_incumbent = true;
        result.objective = obj;
        result.values = std::move(values);
        incumbent_value = obj.ToDouble();
      }
      continue;
    }
    auto basis = std::make_shared<const std::vector<VarState>>(engine.GetBasis());
    loaded = basis;
    Node down{node.changes, lb, basis, 0};
    Node up{node.changes, lb, basis, 0};
    down.changes.push_back({branch, engine.lower(branch), std::floor(x[branch])});
    up.changes.push_back({branch, std::ceil(x[branch]), engine.upper(branch)});
    down.seq = seq++;
    up.seq = seq++;
    if (dfs) {
      push(std::move(up));
      push(std::move(down));
    } else {
      push(std::move(down));
      push(std::move(up));
    }

    double global = open_bounds.empty() ? lb : std::min(lb, *open_bounds.begin());
    if (have_incumbent) global = std::min(global, incumbent_value);
    reported_bound = std::max(reported_bound, global);
    if (options.log_interval > 0 && elapsed() - last_log >= options.log_interval) {
      last_log = elapsed();
      std::fprintf(stderr, "[bnb] %8.1fs nodes %lld open %zu incumbent %s bound %.6g\n", last_log,
                   static_cast<long long>(result.stats.nodes), open_bounds.size(),
                   have_incumbent ? result.objective.ToString().c_str() : "-", reported_bound);
    }
  }

  result.stats.simplex_iterations = engine.iterations();
  result.stats.wall_seconds = elapsed();
  result.has_solution = have_incumbent;
  if (limit) {
    result.status = SolveStatus::kLimitReached;
    double global = std::min(interrupted_bound, open_bounds.empty() ? interrupted_bound : *open_bounds.begin());
    global = std::min(global, min_pruned);
    if (have_incumbent) global = std::min(global, incumbent_value);
    global = std::max(global, reported_bound);
    if (std::isfinite(global)) {
      result.best_bound = BoundToRational(global, integral_objective);
      if (have_incumbent && result.objective < result.best_bound) result.best_bound = result.objective;
    }
    if (result.message.empty()) result.message = "limit reached";
    return result;
  }
  if (!have_incumbent) {
    result.status = inexact ? SolveStatus::kLimitReached : SolveStatus::kInfeasible;
    return result;
  }
  result.status = inexact ? SolveStatus::kFeasible : SolveStatus::kOptimal;
  result.best_bound = result.objective;
  if (std::isfinite(min_pruned) && min_pruned < incumbent_value) {
    Rational pruned = BoundToRational(min_pruned, integral_objective);
    if (pruned < result.best_bound) result.best_bound = pruned;
  }
  return result;
}

}  // namespace twoscvrp
