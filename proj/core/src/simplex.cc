#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "lp_engine.h"

namespace twoscvrp {

const char* ToString(LpStatus status) {
  switch (status) {
    case LpStatus::kOptimal: return "optimal";
    case LpStatus::kInfeasible: return "infeasible";
    case LpStatus::kUnbounded: return "unbounded";
    case LpStatus::kIterationLimit: return "iteration_limit";
    case LpStatus::kNumericalFailure: return "numerical_failure";
  }
  return "?";
}

namespace detail {
namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();
constexpr double kPivotTol = 1e-9;
constexpr double kDropTol = 1e-14;
constexpr int kRefactorEvery = 100;
constexpr int kDegenerateBeforeBland = 50;

}  // namespace

LpData LpData::FromModel(const ModelIR& model) {
  LpData lp;
  lp.n = model.num_vars();
  lp.m = model.num_constraints();
  lp.cost.assign(lp.n, 0.0);
  for (const Term& t : model.objective()) lp.cost[t.var] += t.coef.ToDouble();
  lp.lower.resize(lp.n + lp.m);
  lp.upper.resize(lp.n + lp.m);
  for (int j = 0; j < lp.n; ++j) {
    const VarDef& v = model.var(j);
    lp.lower[j] = v.lower ? v.lower->ToDouble() : -kInf;
    lp.upper[j] = v.upper ? v.upper->ToDouble() : kInf;
  }
  std::vector<int> count(lp.n, 0);
  lp.rows.start.assign(1, 0);
  for (int i = 0; i < lp.m; ++i) {
    const LinearConstraint& c = model.constraints()[i];
    double rhs = c.rhs.ToDouble();
    int s = lp.n + i;
    switch (c.sense) {
      case Sense::kLe: lp.lower[s] = -rhs; lp.upper[s] = kInf; break;
      case Sense::kGe: lp.lower[s] = -kInf; lp.upper[s] = -rhs; break;
      case Sense::kEq: lp.lower[s] = lp.upper[s] = -rhs; break;
    }
    for (const Term& t : c.terms) {
      lp.rows.index.push_back(t.var);
      lp.rows.value.push_back(t.coef.ToDouble());
      ++count[t.var];
    }
    lp.rows.start.push_back(static_cast<int>(lp.rows.index.size()));
  }
  lp.cols.start.assign(lp.n + 1, 0);
  for (int j = 0; j < lp.n; ++j) lp.cols.start[j + 1] = lp.cols.start[j] + count[j];
  lp.cols.index.resize(lp.rows.index.size());
  lp.cols.value.resize(lp.rows.index.size());
  std::vector<int> fill(lp.cols.start.begin(), lp.cols.start.end() - 1);
  for (int i = 0; i < lp.m; ++i) {
    for (int p = lp.rows.start[i]; p < lp.rows.start[i + 1]; ++p) {
      int j = lp.rows.index[p];
      lp.cols.index[fill[j]] = i;
      lp.cols.value[fill[j]] = lp.rows.value[p];
      ++fill[j];
    }
  }
  return lp;
}

void WorkVector::Resize(int m) {
  val.assign(m, 0.0);
  mark.assign(m, 0);
  nz.clear();
}

void WorkVector::Clear() {
  for (int i : nz) {
    val[i] = 0.0;
    mark[i] = 0;
  }
  nz.clear();
}

LpEngine::LpEngine(LpData data, double primal_tol, double dual_tol)
    : data_(std::move(data)), primal_tol_(primal_tol), dual_tol_(dual_tol) {
  total_ = data_.n + data_.m;
  x_.assign(total_, 0.0);
  d_.assign(total_, 0.0);
  head_.assign(data_.m, -1);
  work_a_.Resize(data_.m);
  work_b_.Resize(data_.m);
  row_alpha_.assign(total_, 0.0);
  row_mark_.assign(total_, 0);
  SlackBasis(false);
}

void LpEngine::SlackBasis(bool prefer_dual) {
  state_.assign(total_, VarState::kBasic);
  for (int j = 0; j < data_.n; ++j) {
    double lo = data_.lower[j], hi = data_.upper[j];
    if (prefer_dual && data_.cost[j] < 0 && hi < kInf) {
      state_[j] = VarState::kUpper;
    } else if (lo > -kInf) {
      state_[j] = VarState::kLower;
    } else if (hi < kInf) {
      state_[j] = VarState::kUpper;
    } else {
      state_[j] = VarState::kZero;
    }
  }
  need_refactor_ = true;
  need_primal_ = true;
}

void LpEngine::SetBasis(const std::vector<VarState>& state) {
  state_ = state;
  need_refactor_ = true;
  need_primal_ = true;
}

void LpEngine::SetBounds(int j, double lo, double hi) {
  data_.lower[j] = lo;
  data_.upper[j] = hi;
  if (state_[j] != VarState::kBasic) {
    if (state_[j] == VarState::kLower && lo == -kInf) state_[j] = hi < kInf ? VarState::kUpper : VarState::kZero;
    if (state_[j] == VarState::kUpper && hi == kInf) state_[j] = lo > -kInf ? VarState::kLower : VarState::kZero;
  }
  need_primal_ = true;
}

double LpEngine::NonbasicValue(int j) const {
  switch (state_[j]) {
    case VarState::kLower: return data_.lower[j];
    case VarState::kUpper: return data_.upper[j];
    default: return 0.0;
  }
}

void LpEngine::LoadColumn(int j, WorkVector& v) const {
  v.Clear();
  if (j >= data_.n) {
    v.Add(j - data_.n, 1.0);
    return;
  }
  for (int p = data_.cols.start[j]; p < data_.cols.start[j + 1]; ++p) {
    v.Add(data_.cols.index[p], data_.cols.value[p]);
  }
}

void LpEngine::Ftran(WorkVector& v) const {
  const int etas = static_cast<int>(eta_row_.size());
  for (int k = 0; k < etas; ++k) {
    int r = eta_row_[k];
    double t = v.val[r];
    if (t == 0.0) continue;
    t /= eta_pivot_[k];
    v.val[r] = t;
    for (int p = eta_start_[k]; p < eta_start_[k + 1]; ++p) v.Add(eta_index_[p], -eta_value_[p] * t);
  }
}

void LpEngine::Btran(WorkVector& v) const {
  for (int k = static_cast<int>(eta_row_.size()) - 1; k >= 0; --k) {
    int r = eta_row_[k];
    double s = v.val[r];
    for (int p = eta_start_[k]; p < eta_start_[k + 1]; ++p) s -= eta_value_[p] * v.val[eta_index_[p]];
    if (s != 0.0 || v.mark[r]) {
      if (!v.mark[r]) {
        v.mark[r] = 1;
        v.nz.push_back(r);
      }
      v.val[r] = s / eta_pivot_[k];
    }
  }
}

void LpEngine::AddEta(int row, const WorkVector& alpha) {
  eta_row_.push_back(row);
  eta_pivot_.push_back(alpha.val[row]);
  for (int i : alpha.nz) {
    if (i == row || std::fabs(alpha.val[i]) <= kDropTol) continue;
    eta_index_.push_back(i);
    eta_value_.push_back(alpha.val[i]);
  }
  eta_start_.push_back(static_cast<int>(eta_index_.size()));
}

void LpEngine::Refactor() {
  eta_row_.clear();
  eta_pivot_.clear();
  eta_start_.assign(1, 0);
  eta_index_.clear();
  eta_value_.clear();
  updates_since_refactor_ = 0;

  const int n = data_.n, m = data_.m;
  std::vector<char> taken(m, 0);
  std::vector<int> structurals;
  for (int i = 0; i < m; ++i) {
    if (state_[n + i] == VarState::kBasic) taken[i] = 1;
  }
  for (int j = 0; j < n; ++j) {
    if (state_[j] == VarState::kBasic) structurals.push_back(j);
  }
  std::stable_sort(structurals.begin(), structurals.end(), [&](int a, int b) {
    return data_.cols.start[a + 1] - data_.cols.start[a] < data_.cols.start[b + 1] - data_.cols.start[b];
  });
  std::fill(head_.begin(), head_.end(), -1);
  for (int i = 0; i < m; ++i) {
    if (taken[i]) head_[i] = n + i;
  }
  std::vector<int> rejected;
  for (int j : structurals) {
    LoadColumn(j, work_a_);
    Ftran(work_a_);
    int best = -1;
    double best_abs = kPivotTol;
    for (int i : work_a_.nz) {
      if (taken[i]) continue;
      double a = std::fabs(work_a_.val[i]);
      if (a > best_abs || (a == best_abs && best >= 0 && i < best)) {
        best = i;
        best_abs = a;
      }
    }
    if (best < 0) {
      rejected.push_back(j);
      continue;
    }
    AddEta(best, work_a_);
    taken[best] = 1;
    head_[best] = j;
  }
  // Singular columns leave; the logicals of the uncovered rows take over.
  for (int j : rejected) {
    double lo = data_.lower[j], hi = data_.upper[j];
    state_[j] = lo > -kInf ? VarState::kLower : (hi < kInf ? VarState::kUpper : VarState::kZero);
  }
  for (int i = 0; i < m; ++i) {
    if (!taken[i]) {
      state_[n + i] = VarState::kBasic;
      head_[i] = n + i;
    }
  }
  need_refactor_ = false;
  need_primal_ = true;
}

void LpEngine::ComputePrimal() {
  const int n = data_.n;
  work_a_.Clear();
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == VarState::kBasic) continue;
    double v = NonbasicValue(j);
    x_[j] = v;
    if (v == 0.0) continue;
    if (j >= n) {
      work_a_.Add(j - n, -v);
    } else {
      for (int p = data_.cols.start[j]; p < data_.cols.start[j + 1]; ++p) {
        work_a_.Add(data_.cols.index[p], -data_.cols.value[p] * v);
      }
    }
  }
  Ftran(work_a_);
  for (int r = 0; r < data_.m; ++r) x_[head_[r]] = work_a_.val[r];
  need_primal_ = false;
}

void LpEngine::ComputeDuals() {
  const int n = data_.n;
  work_b_.Clear();
  for (int r = 0; r < data_.m; ++r) {
    int j = head_[r];
    if (j < n && data_.cost[j] != 0.0) work_b_.Add(r, data_.cost[j]);
  }
  Btran(work_b_);
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == VarState::kBasic) {
      d_[j] = 0.0;
    } else if (j >= n) {
      d_[j] = -work_b_.val[j - n];
    } else {
      double s = data_.cost[j];
      for (int p = data_.cols.start[j]; p < data_.cols.start[j + 1]; ++p) {
        s -= work_b_.val[data_.cols.index[p]] * data_.cols.value[p];
      }
      d_[j] = s;
    }
  }
}

double LpEngine::PrimalInfeasibility(int j) const {
  if (x_[j] < data_.lower[j] - primal_tol_) return data_.lower[j] - x_[j];
  if (x_[j] > data_.upper[j] + primal_tol_) return x_[j] - data_.upper[j];
  return 0.0;
}

bool LpEngine::IsDualFeasible() {
  if (!Prepare()) return false;
  ComputeDuals();
  return DualsFeasible();
}

bool LpEngine::DualsFeasible() const {
  for (int j = 0; j < total_; ++j) {
    if (state_[j] == VarState::kBasic || data_.lower[j] == data_.upper[j]) continue;
    if (state_[j] == VarState::kLower && d_[j] < -dual_tol_) return false;
    if (state_[j] == VarState::kUpper && d_[j] > dual_tol_) return false;
    if (state_[j] == VarState::kZero && std::fabs(d_[j]) > dual_tol_) return false;
  }
  return true;
}

bool LpEngine::Prepare() {
  if (need_refactor_ || updates_since_refactor_ >= kRefactorEvery) Refactor();
  if (need_primal_) ComputePrimal();
  return true;
}

bool LpEngine::OutOfBudget() {
  if (iterations_ >= iteration_limit_) return true;
  if ((iterations_ & 31) == 0 && deadline_ != Clock::time_point::max() && Clock::now() >= deadline_) return true;
  return false;
}

void LpEngine::ClearRow() {
  for (int j : row_touched_) {
    row_alpha_[j] = 0.0;
    row_mark_[j] = 0;
  }
  row_touched_.clear();
}

double LpEngine::Objective() const {
  double z = 0.0;
  for (int j = 0; j < data_.n; ++j) z += data_.cost[j] * x_[j];
  return z;
}

std::vector<double> LpEngine::Values() const {
  return std::vector<double>(x_.begin(), x_.begin() + data_.n);
}

LpStatus LpEngine::Solve() {
  if (IsDualFeasible()) return Dual(true);
  return Primal();
}

// Composite primal simplex: while some basic variable is out of bounds the
// objective is the sum of infeasibilities, afterwards the true cost.
LpStatus LpEngine::Primal() {
  const int n = data_.n, m = data_.m;
  int degenerate = 0;
  bool bland = false;
  int verify_attempts = 0;
  std::vector<double> phase_cost(m, 0.0);
  while (true) {
    Prepare();
    bool phase1 = false;
    for (int r = 0; r < m; ++r) {
      int j = head_[r];
      double c = 0.0;
      if (x_[j] < data_.lower[j] - primal_tol_) {
        c = -1.0;
        phase1 = true;
      } else if (x_[j] > data_.upper[j] + primal_tol_) {
        c = 1.0;
        phase1 = true;
      }
      phase_cost[r] = c;
    }
    // Prices.
    work_b_.Clear();
    for (int r = 0; r < m; ++r) {
      double c = phase1 ? phase_cost[r] : (head_[r] < n ? data_.cost[head_[r]] : 0.0);
      if (c != 0.0) work_b_.Add(r, c);
    }
    Btran(work_b_);
    int enter = -1;
    double best = 0.0;
    for (int j = 0; j < total_; ++j) {
      VarState st = state_[j];
      if (st == VarState::kBasic || data_.lower[j] == data_.upper[j]) continue;
      double dj;
      if (j >= n) {
        dj = -work_b_.val[j - n];
      } else {
        dj = phase1 ? 0.0 : data_.cost[j];
        for (int p = data_.cols.start[j]; p < data_.cols.start[j + 1]; ++p) {
          dj -= work_b_.val[data_.cols.index[p]] * data_.cols.value[p];
        }
      }
      double gain = 0.0;
      if (st == VarState::kLower && dj < -dual_tol_) gain = -dj;
      else if (st == VarState::kUpper && dj > dual_tol_) gain = dj;
      else if (st == VarState::kZero && std::fabs(dj) > dual_tol_) gain = std::fabs(dj);
      if (gain == 0.0) continue;
      d_[j] = dj;
      if (bland) {
        enter = j;
        break;
      }
      if (gain > best) {
        best = gain;
        enter = j;
      }
    }
    if (enter < 0) {
      if (phase1) return LpStatus::kInfeasible;
      // Confirm on a fresh factorisation before declaring optimality.
      if (updates_since_refactor_ > 0 && verify_attempts < 3) {
        ++verify_attempts;
        need_refactor_ = true;
        continue;
      }
      return LpStatus::kOptimal;
    }
    if (OutOfBudget()) return LpStatus::kIterationLimit;

    const double dir = d_[enter] < 0 ? 1.0 : -1.0;
    LoadColumn(enter, work_a_);
    Ftran(work_a_);
    // Basic i moves at rate -dir * alpha_i per unit step.
    const double flip = data_.upper[enter] - data_.lower[enter];
    auto limit_of = [&](int r, bool& to_upper) {
      double a = work_a_.val[r];
      to_upper = false;
      if (std::fabs(a) <= kPivotTol) return kInf;
      int j = head_[r];
      double rate = -dir * a;
      double lo = data_.lower[j], hi = data_.upper[j], v = x_[j];
      if (rate > 0) {
        if (v < lo - primal_tol_) return (lo - v) / rate;
        if (v <= hi + primal_tol_ && hi < kInf) {
          to_upper = true;
          return std::max(0.0, hi - v) / rate;
        }
      } else {
        if (v > hi + primal_tol_) {
          to_upper = true;
          return (hi - v) / rate;
        }
        if (v >= lo - primal_tol_ && lo > -kInf) return std::max(0.0, v - lo) / -rate;
      }
      return kInf;
    };
    double min_limit = kInf;
    for (int r : work_a_.nz) {
      bool up;
      min_limit = std::min(min_limit, limit_of(r, up));
    }
    int leave_pos = -1;
    bool leave_to_upper = false;
    double step = flip;
    if (min_limit < flip) {
      step = min_limit;
      double best_abs = 0.0;
      for (int r : work_a_.nz) {
        bool up;
        double lim = limit_of(r, up);
        if (lim > min_limit + 1e-12) continue;
        double a = std::fabs(work_a_.val[r]);
        bool take = leave_pos < 0 ||
                    (bland ? head_[r] < head_[leave_pos] : a > best_abs || (a == best_abs && r < leave_pos));
        if (take) {
          leave_pos = r;
          leave_to_upper = up;
          best_abs = a;
        }
      }
    }
    if (leave_pos < 0 && step == kInf) {
      return phase1 ? LpStatus::kNumericalFailure : LpStatus::kUnbounded;
    }
    ++iterations_;
    if (step <= 1e-11) {
      if (++degenerate > kDegenerateBeforeBland) bland = true;
    } else {
      degenerate = 0;
      bland = false;
    }
    for (int r : work_a_.nz) x_[head_[r]] += -dir * work_a_.val[r] * step;
    x_[enter] += dir * step;
    if (leave_pos < 0) {
      // Entering variable hits its opposite bound.
      state_[enter] = state_[enter] == VarState::kUpper ? VarState::kLower : VarState::kUpper;
      x_[enter] = NonbasicValue(enter);
      continue;
    }
    int leave = head_[leave_pos];
    state_[leave] = leave_to_upper ? VarState::kUpper : VarState::kLower;
    if (data_.lower[leave] == data_.upper[leave]) state_[leave] = VarState::kLower;
    x_[leave] = NonbasicValue(leave);
    state_[enter] = VarState::kBasic;
    head_[leave_pos] = enter;
    AddEta(leave_pos, work_a_);
    ++updates_since_refactor_;
    if (updates_since_refactor_ >= kRefactorEvery) {
      Refactor();
      ComputePrimal();
    }
  }
}

// Dual simplex from a dual feasible basis: the most infeasible basic variable
// leaves, Harris two-pass ratio test picks the entering column.
LpStatus LpEngine::Dual(bool duals_ready) {
  const int n = data_.n, m = data_.m;
  if (!duals_ready || need_refactor_ || need_primal_) {
    Prepare();
    ComputeDuals();
  }
  int verify_attempts = 0;
  bool fresh = true;
  while (true) {
    if (updates_since_refactor_ >= kRefactorEvery) {
      Refactor();
      ComputePrimal();
      ComputeDuals();
    }
    int r = -1;
    double worst = 0.0;
    for (int p = 0; p < m; ++p) {
      double inf = PrimalInfeasibility(head_[p]);
      if (inf > worst) {
        worst = inf;
        r = p;
      }
    }
    if (r < 0) {
      // Recompute from the factors before trusting the incremental values.
      if (!fresh && verify_attempts < 3) {
        ++verify_attempts;
        if (verify_attempts > 1) Refactor();
        ComputePrimal();
        ComputeDuals();
        fresh = true;
        continue;
      }
      if (!DualsFeasible()) return Primal();
      return LpStatus::kOptimal;
    }
    fresh = false;
    if (OutOfBudget()) return LpStatus::kIterationLimit;
    const int leave = head_[r];
    const bool increase = x_[leave] < data_.lower[leave];
    const double target = increase ? data_.lower[leave] : data_.upper[leave];

    // Row r of B^-1 N.
    work_b_.Clear();
    work_b_.Add(r, 1.0);
    Btran(work_b_);
    row_touched_.clear();
    for (int i : work_b_.nz) {
      double rho = work_b_.val[i];
      if (std::fabs(rho) <= kDropTol) continue;
      if (!row_mark_[n + i]) {
        row_mark_[n + i] = 1;
        row_touched_.push_back(n + i);
      }
      row_alpha_[n + i] += rho;
      for (int p = data_.rows.start[i]; p < data_.rows.start[i + 1]; ++p) {
        int j = data_.rows.index[p];
        if (!row_mark_[j]) {
          row_mark_[j] = 1;
          row_touched_.push_back(j);
        }
        row_alpha_[j] += rho * data_.rows.value[p];
      }
    }
    // Candidates: moving x_j in its free direction must push x_leave
    // toward the violated bound. x_leave = beta - sum alpha_j x_j.
    auto eligible = [&](int j, double a, double& dd) {
      if (state_[j] == VarState::kBasic || data_.lower[j] == data_.upper[j]) return false;
      if (std::fabs(a) <= kPivotTol) return false;
      double s = increase ? -a : a;  // s > 0: x_j should increase
      switch (state_[j]) {
        case VarState::kLower: if (s <= 0) return false; dd = std::max(d_[j], 0.0); return true;
        case VarState::kUpper: if (s >= 0) return false; dd = std::max(-d_[j], 0.0); return true;
        case VarState::kZero: dd = std::fabs(d_[j]); return true;
        default: return false;
      }
    };
    double theta_max = kInf;
    for (int j : row_touched_) {
      double dd;
      if (eligible(j, row_alpha_[j], dd)) theta_max = std::min(theta_max, (dd + dual_tol_) / std::fabs(row_alpha_[j]));
    }
    int enter = -1;
    double enter_abs = 0.0;
    for (int j : row_touched_) {
      double dd;
      if (!eligible(j, row_alpha_[j], dd)) continue;
      double a = std::fabs(row_alpha_[j]);
      if (dd / a <= theta_max && (a > enter_abs || (a == enter_abs && j < enter))) {
        enter = j;
        enter_abs = a;
      }
    }
    if (enter < 0) {
      ClearRow();
      return LpStatus::kInfeasible;
    }
    const double alpha_r = row_alpha_[enter];
    LoadColumn(enter, work_a_);
    Ftran(work_a_);
    double alpha_col = work_a_.val[r];
    if (std::fabs(alpha_col - alpha_r) > 1e-7 * (1.0 + std::fabs(alpha_r)) || std::fabs(alpha_col) <= kPivotTol) {
      ClearRow();
      if (updates_since_refactor_ == 0) return LpStatus::kNumericalFailure;
      Refactor();
      ComputePrimal();
      ComputeDuals();
      continue;
    }
    ++iterations_;
    // Dual update.
    double theta_d = d_[enter] / alpha_r;
    for (int j : row_touched_) {
      if (state_[j] != VarState::kBasic) d_[j] -= theta_d * row_alpha_[j];
    }
    d_[leave] = -theta_d;
    d_[enter] = 0.0;
    // Primal update.
    double delta = (x_[leave] - target) / alpha_col;
    for (int p : work_a_.nz) x_[head_[p]] -= work_a_.val[p] * delta;
    x_[enter] += delta;
    state_[leave] = (increase || data_.lower[leave] == data_.upper[leave]) ? VarState::kLower : VarState::kUpper;
    x_[leave] = target;
    state_[enter] = VarState::kBasic;
    head_[r] = enter;
    AddEta(r, work_a_);
    ++updates_since_refactor_;

    // Boxed nonbasics whose reduced cost drifted to the wrong sign are moved
    // to the opposite bound, which keeps the basis dual feasible. Only the
    // touched columns had their reduced cost changed.
    work_b_.Clear();
    bool flipped = false;
    for (int j : row_touched_) {
      VarState st = state_[j];
      if (st == VarState::kBasic || data_.lower[j] == -kInf || data_.upper[j] == kInf) continue;
      if (data_.lower[j] == data_.upper[j]) continue;
      double change = 0.0;
      if (st == VarState::kLower && d_[j] < -dual_tol_) {
        state_[j] = VarState::kUpper;
        change = data_.upper[j] - data_.lower[j];
      } else if (st == VarState::kUpper && d_[j] > dual_tol_) {
        state_[j] = VarState::kLower;
        change = data_.lower[j] - data_.upper[j];
      } else {
        continue;
      }
      flipped = true;
      x_[j] = NonbasicValue(j);
      if (j >= n) {
        work_b_.Add(j - n, change);
      } else {
        for (int p = data_.cols.start[j]; p < data_.cols.start[j + 1]; ++p) {
          work_b_.Add(data_.cols.index[p], data_.cols.value[p] * change);
        }
      }
    }
    ClearRow();
    if (flipped) {
      Ftran(work_b_);
      for (int p : work_b_.nz) x_[head_[p]] -= work_b_.val[p];
    }
  }
}

}  // namespace detail

LpResult LpRelax(const ModelIR& model, const SolveOptions& options) {
  detail::LpEngine engine(detail::LpData::FromModel(model), std::min(1e-9, options.lp_feas_tol));
  if (std::isfinite(options.time_limit)) {
    engine.set_deadline(detail::Clock::now() +
                        std::chrono::duration_cast<detail::Clock::duration>(
                            std::chrono::duration<double>(options.time_limit)));
  }
  engine.SlackBasis(false);
  LpResult result;
  result.status = engine.Primal();
  result.iterations = engine.iterations();
  if (result.status == LpStatus::kOptimal) {
    result.objective = engine.Objective();
    result.values = engine.Values();
    // Independent feasibility check of the returned point.
    for (const auto& c : model.constraints()) {
      double lhs = 0.0;
      for (const Term& t : c.terms) lhs += t.coef.ToDouble() * result.values[t.var];
      double rhs = c.rhs.ToDouble();
      double viol = c.sense == Sense::kLe ? lhs - rhs : c.sense == Sense::kGe ? rhs - lhs : std::fabs(lhs - rhs);
      if (viol > options.lp_feas_tol * (1.0 + std::fabs(rhs))) {
        result.status = LpStatus::kNumericalFailure;
        break;
      }
    }
  }
  return result;
}

}  // namespace twoscvrp
