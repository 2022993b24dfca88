// Bounded revised simplex shared by LpRelax and the branch-and-bound.
// Not installed.
#ifndef TWOSCVRP_SRC_LP_ENGINE_H_
#define TWOSCVRP_SRC_LP_ENGINE_H_

#include <chrono>
#include <cstdint>
#include <vector>

#include "twoscvrp/milp.h"
#include "twoscvrp/solver.h"

namespace twoscvrp::detail {

using Clock = std::chrono::steady_clock;

// Column-compressed or row-compressed, depending on use.
struct SparseMatrix {
  std::vector<int> start;
  std::vector<int> index;
  std::vector<double> value;
};

// min c.x  s.t.  A x + s = 0,  l <= (x, s) <= u.
// Row i of the model becomes the logical s_i = -a_i.x with bounds derived
// from its sense and rhs, so logical columns are unit vectors.
struct LpData {
  int n = 0;  // structurals
  int m = 0;  // rows
  std::vector<double> cost;          // n
  std::vector<double> lower, upper;  // n + m
  SparseMatrix cols;                 // n columns
  SparseMatrix rows;                 // m rows

  static LpData FromModel(const ModelIR& model);
};

// Dense values with a list of touched positions.
struct WorkVector {
  std::vector<double> val;
  std::vector<int> nz;
  std::vector<char> mark;

  void Resize(int m);
  void Clear();
  void Add(int i, double v) {
    if (!mark[i]) {
      mark[i] = 1;
      nz.push_back(i);
    }
    val[i] += v;
  }
};

enum class VarState : int8_t { kBasic, kLower, kUpper, kZero };

class LpEngine {
 public:
  LpEngine(LpData data, double primal_tol = 1e-9, double dual_tol = 1e-9);

  const LpData& data() const { return data_; }

  // Structurals at a finite bound; with prefer_dual, a negative cost puts a
  // boxed variable at its upper bound so the start is dual feasible.
  void SlackBasis(bool prefer_dual);
  std::vector<VarState> GetBasis() const { return state_; }
  void SetBasis(const std::vector<VarState>& state);

  void SetBounds(int j, double lo, double hi);
  double lower(int j) const { return data_.lower[j]; }
  double upper(int j) const { return data_.upper[j]; }

  void set_deadline(Clock::time_point deadline) { deadline_ = deadline; }
  void set_iteration_limit(int64_t limit) { iteration_limit_ = limit; }

  LpStatus Primal();
  LpStatus Dual(bool duals_ready = false);
  // Dual when the current basis is dual feasible, primal otherwise.
  LpStatus Solve();

  bool IsDualFeasible();
  bool DualsFeasible() const;
  double Objective() const;
  std::vector<double> Values() const;
  int64_t iterations() const { return iterations_; }

 private:
  void Refactor();
  void ComputePrimal();
  void ComputeDuals();
  void Ftran(WorkVector& v) const;
  void Btran(WorkVector& v) const;
  void LoadColumn(int j, WorkVector& v) const;
  void AddEta(int row, const WorkVector& alpha);
  double NonbasicValue(int j) const;
  bool Prepare();
  bool OutOfBudget();
  double PrimalInfeasibility(int j) const;
  void ClearRow();

  LpData data_;
  double primal_tol_;
  double dual_tol_;
  int total_ = 0;

  std::vector<VarState> state_;
  std::vector<int> head_;  // head_[r] = variable basic in position r
  std::vector<double> x_;
  std::vector<double> d_;  // reduced costs, valid for nonbasics after ComputeDuals

  // Product-form inverse: each eta records a pivot row, the pivot value and
  // the remaining entries of the transformed entering column.
  std::vector<int> eta_row_;
  std::vector<double> eta_pivot_;
  std::vector<int> eta_start_{0};
  std::vector<int> eta_index_;
  std::vector<double> eta_value_;
  int updates_since_refactor_ = 0;

  bool need_refactor_ = true;
  bool need_primal_ = true;

  WorkVector work_a_, work_b_;
  std::vector<double> row_alpha_;
  std::vector<char> row_mark_;
  std::vector<int> row_touched_;

  Clock::time_point deadline_ = Clock::time_point::max();
  int64_t iteration_limit_ = INT64_MAX;
  int64_t iterations_ = 0;
};

}  // namespace twoscvrp::detail

#endif  // TWOSCVRP_SRC_LP_ENGINE_H_
