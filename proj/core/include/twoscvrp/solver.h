#ifndef TWOSCVRP_SOLVER_H_
#define TWOSCVRP_SOLVER_H_

#include <cstdint>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>
#include <vector>

#include "twoscvrp/milp.h"
#include "twoscvrp/rational.h"

namespace twoscvrp {

enum class SearchStrategy { kDepthFirst, kBestBound };

struct SolveOptions {
  double time_limit = std::numeric_limits<double>::infinity();  // seconds
  Rational abs_gap = Rational(0);
  double int_tol = 1e-6;
  double lp_feas_tol = 1e-7;
  int64_t node_limit = std::numeric_limits<int64_t>::max();
  SearchStrategy strategy = SearchStrategy::kDepthFirst;
  // Progress lines on stderr every this many seconds (0 = quiet).
  double log_interval = 0;
};

enum class SolveStatus { kOptimal, kFeasible, kInfeasible, kLimitReached };
const char* ToString(SolveStatus status);

struct SolveStats {
  int64_t nodes = 0;
  int64_t simplex_iterations = 0;
  double wall_seconds = 0;
};

struct SolveResult {
  SolveStatus status = SolveStatus::kInfeasible;
  bool has_solution = false;
  Rational objective;
  Rational best_bound;
  std::vector<Rational> values;  // by VarId, empty without a solution
  SolveStats stats;
  std::string message;
};

enum class LpStatus { kOptimal, kInfeasible, kUnbounded, kIterationLimit, kNumericalFailure };
const char* ToString(LpStatus status);

struct LpResult {
  LpStatus status = LpStatus::kNumericalFailure;
  double objective = 0;
  std::vector<double> values;
  int64_t iterations = 0;
};

// Continuous relaxation by bounded primal simplex (Dantzig pricing, Bland's
// rule after a run of degenerate pivots).
LpResult LpRelax(const ModelIR& model, const SolveOptions& options = {});

// Branch-and-bound: most fractional variable (lowest id on ties), floor child
// first, dual simplex warm starts from the parent basis.
SolveResult SolveBnb(const ModelIR& model, const SolveOptions& options = {});

class ExternalSolverError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

// Runs `<command> <model.mps> <solution.out>` in a scratch directory.
// Exit 0: solved, 2: infeasible, 3: stopped at a limit with a solution,
// 4: stopped at a limit without one.
// The returned point is re-checked against the model; the objective is
// recomputed, never read from the backend.
SolveResult SolveExternal(const ModelIR& model, const std::string& command,
                          const SolveOptions& options = {});

using MilpSolver = std::function<SolveResult(const ModelIR&, const SolveOptions&)>;

// SolveBnb for an empty command, otherwise SolveExternal with it.
MilpSolver SelectSolver(const std::string& backend_command);

// Snaps near-integral values, then checks bounds, integrality and rows within
// tolerance. Returns a description of the first failure, or "" when valid.
std::string CheckPoint(const ModelIR& model, const std::vector<Rational>& values,
                       double feas_tol, double int_tol);

}  // namespace twoscvrp

#endif  // TWOSCVRP_SOLVER_H_
