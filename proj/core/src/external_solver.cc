#include <sys/wait.h>
#include <unistd.h>

#include <algorithm>
#include <cerrno>
#include <chrono>
#include <cmath>
#include <cstdlib>
#include <cstring>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <unordered_map>

#include "twoscvrp/mps.h"
#include "twoscvrp/solver.h"

namespace twoscvrp {
namespace {

namespace fs = std::filesystem;

std::string ShellQuote(const std::string& s) {
  std::string out = "'";
  for (char c : s) {
    if (c == '\'') {
      out += "'\\''";
    } else {
      out += c;
    }
  }
  return out + "'";
}

class ScratchDir {
 public:
  ScratchDir() {
    std::string tmpl = (fs::temp_directory_path() / "twoscvrp-XXXXXX").string();
    if (!mkdtemp(tmpl.data())) throw ExternalSolverError(std::string("mkdtemp: ") + std::strerror(errno));
    path_ = tmpl;
  }
  ~ScratchDir() {
    std::error_code ec;
    fs::remove_all(path_, ec);
  }
  const fs::path& path() const { return path_; }

 private:
  fs::path path_;
};

// Runs the command through /bin/sh and returns its exit code.
int Run(const std::string& command, const fs::path& mps, const fs::path& out, double time_limit) {
  std::string line = command + " " + ShellQuote(mps.string()) + " " + ShellQuote(out.string());
  pid_t pid = fork();
  if (pid < 0) throw ExternalSolverError(std::string("fork: ") + std::strerror(errno));
  if (pid == 0) {
    if (std::isfinite(time_limit)) {
      setenv("TWOSCVRP_TIME_LIMIT", std::to_string(time_limit).c_str(), 1);
    }
    execl("/bin/sh", "sh", "-c", line.c_str(), static_cast<char*>(nullptr));
    _exit(127);
  }
  int status = 0;
  while (waitpid(pid, &status, 0) < 0) {
    if (errno != EINTR) throw ExternalSolverError(std::string("waitpid: ") + std::strerror(errno));
  }
  if (WIFSIGNALED(status)) {
    throw ExternalSolverError("backend killed by signal " + std::to_string(WTERMSIG(status)));
  }
  return WEXITSTATUS(status);
}

Rational ParseValue(const std::string& text) {
  if (auto r = Rational::Parse(text)) return *r;
  char* end = nullptr;
  double v = std::strtod(text.c_str(), &end);
  if (end == text.c_str() || *end != '\0' || !std::isfinite(v)) {
    throw ExternalSolverError("unparsable value '" + text + "'");
  }
  return Rational::FromDouble(v);
}

}  // namespace

SolveResult SolveExternal(const ModelIR& model, const std::string& command, const SolveOptions& options) {
  if (command.empty()) throw ExternalSolverError("no backend command given");
  const auto start = std::chrono::steady_clock::now();
  ScratchDir dir;
  const fs::path mps = dir.path() / "model.mps";
  const fs::path out = dir.path() / "solution.out";
  {
    std::ofstream f(mps);
    f << ExportMps(model);
    if (!f) throw ExternalSolverError("cannot write " + mps.string());
  }
  int code = Run(command, mps, out, options.time_limit);

  SolveResult result;
  auto finish = [&] {
    result.stats.wall_seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  };
  if (code == 2) {
    result.status = SolveStatus::kInfeasible;
    result.message = "backend reports infeasible";
    finish();
    return result;
  }
  if (code == 4) {
    result.status = SolveStatus::kLimitReached;
    result.message = "backend stopped at a limit without a solution";
    finish();
    return result;
  }
  if (code == 126 || code == 127) {
    throw ExternalSolverError("cannot spawn backend '" + command + "' (exit " + std::to_string(code) + ")");
  }
  if (code != 0 && code != 3) {
    throw ExternalSolverError("backend failed with exit code " + std::to_string(code));
  }

  std::ifstream in(out);
  if (!in) throw ExternalSolverError("backend wrote no solution file");
  std::unordered_map<std::string, VarId> by_name;
  for (VarId j = 0; j < model.num_vars(); ++j) by_name[model.var(j).name] = j;
  std::vector<Rational> values(model.num_vars(), Rational(0));
  std::optional<Rational> bound;
  std::string line;
  int line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    std::istringstream fields(line);
    std::string name, value, extra;
    if (!(fields >> name)) continue;
    if (name[0] == '#') {
      // "# bound <value>" optionally reports the backend's dual bound.
      std::string key;
      if (fields >> key >> value && key == "bound") bound = ParseValue(value);
      continue;
    }
    if (!(fields >> value) || (fields >> extra)) {
      throw ExternalSolverError("solution line " + std::to_string(line_no) + ": expected '<name> <value>'");
    }
    auto it = by_name.find(name);
    if (it == by_name.end()) {
      throw ExternalSolverError("solution line " + std::to_string(line_no) + ": unknown variable " + name);
    }
    values[it->second] = ParseValue(value);
  }
  std::string why = CheckPoint(model, values, options.lp_feas_tol, options.int_tol);
  if (!why.empty()) throw ExternalSolverError("backend solution rejected: " + why);
  // Floating-point backends leave noise such as 3.0000000000000009. Round
  // integers, snap continuous values to nearby small-denominator rationals,
  // and keep the cleaned point only if it still satisfies the model.
  std::vector<Rational> rounded = values, snapped;
  for (VarId j = 0; j < model.num_vars(); ++j) {
    if (model.var(j).is_integral()) rounded[j] = Rational(static_cast<int64_t>(std::llround(values[j].ToDouble())));
  }
  snapped = rounded;
  for (VarId j = 0; j < model.num_vars(); ++j) {
    if (model.var(j).is_integral()) continue;
    double v = values[j].ToDouble();
    Rational r = Rational::FromDouble(v, 1000);
    if (std::fabs(r.ToDouble() - v) <= 1e-9 * std::max(1.0, std::fabs(v))) snapped[j] = r;
  }
  if (CheckPoint(model, snapped, options.lp_feas_tol, options.int_tol).empty()) {
    values = std::move(snapped);
  } else if (CheckPoint(model, rounded, options.lp_feas_tol, options.int_tol).empty()) {
    values = std::move(rounded);
  }

  result.has_solution = true;
  result.values = std::move(values);
  result.objective = model.EvaluateObjective(result.values);
  if (code == 0) {
    result.status = SolveStatus::kOptimal;
    result.best_bound = result.objective;
  } else {
    result.status = SolveStatus::kLimitReached;
    result.best_bound = bound && *bound < result.objective ? *bound : result.objective;
    if (!bound) result.message = "backend stopped at a limit without a bound";
  }
  result.stats.nodes = 0;
  finish();
  return result;
}

MilpSolver SelectSolver(const std::string& backend_command) {
  if (backend_command.empty()) return [](const ModelIR& m, const SolveOptions& o) { return SolveBnb(m, o); };
  return [backend_command](const ModelIR& m, const SolveOptions& o) { return SolveExternal(m, backend_command, o); };
}

}  // namespace twoscvrp
