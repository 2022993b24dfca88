#include "twoscvrp/baselines.h"

#include <algorithm>
#include <array>
#include <chrono>
#include <cmath>
#include <iomanip>
#include <sstream>

namespace twoscvrp {
namespace {

using Clock = std::chrono::steady_clock;

double Since(Clock::time_point start) { return std::chrono::duration<double>(Clock::now() - start).count(); }

// The time left for a later phase out of the method's budget.
SolveOptions Remaining(const SolveOptions& base, Clock::time_point start) {
  SolveOptions o = base;
  if (std::isfinite(o.time_limit)) o.time_limit = std::max(0.0, base.time_limit - Since(start));
  return o;
}

bool Proven(const SolveResult& r) { return r.status == SolveStatus::kOptimal; }

// Records a phase outcome; false when the phase gave no usable point.
bool Accept(CompositeResult& out, const SolveResult& r, const char* phase) {
  if (r.has_solution) return true;
  out.feasible = false;
  out.failed_phase = phase;
  out.message = std::string(phase) + (r.status == SolveStatus::kInfeasible ? " infeasible" : " found no solution");
  if (!r.message.empty()) out.message += ": " + r.message;
  return false;
}

void Finish(CompositeResult& out, const Instance& in, Clock::time_point start) {
  out.feasible = true;
  out.packing_cost = PackingCost(in, out.solution);
  out.routing_cost = RoutingCost(in, out.solution);
  out.total_cost = out.packing_cost + out.routing_cost;
  out.solution.total_cost = out.total_cost;
  out.wall_seconds = Since(start);
}

}  // namespace

const char* ToString(Method method) {
  switch (method) {
    case Method::kIntegrated: return "integrated";
    case Method::kBpThenVrp: return "bp_then_vrp";
    case Method::kVrpThenBp: return "vrp_then_bp";
  }
  return "?";
}

std::optional<Method> ParseMethod(const std::string& name) {
  for (Method m : {Method::kIntegrated, Method::kBpThenVrp, Method::kVrpThenBp})
    if (name == ToString(m)) return m;
  if (name == "bp_vrp") return Method::kBpThenVrp;
  if (name == "vrp_bp") return Method::kVrpThenBp;
  return std::nullopt;
}

CompositeResult SolveIntegrated(const Instance& in, const BaselineOptions& options) {
  const auto start = Clock::now();
  CompositeResult out;
  out.method = Method::kIntegrated;
  BuiltModel built = BuildFull(in, options.model);
  SolveResult r = SelectSolver(options.backend)(built.model, options.solve);
  out.phase1 = r;
  if (!Accept(out, r, "phase1")) {
    out.wall_seconds = Since(start);
    return out;
  }
  out.solution = Decode(built.index, r.values, in);
  out.proven = Proven(r);
  Finish(out, in, start);
  return out;
}

CompositeResult SolveBpThenVrp(const Instance& in, const BaselineOptions& options) {
  const auto start = Clock::now();
  const auto solve = SelectSolver(options.backend);
  CompositeResult out;
  out.method = Method::kBpThenVrp;

  BuiltModel packing = BuildPackingOnly(in, options.model);
  SolveResult r1 = solve(packing.model, options.solve);
  out.phase1 = r1;
  if (!Accept(out, r1, "phase1")) {
    out.wall_seconds = Since(start);
    return out;
  }
  Solution packed = Decode(packing.index, r1.values, in);

  // A truck calls where its pallets' boxes go; a truck without pallets stays home.
  const int K = in.num_trucks(), D = in.num_destinations();
  RoutingFix fix;
  fix.calling.assign(K, std::vector<bool>(D, false));
  fix.used.assign(K, false);
  for (int i = 0; i < in.num_boxes(); ++i) {
    int k = packed.pallet_to_truck[packed.box_to_pallet[i]];
    fix.calling[k][in.boxes[i].destination - 1] = true;
  }
  for (int j = 0; j < in.num_pallets(); ++j)
    if (packed.pallet_to_truck[j] >= 0) fix.used[packed.pallet_to_truck[j]] = true;

  BuiltModel routing = BuildRoutingOnly(in, fix, options.model);
  SolveResult r2 = solve(routing.model, Remaining(options.solve, start));
  out.phase2 = r2;
  if (!Accept(out, r2, "phase2")) {
    out.wall_seconds = Since(start);
    return out;
  }
  Solution routed = Decode(routing.index, r2.values, in);
  out.solution = packed;
  out.solution.routes = routed.routes;
  out.proven = Proven(r1) && Proven(r2);
  Finish(out, in, start);
  return out;
}

CompositeResult SolveVrpThenBp(const Instance& in, const BaselineOptions& options) {
  if (in.is_3d() && options.model.enable_3d) throw BuildError("vrp_then_bp applies to 1D instances only");
  CheckInstance(in);
  const auto start = Clock::now();
  const auto solve = SelectSolver(options.backend);
  CompositeResult out;
  out.method = Method::kVrpThenBp;
  const int I = in.num_boxes(), J = in.num_pallets(), D = in.num_destinations();

  std::vector<int64_t> group(D + 1, 0);
  for (const auto& b : in.boxes) group[b.destination] += b.volume;
  int64_t max_cap = 0;
  for (const auto& p : in.pallets) max_cap = std::max(max_cap, p.capacity);
  for (int d = 1; d <= D; ++d) {
    if (group[d] > max_cap) {
      out.failed_phase = "phase1";
      out.message = "boxes for " + in.travel.destinations[d] + " have volume " + std::to_string(group[d]) +
                    ", more than the largest pallet capacity " + std::to_string(max_cap);
      out.wall_seconds = Since(start);
      return out;
    }
  }

  // Phase 1: each destination group onto its own pallet, cheapest matching.
  ModelIR match(in.name.empty() ? "grouping" : in.name + "_grouping");
  std::vector<std::vector<VarId>> w(D + 1, std::vector<VarId>(J, -1));
  std::vector<Term> obj;
  for (int d = 1; d <= D; ++d) {
    if (group[d] == 0) continue;
    std::vector<Term> row;
    for (int j = 0; j < J; ++j) {
      if (group[d] > in.pallets[j].capacity) continue;
      w[d][j] = match.AddBinary("w_" + in.travel.destinations[d] + "_" + in.pallets[j].id);
      row.push_back({Rational(1), w[d][j]});
      obj.push_back({Rational(in.pallets[j].fix_cost), w[d][j]});
    }
    match.AddConstraint("group_" + in.travel.destinations[d], row, Sense::kEq, 1);
  }
  for (int j = 0; j < J; ++j) {
    std::vector<Term> row;
    for (int d = 1; d <= D; ++d)
      if (w[d][j] >= 0) row.push_back({Rational(1), w[d][j]});
    if (!row.empty()) match.AddConstraint("pallet_" + in.pallets[j].id, row, Sense::kLe, 1);
  }
  match.SetObjective(obj);
  SolveResult r1 = solve(match, options.solve);
  out.phase1 = r1;
  if (!Accept(out, r1, "phase1")) {
    if (r1.status == SolveStatus::kInfeasible) out.message = "phase1 infeasible: fewer fitting pallets than destination groups";
    out.wall_seconds = Since(start);
    return out;
  }
  std::vector<int> pallet_of_group(D + 1, -1);
  for (int d = 1; d <= D; ++d)
    for (int j = 0; j < J; ++j)
      if (w[d][j] >= 0 && r1.values[w[d][j]] == Rational(1)) pallet_of_group[d] = j;

  // Phase 2: the base model with every box pinned to its group's pallet.
  BuiltModel built = BuildBase1D(in, options.model);
  const auto& p0 = built.index["p0"];
  for (int i = 0; i < I; ++i) {
    const int target = pallet_of_group[in.boxes[i].destination];
    for (int j = 0; j < J; ++j) {
      Rational v(j == target ? 1 : 0);
      built.model.SetBounds(p0(i, j), v, v);
    }
  }
  SolveResult r2 = solve(built.model, Remaining(options.solve, start));
  out.phase2 = r2;
  if (!Accept(out, r2, "phase2")) {
    out.wall_seconds = Since(start);
    return out;
  }
  out.solution = Decode(built.index, r2.values, in);
  out.proven = Proven(r1) && Proven(r2);
  Finish(out, in, start);
  return out;
}

CompositeResult SolveMethod(Method method, const Instance& in, const BaselineOptions& options) {
  switch (method) {
    case Method::kIntegrated: return SolveIntegrated(in, options);
    case Method::kBpThenVrp: return SolveBpThenVrp(in, options);
    case Method::kVrpThenBp: return SolveVrpThenBp(in, options);
  }
  throw std::invalid_argument("unknown method");
}

Comparison Compare(const Instance& in, const std::vector<Method>& methods, const BaselineOptions& options) {
  Comparison c;
  c.instance = in.name;
  for (Method m : methods) {
    ComparisonRow row{m, {}, {}};
    row.result.method = m;
    try {
      row.result = SolveMethod(m, in, options);
    } catch (const std::exception& e) {
      row.error = e.what();
    }
    c.rows.push_back(std::move(row));
  }
  return c;
}

namespace {

std::string StatusOf(const ComparisonRow& row) {
  if (!row.error.empty()) return "error";
  if (!row.result.feasible) {
    const auto& last = row.result.phase2 ? row.result.phase2 : row.result.phase1;
    return last && last->status == SolveStatus::kLimitReached ? "limit" : "infeasible";
  }
  return row.result.proven ? "optimal" : "feasible";
}

std::string NoteOf(const ComparisonRow& row) { return row.error.empty() ? row.result.message : row.error; }

std::string Seconds(double s) {
  std::ostringstream os;
  os << std::fixed << std::setprecision(3) << s;
  return os.str();
}

std::string CsvField(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char ch : s) {
    if (ch == '"') out += '"';
    out += ch;
  }
  return out + "\"";
}

}  // namespace

std::string Comparison::ToCsv(bool header) const {
  std::ostringstream os;
  if (header) os << "instance,method,status,total_cost,packing_cost,routing_cost,seconds,note\n";
  for (const auto& row : rows) {
    const auto& r = row.result;
    bool has = row.error.empty() && r.feasible;
    os << CsvField(instance) << ',' << ToString(row.method) << ',' << StatusOf(row) << ','
       << (has ? r.total_cost.ToString() : "") << ',' << (has ? r.packing_cost.ToString() : "") << ','
       << (has ? r.routing_cost.ToString() : "") << ',' << Seconds(r.wall_seconds) << ',' << CsvField(NoteOf(row))
       << '\n';
  }
  return os.str();
}

std::string Comparison::ToText() const {
  std::vector<std::array<std::string, 7>> cells;
  cells.push_back({"method", "status", "total", "packing", "routing", "seconds", "note"});
  for (const auto& row : rows) {
    const auto& r = row.result;
    bool has = row.error.empty() && r.feasible;
    cells.push_back({ToString(row.method), StatusOf(row), has ? r.total_cost.ToString() : "-",
                     has ? r.packing_cost.ToString() : "-", has ? r.routing_cost.ToString() : "-",
                     Seconds(r.wall_seconds), NoteOf(row)});
  }
  std::array<size_t, 7> width{};
  for (const auto& line : cells)
    for (size_t c = 0; c < line.size(); ++c) width[c] = std::max(width[c], line[c].size());
  std::ostringstream os;
  os << "instance " << instance << '\n';
  for (const auto& line : cells) {
    for (size_t c = 0; c < line.size(); ++c) {
      // Numbers right-aligned, text left-aligned, no trailing padding.
      bool numeric = c >= 2 && c <= 5;
      if (c + 1 == line.size()) {
        os << line[c];
      } else {
        os << (numeric ? std::right : std::left) << std::setw(static_cast<int>(width[c])) << line[c] << "  ";
      }
    }
    os << '\n';
  }
  std::string text = os.str();
  // Strip spaces left before newlines when the note column is empty.
  std::string out;
  for (size_t p = 0; p < text.size(); ++p) {
    if (text[p] == ' ') {
      size_t q = p;
      while (q < text.size() && text[q] == ' ') ++q;
      if (q < text.size() && text[q] == '\n') {
        p = q - 1;
        continue;
      }
    }
    out += text[p];
  }
  return out;
}

}  // namespace twoscvrp
