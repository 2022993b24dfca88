// twoscvrp: generate instances, solve the integrated model or a two-phase
// baseline, compare methods, verify and render solutions, export models.
//
// Exit codes: 0 success, 1 usage or input error, 2 infeasible (or a
// solution that fails verification), 3 limit reached.

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <sstream>

#include "CLI11.hpp"

#include "twoscvrp/baselines.h"
#include "twoscvrp/instance.h"
#include "twoscvrp/model_build.h"
#include "twoscvrp/mps.h"
#include "twoscvrp/render.h"
#include "twoscvrp/solution.h"
#include "twoscvrp/solver.h"
#include "twoscvrp/verify.h"

namespace fs = std::filesystem;
using namespace twoscvrp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitInfeasible = 2;
constexpr int kExitLimit = 3;

struct InstanceSource {
  std::string path;
  std::string builtin;
  std::string preset;
  uint64_t seed = 1;

  void Attach(CLI::App* app) {
    auto* p = app->add_option("-i,--instance", path, "Instance JSON file");
    auto* b = app->add_option("--builtin", builtin, "Built-in instance (real)");
    auto* g = app->add_option("--preset", preset, "Generate from a named preset (ins-1 ... ins-9, ins-large)");
    app->add_option("--seed", seed, "Seed for --preset")->capture_default_str();
    p->excludes(b)->excludes(g);
    b->excludes(g);
  }

  Instance Load() const {
    int given = !path.empty() + !builtin.empty() + !preset.empty();
    if (given != 1) throw CLI::ValidationError("instance", "give exactly one of --instance, --builtin, --preset");
    if (!path.empty()) return LoadInstance(path);
    if (!builtin.empty()) {
      if (builtin != "real") throw CLI::ValidationError("--builtin", "unknown built-in '" + builtin + "'");
      return BuiltinRealInstance();
    }
    auto spec = PresetSpec(preset);
    if (!spec) throw CLI::ValidationError("--preset", "unknown preset '" + preset + "'");
    spec->seed = seed;
    spec->name = preset + "-s" + std::to_string(seed);
    return Generate(*spec);
  }
};

struct ModelFlags {
  std::string stacking = "literal";
  bool exact_z = false;
  bool no_3d = false;

  void Attach(CLI::App* app) {
    app->add_option("--stacking", stacking, "In-pallet stacking rule: literal | delivery-order")
        ->check(CLI::IsMember({"literal", "delivery-order"}))
        ->capture_default_str();
    app->add_flag("--exact-z", exact_z, "Add the epsilon companions of the z/y separators");
    app->add_flag("--no-3d", no_3d, "Ignore dimensions and solve the 1D model");
  }

  ModelConfig Config() const {
    ModelConfig c;
    c.stacking = stacking == "literal" ? StackingRule::kLiteral : StackingRule::kDeliveryOrder;
    c.faithful_z = !exact_z;
    c.enable_3d = !no_3d;
    return c;
  }
};

struct SolveFlags {
  double time_limit = 0;
  int64_t node_limit = 0;
  std::string strategy = "dfs";
  double int_tol = 1e-6;
  double feas_tol = 1e-7;
  double log_interval = 0;
  std::string backend;

  void Attach(CLI::App* app) {
    app->add_option("--time-limit", time_limit, "Seconds (0 = none)");
    app->add_option("--node-limit", node_limit, "Branch-and-bound nodes (0 = none)");
    app->add_option("--strategy", strategy, "Node selection: dfs | best")
        ->check(CLI::IsMember({"dfs", "best"}))
        ->capture_default_str();
    app->add_option("--int-tol", int_tol)->capture_default_str();
    app->add_option("--feas-tol", feas_tol)->capture_default_str();
    app->add_option("--log-interval", log_interval, "Progress lines on stderr every N seconds");
    app->add_option("--backend", backend, "External MILP command: <cmd> <model.mps> <solution.out>")
        ->envname("TWOSCVRP_BACKEND");
  }

  SolveOptions Options() const {
    SolveOptions o;
    if (time_limit > 0) o.time_limit = time_limit;
    if (node_limit > 0) o.node_limit = node_limit;
    o.strategy = strategy == "best" ? SearchStrategy::kBestBound : SearchStrategy::kDepthFirst;
    o.int_tol = int_tol;
    o.lp_feas_tol = feas_tol;
    o.log_interval = log_interval;
    return o;
  }
};

std::string ReadFile(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot read " + path);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void WriteFile(const fs::path& path, const std::string& text) {
  if (path.has_parent_path()) fs::create_directories(path.parent_path());
  std::ofstream out(path);
  out << text;
  if (!out) throw std::runtime_error("cannot write " + path.string());
}

void Emit(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
  } else {
    WriteFile(path, text);
  }
}

int ExitFor(const CompositeResult& r) {
  if (!r.feasible) {
    const auto& last = r.phase2 ? r.phase2 : r.phase1;
    if (last && last->status == SolveStatus::kLimitReached) return kExitLimit;
    return kExitInfeasible;
  }
  return r.proven ? kExitOk : kExitLimit;
}

void Summary(const Instance& in, const CompositeResult& r) {
  std::cerr << in.name << ' ' << ToString(r.method) << ": ";
  if (!r.feasible) {
    std::cerr << "no solution (" << r.message << ")\n";
    return;
  }
  std::cerr << (r.proven ? "optimal" : "feasible") << " cost " << r.total_cost.ToString() << " (packing "
            << r.packing_cost.ToString() << ", routing " << r.routing_cost.ToString() << ")";
  int64_t nodes = 0;
  for (const auto& p : {r.phase1, r.phase2})
    if (p) nodes += p->stats.nodes;
  std::cerr << ", nodes " << nodes << ", " << r.wall_seconds << " s\n";
  if (r.method == Method::kIntegrated && r.phase1 && !r.proven) {
    std::cerr << "best bound " << r.phase1->best_bound.ToString() << '\n';
  }
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Two-stage capacitated vehicle routing with pallets: models, solvers, baselines"};
  app.require_subcommand(1);
  app.set_config("--config", "", "TOML/INI file supplying option values, sections per subcommand");

  // gen
  auto* gen = app.add_subcommand("gen", "Write a generated instance");
  std::string gen_preset = "ins-1", gen_out, gen_builtin;
  uint64_t gen_seed = 1;
  int gen_boxes = 0, gen_pallets = 0, gen_trucks = 0, gen_dests = 0;
  bool list_presets = false;
  gen->add_option("--preset", gen_preset)->capture_default_str();
  gen->add_option("--seed", gen_seed)->capture_default_str();
  gen->add_option("--boxes", gen_boxes, "Override the preset's box count");
  gen->add_option("--pallets", gen_pallets);
  gen->add_option("--trucks", gen_trucks);
  gen->add_option("--destinations", gen_dests);
  gen->add_option("-o,--output", gen_out, "Output file (default stdout)");
  gen->add_option("--builtin", gen_builtin, "Write a built-in instance instead (real)");
  gen->add_flag("--list", list_presets, "List preset names and exit");

  // solve
  auto* solve = app.add_subcommand("solve", "Solve the integrated model");
  InstanceSource solve_src;
  ModelFlags solve_model;
  SolveFlags solve_flags;
  std::string solve_out;
  solve_src.Attach(solve);
  solve_model.Attach(solve);
  solve_flags.Attach(solve);
  solve->add_option("-o,--output", solve_out, "Solution JSON (default stdout)");

  // baseline
  auto* baseline = app.add_subcommand("baseline", "Solve a two-phase method");
  InstanceSource base_src;
  ModelFlags base_model;
  SolveFlags base_flags;
  std::string base_method, base_out;
  base_src.Attach(baseline);
  base_model.Attach(baseline);
  base_flags.Attach(baseline);
  baseline->add_option("-m,--method", base_method, "bp_then_vrp | vrp_then_bp")->required();
  baseline->add_option("-o,--output", base_out, "Solution JSON (default stdout)");

  // compare
  auto* compare = app.add_subcommand("compare", "Run several methods and tabulate cost and time");
  InstanceSource cmp_src;
  ModelFlags cmp_model;
  SolveFlags cmp_flags;
  std::vector<std::string> cmp_methods{"integrated", "bp_then_vrp", "vrp_then_bp"};
  std::string cmp_csv;
  cmp_src.Attach(compare);
  cmp_model.Attach(compare);
  cmp_flags.Attach(compare);
  compare->add_option("--methods", cmp_methods, "Comma-separated methods")->delimiter(',')->capture_default_str();
  compare->add_option("--csv", cmp_csv, "Also write the CSV table here ('-' for stdout instead of the text table)");

  // verify
  auto* verify = app.add_subcommand("verify", "Check a solution file against an instance");
  InstanceSource ver_src;
  ModelFlags ver_model;
  std::string ver_solution, ver_out;
  bool ver_no_order = false;
  ver_src.Attach(verify);
  ver_model.Attach(verify);
  verify->add_option("-s,--solution", ver_solution, "Solution JSON")->required();
  verify->add_flag("--no-order", ver_no_order, "Skip delivery-order rules (two-phase packings)");
  verify->add_option("-o,--output", ver_out, "Report JSON (default stdout)");

  // export
  auto* exp = app.add_subcommand("export", "Write a model as MPS plus its variable index");
  InstanceSource exp_src;
  ModelFlags exp_model;
  std::string exp_kind = "full", exp_mps, exp_index, exp_lp;
  exp_src.Attach(exp);
  exp_model.Attach(exp);
  exp->add_option("--model", exp_kind, "base | full | packing")
      ->check(CLI::IsMember({"base", "full", "packing"}))
      ->capture_default_str();
  exp->add_option("--mps", exp_mps, "MPS output")->required();
  exp->add_option("--index", exp_index, "Index sidecar JSON (default <mps>.index.json)");
  exp->add_option("--lp", exp_lp, "Also write CPLEX LP format here");

  // render
  auto* render = app.add_subcommand("render", "Draw a solution as SVG files");
  InstanceSource ren_src;
  std::string ren_solution, ren_dir = ".";
  double ren_scale = 24;
  ren_src.Attach(render);
  render->add_option("-s,--solution", ren_solution, "Solution JSON")->required();
  render->add_option("-d,--dir", ren_dir, "Output directory")->capture_default_str();
  render->add_option("--scale", ren_scale, "Pixels per unit length")->capture_default_str();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*gen) {
      if (list_presets) {
        for (const auto& n : PresetNames()) std::cout << n << '\n';
        return kExitOk;
      }
      if (!gen_builtin.empty()) {
        if (gen_builtin != "real") throw CLI::ValidationError("--builtin", "unknown built-in '" + gen_builtin + "'");
        Emit(gen_out, InstanceToJson(BuiltinRealInstance()));
        return kExitOk;
      }
      auto spec = PresetSpec(gen_preset);
      if (!spec) throw CLI::ValidationError("--preset", "unknown preset '" + gen_preset + "'");
      spec->seed = gen_seed;
      spec->name = gen_preset + "-s" + std::to_string(gen_seed);
      if (gen_boxes > 0) spec->boxes = gen_boxes;
      if (gen_pallets > 0) spec->pallets = gen_pallets;
      if (gen_trucks > 0) spec->trucks = gen_trucks;
      if (gen_dests > 0) spec->destinations = gen_dests;
      Emit(gen_out, InstanceToJson(Generate(*spec)));
      return kExitOk;
    }
    if (*solve || *baseline) {
      const bool integrated = solve->parsed();
      const auto& src = integrated ? solve_src : base_src;
      const auto& model = integrated ? solve_model : base_model;
      const auto& flags = integrated ? solve_flags : base_flags;
      Method method = Method::kIntegrated;
      if (!integrated) {
        auto m = ParseMethod(base_method);
        if (!m || *m == Method::kIntegrated) throw CLI::ValidationError("--method", "unknown method '" + base_method + "'");
        method = *m;
      }
      Instance in = src.Load();
      BaselineOptions opts{model.Config(), flags.Options(), flags.backend};
      CompositeResult r = SolveMethod(method, in, opts);
      Summary(in, r);
      if (r.feasible) Emit(integrated ? solve_out : base_out, SolutionToJson(in, r.solution));
      return ExitFor(r);
    }
    if (*compare) {
      Instance in = cmp_src.Load();
      std::vector<Method> methods;
      for (const auto& name : cmp_methods) {
        auto m = ParseMethod(name);
        if (!m) throw CLI::ValidationError("--methods", "unknown method '" + name + "'");
        methods.push_back(*m);
      }
      BaselineOptions opts{cmp_model.Config(), cmp_flags.Options(), cmp_flags.backend};
      Comparison c = Compare(in, methods, opts);
      if (cmp_csv == "-") {
        std::cout << c.ToCsv();
      } else {
        std::cout << c.ToText();
        if (!cmp_csv.empty()) WriteFile(cmp_csv, c.ToCsv());
      }
      return kExitOk;
    }
    if (*verify) {
      Instance in = ver_src.Load();
      Solution s = SolutionFromJson(in, ReadFile(ver_solution));
      VerifyConfig config = VerifyConfig::From(ver_model.Config());
      config.check_delivery_order = !ver_no_order;
      VerifyReport report = Verify(in, s, config);
      Emit(ver_out, report.ToJson());
      return report.ok() ? kExitOk : kExitInfeasible;
    }
    if (*exp) {
      Instance in = exp_src.Load();
      ModelConfig config = exp_model.Config();
      BuiltModel built = exp_kind == "base"      ? BuildBase1D(in, config)
                         : exp_kind == "packing" ? BuildPackingOnly(in, config)
                                                 : BuildFull(in, config);
      WriteFile(exp_mps, ExportMps(built.model));
      WriteFile(exp_index.empty() ? exp_mps + ".index.json" : exp_index, built.index.ToJson());
      if (!exp_lp.empty()) WriteFile(exp_lp, ExportLp(built.model));
      std::cerr << built.model.num_vars() << " variables, " << built.model.num_constraints() << " constraints\n";
      return kExitOk;
    }
    if (*render) {
      Instance in = ren_src.Load();
      Solution s = SolutionFromJson(in, ReadFile(ren_solution));
      RenderOptions opt;
      opt.scale = ren_scale;
      for (const auto& f : RenderSolution(in, s, opt)) {
        fs::path p = fs::path(ren_dir) / f.name;
        WriteFile(p, f.svg);
        std::cout << p.string() << '\n';
      }
      return kExitOk;
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
