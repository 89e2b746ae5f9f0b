#include <CLI11.hpp>

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <optional>
#include <string>
#include <vector>

#include "mvfp/fa_gss.hpp"
#include "mvfp/ffa_cd.hpp"
#include "mvfp/io.hpp"
#include "mvfp/selftest.hpp"

namespace fs = std::filesystem;
using namespace mvfp;

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitParse = 2;
constexpr int kExitRuntime = 3;

struct InstanceArgs {
  std::vector<std::string> aux;
  std::string blocks, nets, pl;
  bool normalize_terminals = false;
};

struct SolverArgs {
  std::vector<double> ratios{1.0};
  double gamma = 0.15;
  int np = 5;
  std::uint64_t seed = 1;
  int runs = 1;
  int max_generations = 500;
  int threads = 0;
  std::string csv, svg, out_pl;
  bool no_timing = false;

  // namespaced overrides
  double csa_q = 0.997;
  int csa_kmax = 50;
  int csa_stall = 30;
  double csa_tol = 1e-12;
  double dea_alpha0 = 0.2;
  double dea_lambda = 0.5;
  double dea_p0 = 0.85;
  double dea_inherit = 0.5;
  double dea_dtheta = 0.17453292519943295;
  double ffa_alpha = 1, ffa_lambda = 20, ffa_mu = 100, ffa_lambda0 = 1, ffa_mu0 = 10;
  int ffa_legal_kmax = 1000;
  double ffa_legal_step_floor = 10;
  double ffa_step_decay = 0.95;
  double ffa_initial_step = 0;
  double ffa_min_step = 0;
  double ffa_delta1 = 0.1;
  double ffa_delta2 = 1e-4;
  int ffa_stall_reinit = 5;
  int ffa_hpwl_stall = 10;

  // min-area extras
  double epsilon = 0.002;
  double gss_gamma_init = 0.15;
  double gss_gamma_cap = 2.0;
  int gss_trial_generations = 60;
  bool gss_warm_start = false;
};

void add_instance_options(CLI::App* cmd, InstanceArgs& args) {
  cmd->add_option("--aux", args.aux, "Bookshelf .aux file(s) naming the blocks/nets/pl trio");
  cmd->add_option("--blocks", args.blocks, "Bookshelf .blocks file");
  cmd->add_option("--nets", args.nets, "Bookshelf .nets file");
  cmd->add_option("--pl", args.pl, "Bookshelf .pl file with terminal coordinates");
  cmd->add_flag("--normalize-terminals", args.normalize_terminals,
                "Translate terminals so their bounding box starts at the origin");
}

void add_solver_options(CLI::App* cmd, SolverArgs& args, bool min_area) {
  cmd->add_option("--ratio", args.ratios, "Outline aspect ratio(s) R")->delimiter(',');
  if (!min_area)
    cmd->add_option("--gamma", args.gamma, "Whitespace ratio of the fixed outline");
  cmd->add_option("--np", args.np, "Population size");
  cmd->add_option("--seed", args.seed, "Master seed; run r uses seed + r");
  cmd->add_option("--runs", args.runs, "Independent runs per configuration")
      ->check(CLI::PositiveNumber);
  cmd->add_option("--max-generations", args.max_generations, "Generation budget per run");
  cmd->add_option("--threads", args.threads,
                  "Worker threads (0: MVFP_THREADS env or hardware)");
  cmd->add_option("--csv", args.csv, "Write the metrics table to this file");
  cmd->add_option("--svg", args.svg, "Render the best plan(s) to SVG");
  cmd->add_option("--out-pl", args.out_pl, "Write the best plan(s) in .pl format");
  cmd->add_flag("--no-timing", args.no_timing,
                "Leave the seconds column empty for byte-reproducible output");

  cmd->add_option("--csa.q", args.csa_q, "Step decay of the sub-gradient solver");
  cmd->add_option("--csa.kmax", args.csa_kmax, "Iterations of the global phase");
  cmd->add_option("--csa.stall", args.csa_stall, "Solver stall limit");
  cmd->add_option("--csa.tol", args.csa_tol, "Solver improvement tolerance");
  cmd->add_option("--dea.alpha0", args.dea_alpha0, "Exploitation intensity");
  cmd->add_option("--dea.lambda", args.dea_lambda, "Disturbance factor");
  cmd->add_option("--dea.p0", args.dea_p0, "Exploitation probability");
  cmd->add_option("--dea.inherit", args.dea_inherit, "Sampling inheritance rate");
  cmd->add_option("--dea.dtheta-max", args.dea_dtheta, "Rotation bound (radians)");
  cmd->add_option("--ffa.alpha", args.ffa_alpha, "Wirelength weight");
  cmd->add_option("--ffa.lambda", args.ffa_lambda, "Initial overlap weight");
  cmd->add_option("--ffa.mu", args.ffa_mu, "Initial outline weight");
  cmd->add_option("--ffa.lambda0", args.ffa_lambda0, "Legalization overlap weight");
  cmd->add_option("--ffa.mu0", args.ffa_mu0, "Legalization outline weight");
  cmd->add_option("--ffa.legal-kmax", args.ffa_legal_kmax, "Legalization solver budget");
  cmd->add_option("--ffa.legal-step-floor", args.ffa_legal_step_floor,
                  "Step floor of the legalization solver");
  cmd->add_option("--ffa.step-decay", args.ffa_step_decay, "Per-generation step decay");
  cmd->add_option("--ffa.initial-step", args.ffa_initial_step,
                  "Initial step control (0: half the outline extent)");
  cmd->add_option("--ffa.min-step", args.ffa_min_step,
                  "Step floor (0: 5% of the larger outline extent)");
  cmd->add_option("--ffa.delta1", args.ffa_delta1, "Overlap-ratio threshold");
  cmd->add_option("--ffa.delta2", args.ffa_delta2, "Outline-violation threshold");
  cmd->add_option("--ffa.stall-reinit", args.ffa_stall_reinit,
                  "Generations without improvement before re-sampling coordinates");
  cmd->add_option("--ffa.hpwl-stall", args.ffa_hpwl_stall,
                  "Legal-HPWL stall generations before stopping");

  if (min_area) {
    cmd->add_option("--epsilon", args.epsilon, "Golden-section bracket width at termination");
    cmd->add_option("--gss.gamma-init", args.gss_gamma_init, "First whitespace probe");
    cmd->add_option("--gss.gamma-cap", args.gss_gamma_cap, "Whitespace cap before giving up");
    cmd->add_option("--gss.trial-generations", args.gss_trial_generations,
                    "Inner-loop budget per golden-section trial");
    cmd->add_flag("--gss.warm-start", args.gss_warm_start,
                  "Carry populations across golden-section trials");
  }
}

FfaConfig make_ffa_config(const SolverArgs& args) {
  FfaConfig config;
  config.weights.wirelength = args.ffa_alpha;
  config.weights.overlap = args.ffa_lambda;
  config.weights.outline = args.ffa_mu;
  config.weights.legal_overlap = args.ffa_lambda0;
  config.weights.legal_outline = args.ffa_mu0;
  config.csa_iterations = args.csa_kmax;
  config.legal_csa_iterations = args.ffa_legal_kmax;
  config.legal_step_floor = args.ffa_legal_step_floor;
  config.generation_step_decay = args.ffa_step_decay;
  config.initial_step = args.ffa_initial_step;
  config.min_step = args.ffa_min_step;
  config.overlap_ratio_tol = args.ffa_delta1;
  config.outline_ratio_tol = args.ffa_delta2;
  config.max_generations = args.max_generations;
  config.stall_reinit = args.ffa_stall_reinit;
  config.hpwl_stall_stop = args.ffa_hpwl_stall;
  config.csa.step_decay = args.csa_q;
  config.csa.stall_limit = args.csa_stall;
  config.csa.improvement_tol = args.csa_tol;
  config.dea.population = args.np;
  config.dea.alpha0 = args.dea_alpha0;
  config.dea.lambda_disturb = args.dea_lambda;
  config.dea.p0 = args.dea_p0;
  config.dea.inherit_rate = args.dea_inherit;
  config.dea.max_rotation = args.dea_dtheta;
  config.threads = args.threads;
  return config;
}

struct NamedInstance {
  std::string name;
  ProblemInstance instance;
};

std::vector<NamedInstance> load_instances(const InstanceArgs& args) {
  std::vector<NamedInstance> out;
  for (const std::string& aux : args.aux) {
    NamedInstance item{fs::path(aux).stem().string(), load_instance_aux(aux, args.normalize_terminals)};
    out.push_back(std::move(item));
  }
  if (!args.blocks.empty() || !args.nets.empty() || !args.pl.empty()) {
    if (args.blocks.empty() || args.nets.empty() || args.pl.empty())
      throw CLI::ValidationError("--blocks/--nets/--pl must be given together");
    NamedInstance item{fs::path(args.blocks).stem().string(),
                       load_instance(args.blocks, args.nets, args.pl, args.normalize_terminals)};
    out.push_back(std::move(item));
  }
  if (out.empty())
    throw CLI::ValidationError("no instance given: use --aux or --blocks/--nets/--pl");
  return out;
}

std::string artifact_path(const std::string& base, const std::string& instance, double ratio,
                          bool unique) {
  if (unique) return base;
  const fs::path p(base);
  char suffix[64];
  std::snprintf(suffix, sizeof(suffix), ".%s.R%g", instance.c_str(), ratio);
  fs::path out = p.parent_path() / (p.stem().string() + suffix + p.extension().string());
  return out.string();
}

void emit_csv(const SolverArgs& args, const std::vector<RunRecord>& records) {
  const std::string text = write_metrics_csv(records);
  if (!args.csv.empty())
    write_text_file(args.csv, text);
  else
    std::cout << text;
}

int cmd_fixed_outline(const InstanceArgs& inst_args, const SolverArgs& args) {
  const std::vector<NamedInstance> instances = load_instances(inst_args);
  std::vector<RunRecord> records;
  const bool unique = instances.size() == 1 && args.ratios.size() == 1;

  for (const NamedInstance& named : instances) {
    const double area = named.instance.total_module_area();
    for (double ratio : args.ratios) {
      std::optional<FfaResult> best;
      for (int run = 0; run < args.runs; ++run) {
        const std::uint64_t run_seed = args.seed + static_cast<std::uint64_t>(run);
        FfaConfig config = make_ffa_config(args);
        config.outline = outline_from_ratio(area, ratio, args.gamma);
        const FfaResult result = ffa_cd(named.instance, config, run_seed);

        RunRecord record;
        record.instance = named.name;
        record.mode = "fixed-outline";
        record.aspect_ratio = ratio;
        record.gamma = args.gamma;
        record.seed = run_seed;
        record.legal = result.legal;
        record.hpwl = result.hpwl;
        record.area = bounding_area(named.instance, result.plan);
        if (!args.no_timing) record.seconds = result.seconds;
        records.push_back(std::move(record));

        if (result.legal && (!best || result.hpwl < best->hpwl)) best = result;
      }
      if (best) {
        if (!args.svg.empty()) {
          const OutlineSpec outline = outline_from_ratio(area, ratio, args.gamma);
          write_text_file(artifact_path(args.svg, named.name, ratio, unique),
                          render_svg(named.instance, best->plan, &outline));
        }
        if (!args.out_pl.empty())
          write_text_file(artifact_path(args.out_pl, named.name, ratio, unique),
                          write_pl(named.instance, best->plan));
      }
    }
  }
  emit_csv(args, records);
  return kExitOk;
}

int cmd_min_area(const InstanceArgs& inst_args, const SolverArgs& args) {
  const std::vector<NamedInstance> instances = load_instances(inst_args);
  if (args.ratios.size() != 1)
    throw CLI::ValidationError("min-area takes a single --ratio");
  std::vector<RunRecord> records;
  const bool unique = instances.size() == 1;

  for (const NamedInstance& named : instances) {
    std::vector<GssResult> results;
    for (int run = 0; run < args.runs; ++run) {
      const std::uint64_t run_seed = args.seed + static_cast<std::uint64_t>(run);
      GssConfig config;
      config.epsilon = args.epsilon;
      config.aspect_ratio = args.ratios.front();
      config.gamma_max_init = args.gss_gamma_init;
      config.gamma_cap = args.gss_gamma_cap;
      config.trial_generations = args.gss_trial_generations;
      config.warm_start = args.gss_warm_start;
      config.ffa = make_ffa_config(args);
      results.push_back(fa_gss(named.instance, config, run_seed));

      const GssResult& r = results.back();
      std::cout << named.name << " run " << run << ": "
                << (r.found ? "legal" : "no legal plan") << ", bracket [" << r.gamma_min << ", "
                << r.gamma_max << "], hpwl " << r.hpwl << ", area " << r.area << ", trials "
                << r.trials.size() << "\n";
      for (const GssTrial& trial : r.trials)
        std::cout << "  trial " << trial.index << ": gamma " << trial.gamma << " -> "
                  << (trial.feasible ? "feasible" : "infeasible") << " (hpwl " << trial.hpwl
                  << ", area " << trial.area << ", " << trial.generations << " generations)\n";
    }

    // Cost relative to the session minima over this instance's legal runs
    double min_hpwl = 0, min_area = 0;
    bool have_min = false;
    for (const GssResult& r : results) {
      if (!r.found) continue;
      if (!have_min || r.hpwl < min_hpwl) min_hpwl = r.hpwl;
      if (!have_min || r.area < min_area) min_area = r.area;
      have_min = true;
    }
    for (int run = 0; run < args.runs; ++run) {
      const GssResult& r = results[run];
      RunRecord record;
      record.instance = named.name;
      record.mode = "min-area";
      record.aspect_ratio = args.ratios.front();
      record.gamma = r.gamma_max;
      record.seed = args.seed + static_cast<std::uint64_t>(run);
      record.legal = r.found;
      record.hpwl = r.hpwl;
      record.area = r.area;
      if (r.found && min_hpwl > 0 && min_area > 0)
        record.cost = cost_function(r.hpwl, min_hpwl, r.area, min_area);
      if (!args.no_timing) record.seconds = r.seconds;
      records.push_back(std::move(record));
    }

    const GssResult* best = nullptr;
    for (const GssResult& r : results)
      if (r.found && (!best || r.area < best->area)) best = &r;
    if (best) {
      if (!args.svg.empty()) {
        const OutlineSpec outline = outline_from_ratio(named.instance.total_module_area(),
                                                       args.ratios.front(), best->gamma_max);
        write_text_file(artifact_path(args.svg, named.name, args.ratios.front(), unique),
                        render_svg(named.instance, best->plan, &outline));
      }
      if (!args.out_pl.empty())
        write_text_file(artifact_path(args.out_pl, named.name, args.ratios.front(), unique),
                        write_pl(named.instance, best->plan));
    }
  }
  emit_csv(args, records);
  return kExitOk;
}

int cmd_render(const InstanceArgs& inst_args, const std::string& in_pl, const std::string& svg,
               double gamma, double ratio, double outline_w, double outline_h) {
  const std::vector<NamedInstance> instances = load_instances(inst_args);
  if (instances.size() != 1) throw CLI::ValidationError("render takes exactly one instance");
  const NamedInstance& named = instances.front();

  const auto placement = parse_pl(read_text_file(in_pl), in_pl);
  const Floorplan plan = placement_to_floorplan(named.instance, placement);

  std::optional<OutlineSpec> outline;
  if (outline_w > 0 && outline_h > 0) {
    OutlineSpec spec;
    spec.width = outline_w;
    spec.height = outline_h;
    spec.aspect_ratio = outline_h / outline_w;
    outline = spec;
  } else if (gamma >= 0) {
    outline = outline_from_ratio(named.instance.total_module_area(), ratio, gamma);
  }
  write_text_file(svg, render_svg(named.instance, plan, outline ? &*outline : nullptr));
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Mixed-variable floorplanner: conjugate sub-gradient coordinates,"
               " distribution-evolution orientations"};
  // global flag, given before the subcommand; keys live under a
  // [fixed-outline] or [min-area] section and lose to explicit flags
  app.set_config("--config", "", "Read options from an INI/TOML file");
  app.require_subcommand(1);

  InstanceArgs fo_inst, ma_inst, rd_inst;
  SolverArgs fo_args, ma_args;

  CLI::App* fixed = app.add_subcommand(
      "fixed-outline", "Wirelength-optimized floorplanning inside a fixed outline");
  add_instance_options(fixed, fo_inst);
  add_solver_options(fixed, fo_args, false);

  CLI::App* minarea = app.add_subcommand(
      "min-area", "Golden-section whitespace minimization without a prescribed outline");
  add_instance_options(minarea, ma_inst);
  add_solver_options(minarea, ma_args, true);

  CLI::App* selftest = app.add_subcommand("selftest", "Run the built-in invariant suites");
  SelftestOptions st_options;
  selftest->add_option("--seed", st_options.seed, "Suite seed");
  selftest->add_option("--fd-points", st_options.fd_points, "Smooth points per instance size");
  selftest->add_option("--cases", st_options.legalizer_cases, "Legalizer oracle cases");
  selftest->add_option("--norm-ops", st_options.norm_operations, "Probability-column updates");
  selftest->add_flag("--corrupt-overlap", st_options.corrupt_overlap_reference,
                     "Test fixture: corrupt the overlap reference (must fail)");

  CLI::App* render = app.add_subcommand("render", "Render a .pl placement to SVG");
  add_instance_options(render, rd_inst);
  std::string rd_in_pl, rd_svg;
  double rd_gamma = -1, rd_ratio = 1, rd_w = 0, rd_h = 0;
  render->add_option("--in-pl", rd_in_pl, "Placement to render")->required();
  render->add_option("--svg", rd_svg, "Output SVG path")->required();
  render->add_option("--gamma", rd_gamma, "Draw the outline for this whitespace ratio");
  render->add_option("--ratio", rd_ratio, "Aspect ratio of the drawn outline");
  render->add_option("--outline-width", rd_w, "Explicit outline width");
  render->add_option("--outline-height", rd_h, "Explicit outline height");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (fixed->parsed()) return cmd_fixed_outline(fo_inst, fo_args);
    if (minarea->parsed()) return cmd_min_area(ma_inst, ma_args);
    if (selftest->parsed()) return run_selftest(st_options, std::cout) == 0 ? kExitOk : kExitRuntime;
    if (render->parsed())
      return cmd_render(rd_inst, rd_in_pl, rd_svg, rd_gamma, rd_ratio, rd_w, rd_h);
  } catch (const ParseError& e) {
    std::cerr << "parse error: " << e.what() << "\n";
    return kExitParse;
  } catch (const CLI::ValidationError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitRuntime;
  }
  return kExitUsage;
}
