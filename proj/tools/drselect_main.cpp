// drselect: two-stage variable selection + doubly robust ACE estimation.
//
//   drselect estimate --input data.csv --outcome Y --treatment A [...]
//   drselect select   --input data.csv [...]
//   drselect simulate --scenario 2 --setting c --reps 200 --n 2000 [...]
//   drselect dgp emit --scenario 1 --setting a --n 5000 --seed 7 --out d.csv

#include <CLI11.hpp>
#include <cstdio>
#include <iostream>

#include "drselect/run.hpp"

namespace {

using namespace drselect;

Strategy parse_strategy(const std::string& s) {
  if (s == "union") return Strategy::Union;
  if (s == "intersection") return Strategy::Intersection;
  if (s == "outcome") return Strategy::Outcome;
  throw SchemaError("unknown strategy: " + s);
}

Setting parse_setting(const std::string& s) {
  if (s == "a") return Setting::A;
  if (s == "b") return Setting::B;
  if (s == "c") return Setting::C;
  if (s == "d") return Setting::D;
  throw SchemaError("unknown setting: " + s);
}

void add_common_estimate_flags(CLI::App* cmd, RunConfig& cfg,
                               std::string& strategy, std::string& profile,
                               std::vector<double>& clip) {
  cmd->add_option("--input", cfg.input_path, "Input CSV path")->required();
  cmd->add_option("--outcome", cfg.outcome_col, "Outcome column name");
  cmd->add_option("--treatment", cfg.treatment_col, "Treatment column name");
  cmd->add_option("--covariates", cfg.covariate_cols,
                  "Covariate column names (default: all other columns)")
      ->delimiter(',');
  cmd->add_option("--strategy", strategy,
                  "union | intersection | outcome (default union)");
  cmd->add_option("--lambda-min-om", cfg.lambda_min_om,
                  "Lambda floor for the outcome models");
  cmd->add_option("--lambda-min-ps", cfg.lambda_min_ps,
                  "Lambda floor for the propensity model");
  cmd->add_option("--grid-size", cfg.grid_size, "Lambda grid points");
  cmd->add_option("--folds", cfg.folds, "CV folds");
  cmd->add_option("--clip", clip, "PS clipping bounds, e.g. --clip 0.01 0.99")
      ->expected(2);
  cmd->add_option("--boot-reps", cfg.boot_reps, "Bootstrap replicates");
  cmd->add_option("--seed", cfg.seed, "Run seed");
  cmd->add_option("--out", cfg.out_path,
                  "Output path (default: $DRSELECT_OUT_DIR)");
  cmd->add_option("--profile", profile, "desk | paper");
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Doubly robust causal effect estimation with union-set "
               "variable selection"};
  app.require_subcommand(1);

  RunConfig run_cfg;
  std::string strategy = "union", variance = "analytic", profile = "desk";
  std::vector<double> clip;

  CLI::App* est = app.add_subcommand(
      "estimate", "Select variables, refit, and estimate the ACE");
  add_common_estimate_flags(est, run_cfg, strategy, profile, clip);
  est->add_option("--variance", variance, "analytic | bootstrap");

  CLI::App* sel = app.add_subcommand(
      "select", "Run the variable selection stage only");
  add_common_estimate_flags(sel, run_cfg, strategy, profile, clip);

  SimulateConfig sim_cfg;
  std::vector<std::string> scen_args, setting_args;
  std::string sim_profile = "desk";
  CLI::App* sim = app.add_subcommand(
      "simulate", "Run the Monte Carlo study over scenarios and settings");
  sim->add_option("--scenario", scen_args, "Scenarios, e.g. --scenario 1,3")
      ->delimiter(',');
  sim->add_option("--setting", setting_args, "Settings from {a,b,c,d}")
      ->delimiter(',');
  sim->add_option("--strategies", sim_cfg.strategies,
                  "Strategy list from {UNI,INT,OUT,O-UNI,O-INT,O-OUT}")
      ->delimiter(',');
  sim->add_option("--reps", sim_cfg.reps, "Replicates per cell (0: profile)");
  sim->add_option("--n", sim_cfg.n, "Sample size (0: profile)");
  sim->add_option("--p", sim_cfg.p, "Covariate count");
  sim->add_option("--seed", sim_cfg.seed, "Run seed");
  sim->add_option("--workers", sim_cfg.workers, "Replicate worker threads");
  sim->add_option("--profile", sim_profile, "desk | paper");
  sim->add_option("--out", sim_cfg.out_dir, "Output directory");

  DgpEmitConfig dgp_cfg;
  std::string dgp_setting = "a";
  CLI::App* dgp = app.add_subcommand("dgp", "Data-generating utilities");
  CLI::App* emit = dgp->add_subcommand("emit", "Write one generated dataset");
  emit->add_option("--scenario", dgp_cfg.scenario, "Scenario 1..4");
  emit->add_option("--setting", dgp_setting, "Setting a..d");
  emit->add_option("--n", dgp_cfg.n, "Sample size");
  emit->add_option("--p", dgp_cfg.p, "Covariate count");
  emit->add_option("--seed", dgp_cfg.seed, "Seed");
  emit->add_option("--out", dgp_cfg.out_path, "Output CSV path");
  dgp->require_subcommand(1);

  CLI11_PARSE(app, argc, argv);

  try {
    if (est->parsed() || sel->parsed()) {
      run_cfg.strategy = parse_strategy(strategy);
      run_cfg.profile = profile == "paper" ? Profile::Paper : Profile::Desk;
      if (!clip.empty()) {
        run_cfg.clip = ClipBounds{clip[0], clip[1]};
      }
      if (est->parsed()) {
        run_cfg.variance = variance == "bootstrap" ? VarianceMethod::Bootstrap
                                                   : VarianceMethod::Analytic;
        std::cout << cmd_estimate(run_cfg) << '\n';
      } else {
        std::cout << cmd_select(run_cfg) << '\n';
      }
    } else if (sim->parsed()) {
      if (!scen_args.empty()) {
        sim_cfg.scenarios.clear();
        for (const std::string& s : scen_args) {
          sim_cfg.scenarios.push_back(std::stoi(s));
        }
      }
      if (!setting_args.empty()) {
        sim_cfg.settings.clear();
        for (const std::string& s : setting_args) {
          sim_cfg.settings.push_back(parse_setting(s));
        }
      }
      sim_cfg.profile = sim_profile == "paper" ? Profile::Paper : Profile::Desk;
      std::cout << cmd_simulate(sim_cfg) << '\n';
    } else if (dgp->parsed()) {
      dgp_cfg.setting = parse_setting(dgp_setting);
      std::cout << cmd_dgp_emit(dgp_cfg) << '\n';
    }
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return static_cast<int>(e.code());
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return 1;
  }
  return 0;
}
