#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drselect/aipw.hpp"
#include "drselect/simharness.hpp"

namespace drselect {

// Environment variable naming the default output directory.
inline constexpr const char* kOutDirEnv = "DRSELECT_OUT_DIR";

enum class Profile { Desk, Paper };

struct RunConfig {
  std::string input_path;
  std::string outcome_col = "Y";
  std::string treatment_col = "A";
  std::vector<std::string> covariate_cols;  // empty: all other columns
  Strategy strategy = Strategy::Union;
  double lambda_min_om = 0.1;
  double lambda_min_ps = 0.02;
  int grid_size = 100;
  int folds = 10;
  double scad_a = 3.7;
  ClipBounds clip{};
  VarianceMethod variance = VarianceMethod::Analytic;
  int boot_reps = 500;
  std::uint64_t seed = 0;
  std::string out_path;  // default: $DRSELECT_OUT_DIR/<command>_result.txt
  Profile profile = Profile::Desk;
};

struct SimulateConfig {
  std::vector<int> scenarios{1, 2, 3, 4};
  std::vector<Setting> settings{Setting::A, Setting::B, Setting::C, Setting::D};
  std::vector<std::string> strategies;  // empty: all six
  int reps = 0;  // 0: profile default (desk 200, paper 2000)
  int n = 0;     // 0: profile default (desk 2000, paper 5000)
  int p = 50;
  std::uint64_t seed = 1;
  int workers = 1;
  Profile profile = Profile::Desk;
  std::string out_dir;  // default: $DRSELECT_OUT_DIR or ./drselect_sim
};

struct DgpEmitConfig {
  int scenario = 1;
  Setting setting = Setting::A;
  int n = 5000;
  int p = 50;
  std::uint64_t seed = 0;
  std::string out_path;
};

// Full pipeline: ingest, standardize, select, refit on the strategy set,
// AIPW estimate with variance; writes the flat key/value result artifact.
// Returns the path written.
std::string cmd_estimate(const RunConfig& config);

// Selection only: the four sets and the per-model CV tables.
std::string cmd_select(const RunConfig& config);

// Monte Carlo study; writes the three CSVs into the output directory.
std::string cmd_simulate(const SimulateConfig& config);

// Writes one generated dataset as CSV.
std::string cmd_dgp_emit(const DgpEmitConfig& config);

HarnessConfig harness_config(const SimulateConfig& config);

}  // namespace drselect
