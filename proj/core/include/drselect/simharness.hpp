#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "drselect/aipw.hpp"
#include "drselect/dgp.hpp"

namespace drselect {

// The six estimators compared in the study: SCAD-selected union,
// intersection, and outcome-predictor sets, plus their oracle-set versions.
enum class StrategyKind { Uni, Int, Out, OracleUni, OracleInt, OracleOut };

const char* strategy_kind_name(StrategyKind k);  // UNI, INT, OUT, O-UNI, ...
bool strategy_kind_is_oracle(StrategyKind k);
StrategyKind strategy_kind_from_name(const std::string& name);

struct HarnessConfig {
  std::vector<int> scenarios{1};
  std::vector<Setting> settings{Setting::A};
  std::vector<StrategyKind> strategies{
      StrategyKind::Uni,       StrategyKind::Int,       StrategyKind::Out,
      StrategyKind::OracleUni, StrategyKind::OracleInt, StrategyKind::OracleOut};
  int reps = 200;
  int n = 2000;
  int p = 50;
  std::uint64_t seed = 1;
  int workers = 1;
  int grid_count = 32;
  int folds = 10;
  // Floors follow the study protocol: the outcome-model floor is raised
  // when the generating outcome model is nonlinear.
  double lambda_min_om_linear = 0.1;
  double lambda_min_om_nonlinear = 0.3;
  double lambda_min_ps = 0.02;
  double scad_a = 3.7;
  ClipBounds clip{};
  std::int64_t ace_mc_draws = 1000000;
  std::uint64_t ace_oracle_seed = 915;
};

struct StrategyOutcome {
  StrategyKind strategy{};
  bool failed = false;
  std::string failure;
  double tau = 0.0, se = 0.0, ci_lower = 0.0, ci_upper = 0.0;
  IndexSet adjustment_set;
};

struct ReplicateRecord {
  int scenario = 0;
  Setting setting = Setting::A;
  int replicate = 0;
  bool selection_ran = false;
  bool selection_failed = false;
  std::string selection_failure;
  IndexSet m_alpha_hat, m_beta_hat;
  std::vector<StrategyOutcome> outcomes;
};

struct SelectionMetrics {
  double over_prop = 0.0;   // fraction of replicates with any false positive
  double under_prop = 0.0;  // fraction missing any true variable
  double fn_avg = 0.0;
  double fp_avg = 0.0;
};

struct SelectionRow {
  int scenario;
  Setting setting;
  std::string model;  // "beta" or "alpha"
  SelectionMetrics metrics;
};

struct CoverageRow {
  int scenario;
  Setting setting;
  StrategyKind strategy;
  double coverage = 0.0;
  double bias = 0.0;
  double sd = 0.0;
  double rmse = 0.0;  // sqrt(bias^2 + sd^2)
  double true_ace = 0.0;
  int successes = 0;
  int failures = 0;
};

struct SimReport {
  std::vector<SelectionRow> selection;
  std::vector<CoverageRow> coverage;
  std::vector<ReplicateRecord> records;
};

// Per-model over/under/FN/FP against a truth set.
SelectionMetrics selection_metrics(const std::vector<IndexSet>& selected,
                                   const IndexSet& truth);

ReplicateRecord run_replicate(const ScenarioSpec& spec,
                              const HarnessConfig& config, int replicate);

// Deterministic reduction of replicate records into the report; order of
// `records` within a cell does not affect any aggregate. `cell_truths`
// supplies the true ACE per (scenario, setting). Throws EmptyCellError if a
// requested strategy has zero successes in some cell.
struct CellTruth {
  int scenario;
  Setting setting;
  double true_ace;
};
SimReport aggregate(const HarnessConfig& config,
                    const std::vector<CellTruth>& cell_truths,
                    std::vector<ReplicateRecord> records);

// Runs the scenario x setting grid; replicates are the unit of parallelism
// (each owns RNG substream `replicate << kStreamShift`) and aggregation is
// a fixed-order reduction, so the report is independent of `workers`.
SimReport run_study(const HarnessConfig& config);

// Writes selection_metrics.csv, coverage.csv, and replicates.csv (the long
// format behind the estimate-distribution figures). Floats use 6
// significant digits.
void export_report(const SimReport& report, const std::string& out_dir);

}  // namespace drselect
