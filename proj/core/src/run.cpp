#include "drselect/run.hpp"

#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "drselect/csv.hpp"

namespace drselect {

namespace {

namespace fs = std::filesystem;

std::string default_dir() {
  const char* env = std::getenv(kOutDirEnv);
  return env && *env ? env : ".";
}

std::string resolve_out(const std::string& given, const std::string& fallback) {
  if (!given.empty()) return given;
  return (fs::path(default_dir()) / fallback).string();
}

std::string full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_set_line(std::ostream& os, const char* key, const IndexSet& set,
                    const std::vector<std::string>& names) {
  os << key;
  for (int j : set.indices()) os << ' ' << names[size_t(j)];
  os << '\n';
}

void write_cv_table(std::ostream& os, const char* key,
                    const std::vector<CvEntry>& table) {
  for (const CvEntry& e : table) {
    os << key << ' ' << full(e.lambda) << ' ' << full(e.mean_loss) << ' '
       << full(e.sd_loss) << '\n';
  }
}

struct Pipeline {
  Dataset data;  // standardized
  SelectionResult selection;
};

Pipeline run_selection(const RunConfig& config) {
  const CsvTable table = read_csv(config.input_path);
  const Dataset raw = dataset_from_csv(table, config.outcome_col,
                                       config.treatment_col,
                                       config.covariate_cols);
  auto [data, transform] = standardize(raw);
  (void)transform;

  SelectionConfig sel;
  sel.om_grid.lambda_min = config.lambda_min_om;
  sel.om_grid.count = config.grid_size;
  sel.om_grid.folds = config.folds;
  sel.ps_grid.lambda_min = config.lambda_min_ps;
  sel.ps_grid.count = config.grid_size;
  sel.ps_grid.folds = config.folds;
  sel.scad.a = config.scad_a;
  sel.seed = config.seed;
  SelectionResult result = select_variables(data, sel);
  return {std::move(data), std::move(result)};
}

// Standardized mean difference per covariate (scale-invariant, so the
// standardized columns give the same value as the raw ones).
std::vector<double> balance_smd(const Dataset& data) {
  auto [treated, control] = split_by_arm(data);
  std::vector<double> smd(size_t(data.p() - 1));
  for (Eigen::Index j = 1; j < data.p(); ++j) {
    const auto t = treated.x.col(j), c = control.x.col(j);
    const double mt = t.mean(), mc = c.mean();
    const double vt = (t.array() - mt).square().sum() / double(treated.n() - 1);
    const double vc = (c.array() - mc).square().sum() / double(control.n() - 1);
    const double pooled = std::sqrt(0.5 * (vt + vc));
    smd[size_t(j - 1)] = pooled > 0.0 ? (mt - mc) / pooled : 0.0;
  }
  return smd;
}

void write_common_header(std::ostream& os, const char* kind,
                         const RunConfig& config, const Dataset& data) {
  os << "format drselect." << kind << ".v1\n";
  os << "input " << config.input_path << '\n';
  os << "n " << data.n() << '\n';
  os << "n_treated " << data.n_treated() << '\n';
  os << "n_control " << data.n_control() << '\n';
  os << "covariates " << data.p() - 1 << '\n';
  os << "seed " << config.seed << '\n';
  os << "lambda_min_om " << full(config.lambda_min_om) << '\n';
  os << "lambda_min_ps " << full(config.lambda_min_ps) << '\n';
  os << "grid_size " << config.grid_size << '\n';
  os << "folds " << config.folds << '\n';
}

void write_selection_block(std::ostream& os, const SelectionResult& sel,
                           const std::vector<std::string>& names) {
  os << "m_alpha_size " << sel.m_alpha_hat.size() << '\n';
  os << "m_beta_size " << sel.m_beta_hat.size() << '\n';
  os << "u_size " << sel.u_hat.size() << '\n';
  os << "i_size " << sel.i_hat.size() << '\n';
  write_set_line(os, "m_alpha_hat", sel.m_alpha_hat, names);
  write_set_line(os, "m_beta_hat", sel.m_beta_hat, names);
  write_set_line(os, "u_hat", sel.u_hat, names);
  write_set_line(os, "i_hat", sel.i_hat, names);
  os << "lambda_om_treated " << full(sel.fit_treated.lambda_used) << '\n';
  os << "lambda_om_control " << full(sel.fit_control.lambda_used) << '\n';
  os << "lambda_ps " << full(sel.fit_ps.lambda_used) << '\n';
  os << "ps_separation_warning " << (sel.fit_ps.separation_warning ? 1 : 0)
     << '\n';
}

}  // namespace

HarnessConfig harness_config(const SimulateConfig& config) {
  HarnessConfig h;
  h.scenarios = config.scenarios;
  h.settings = config.settings;
  if (!config.strategies.empty()) {
    h.strategies.clear();
    for (const std::string& s : config.strategies) {
      h.strategies.push_back(strategy_kind_from_name(s));
    }
  }
  const bool paper = config.profile == Profile::Paper;
  h.reps = config.reps > 0 ? config.reps : (paper ? 2000 : 200);
  h.n = config.n > 0 ? config.n : (paper ? 5000 : 2000);
  h.p = config.p;
  h.grid_count = paper ? 100 : 32;
  h.seed = config.seed;
  h.workers = config.workers;
  return h;
}

std::string cmd_estimate(const RunConfig& config) {
  config.clip.validate();
  const Pipeline pipe = run_selection(config);
  const IndexSet set = strategy_set(pipe.selection, config.strategy);
  const RefitModels models = build_refit(pipe.data, set, config.clip);

  AipwOptions opts;
  opts.variance = config.variance;
  opts.bootstrap_reps = config.boot_reps;
  opts.seed = config.seed;
  opts.clip = config.clip;
  const AipwEstimate est = estimate_ace(pipe.data, models, config.strategy, opts);

  const std::vector<double> smd = balance_smd(pipe.data);

  const std::string path = resolve_out(config.out_path, "estimate_result.txt");
  std::ostringstream os;
  write_common_header(os, "estimate", config, pipe.data);
  os << "strategy " << strategy_name(config.strategy) << '\n';
  os << "tau_hat " << full(est.tau_hat) << '\n';
  os << "se " << full(est.se) << '\n';
  os << "ci_lower " << full(est.ci_lower) << '\n';
  os << "ci_upper " << full(est.ci_upper) << '\n';
  os << "variance_method "
     << (est.variance_method == VarianceMethod::Analytic ? "ANALYTIC"
                                                         : "BOOTSTRAP")
     << '\n';
  os << "information_fallback " << (est.information_fallback ? 1 : 0) << '\n';
  os << "clip_lo " << full(config.clip.lo) << '\n';
  os << "clip_hi " << full(config.clip.hi) << '\n';
  os << "clipping_events " << models.clipping_events << '\n';
  os << "ps_separated " << (models.ps_separated ? 1 : 0) << '\n';
  write_selection_block(os, pipe.selection, pipe.data.column_names);
  write_set_line(os, "set_used", set, pipe.data.column_names);
  for (Eigen::Index j = 1; j < pipe.data.p(); ++j) {
    os << "smd " << pipe.data.column_names[size_t(j)] << ' '
       << full(smd[size_t(j - 1)]) << '\n';
  }

  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  f << os.str();
  return path;
}

std::string cmd_select(const RunConfig& config) {
  const Pipeline pipe = run_selection(config);
  const std::string path = resolve_out(config.out_path, "select_result.txt");
  std::ostringstream os;
  write_common_header(os, "select", config, pipe.data);
  write_selection_block(os, pipe.selection, pipe.data.column_names);
  write_cv_table(os, "cv_om_treated", pipe.selection.fit_treated.cv_table);
  write_cv_table(os, "cv_om_control", pipe.selection.fit_control.cv_table);
  write_cv_table(os, "cv_ps", pipe.selection.fit_ps.cv_table);

  std::ofstream f(path);
  if (!f) throw ParseError("cannot write " + path);
  f << os.str();
  return path;
}

std::string cmd_simulate(const SimulateConfig& config) {
  const std::string dir =
      !config.out_dir.empty()
          ? config.out_dir
          : (fs::path(default_dir()) / "drselect_sim").string();
  const SimReport report = run_study(harness_config(config));
  export_report(report, dir);
  return dir;
}

std::string cmd_dgp_emit(const DgpEmitConfig& config) {
  ScenarioSpec spec;
  spec.scenario = config.scenario;
  spec.setting = config.setting;
  spec.n = config.n;
  spec.p = config.p;
  spec.seed = config.seed;
  auto [data, truth] = generate(spec);
  (void)truth;
  const std::string path = resolve_out(config.out_path, "dgp_dataset.csv");
  write_dataset_csv(data, path);
  return path;
}

}  // namespace drselect
