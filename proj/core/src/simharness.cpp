#include "drselect/simharness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <map>
#include <thread>

#include "drselect/rng.hpp"

namespace drselect {

namespace {

std::string join_set(const IndexSet& s) {
  std::string out;
  for (int j : s.indices()) {
    if (!out.empty()) out += ';';
    out += std::to_string(j);
  }
  return out;
}

std::string fmt6(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.6g", v);
  return buf;
}

IndexSet oracle_set(const ScenarioSpec& spec, StrategyKind k) {
  switch (k) {
    case StrategyKind::OracleUni: return spec.true_u();
    case StrategyKind::OracleInt: return spec.true_i();
    case StrategyKind::OracleOut: return spec.true_m_beta();
    default: throw SchemaError("not an oracle strategy");
  }
}

Strategy base_strategy(StrategyKind k) {
  switch (k) {
    case StrategyKind::Uni:
    case StrategyKind::OracleUni: return Strategy::Union;
    case StrategyKind::Int:
    case StrategyKind::OracleInt: return Strategy::Intersection;
    case StrategyKind::Out:
    case StrategyKind::OracleOut: return Strategy::Outcome;
  }
  return Strategy::Union;
}

}  // namespace

const char* strategy_kind_name(StrategyKind k) {
  switch (k) {
    case StrategyKind::Uni: return "UNI";
    case StrategyKind::Int: return "INT";
    case StrategyKind::Out: return "OUT";
    case StrategyKind::OracleUni: return "O-UNI";
    case StrategyKind::OracleInt: return "O-INT";
    case StrategyKind::OracleOut: return "O-OUT";
  }
  return "?";
}

bool strategy_kind_is_oracle(StrategyKind k) {
  return k == StrategyKind::OracleUni || k == StrategyKind::OracleInt ||
         k == StrategyKind::OracleOut;
}

StrategyKind strategy_kind_from_name(const std::string& name) {
  for (StrategyKind k :
       {StrategyKind::Uni, StrategyKind::Int, StrategyKind::Out,
        StrategyKind::OracleUni, StrategyKind::OracleInt,
        StrategyKind::OracleOut}) {
    if (name == strategy_kind_name(k)) return k;
  }
  throw SchemaError("unknown strategy name: " + name);
}

SelectionMetrics selection_metrics(const std::vector<IndexSet>& selected,
                                   const IndexSet& truth) {
  SelectionMetrics m;
  if (selected.empty()) return m;
  for (const IndexSet& s : selected) {
    const auto fp = set_difference(s, truth).size();
    const auto fn = set_difference(truth, s).size();
    m.over_prop += fp > 0 ? 1.0 : 0.0;
    m.under_prop += fn > 0 ? 1.0 : 0.0;
    m.fp_avg += double(fp);
    m.fn_avg += double(fn);
  }
  const double r = double(selected.size());
  m.over_prop /= r;
  m.under_prop /= r;
  m.fp_avg /= r;
  m.fn_avg /= r;
  return m;
}

ReplicateRecord run_replicate(const ScenarioSpec& base,
                              const HarnessConfig& config, int replicate) {
  ScenarioSpec spec = base;
  spec.seed = config.seed;
  spec.stream_base = streams::replicate_base(std::uint64_t(replicate));

  ReplicateRecord rec;
  rec.scenario = spec.scenario;
  rec.setting = spec.setting;
  rec.replicate = replicate;

  auto [raw, truth] = generate(spec);
  const auto [data, transform] = standardize(raw);
  (void)transform;

  const bool need_selection =
      std::any_of(config.strategies.begin(), config.strategies.end(),
                  [](StrategyKind k) { return !strategy_kind_is_oracle(k); });

  SelectionResult sel;
  bool have_selection = false;
  SelectionConfig sel_cfg;
  sel_cfg.om_grid.lambda_min = spec.om_nonlinear()
                                   ? config.lambda_min_om_nonlinear
                                   : config.lambda_min_om_linear;
  sel_cfg.om_grid.count = config.grid_count;
  sel_cfg.om_grid.folds = config.folds;
  sel_cfg.ps_grid.lambda_min = config.lambda_min_ps;
  sel_cfg.ps_grid.count = config.grid_count;
  sel_cfg.ps_grid.folds = config.folds;
  sel_cfg.scad.a = config.scad_a;
  sel_cfg.seed = config.seed;
  sel_cfg.stream_base = spec.stream_base;
  if (need_selection || config.strategies.empty()) {
    rec.selection_ran = true;
    try {
      sel = select_variables(data, sel_cfg);
      have_selection = true;
      rec.m_alpha_hat = sel.m_alpha_hat;
      rec.m_beta_hat = sel.m_beta_hat;
    } catch (const Error& e) {
      rec.selection_failed = true;
      rec.selection_failure = e.what();
    }
  }

  for (StrategyKind kind : config.strategies) {
    StrategyOutcome out;
    out.strategy = kind;
    const bool oracle = strategy_kind_is_oracle(kind);
    if (!oracle && !have_selection) {
      out.failed = true;
      out.failure = rec.selection_failure.empty() ? "selection unavailable"
                                                  : rec.selection_failure;
      rec.outcomes.push_back(std::move(out));
      continue;
    }
    try {
      const IndexSet set = oracle ? oracle_set(spec, kind)
                                  : strategy_set(sel, base_strategy(kind));
      out.adjustment_set = set;
      const RefitModels models = build_refit(data, set, config.clip);
      AipwOptions opts;
      opts.variance = VarianceMethod::Analytic;
      opts.bootstrap_reps = 0;  // harness records singularities as failures
      opts.clip = config.clip;
      const AipwEstimate est =
          estimate_ace(data, models, base_strategy(kind), opts);
      out.tau = est.tau_hat;
      out.se = est.se;
      out.ci_lower = est.ci_lower;
      out.ci_upper = est.ci_upper;
    } catch (const Error& e) {
      out.failed = true;
      out.failure = e.what();
    }
    rec.outcomes.push_back(std::move(out));
  }
  return rec;
}

SimReport aggregate(const HarnessConfig& config,
                    const std::vector<CellTruth>& cell_truths,
                    std::vector<ReplicateRecord> records) {
  // Canonical record order: cell position, then replicate index. This makes
  // every aggregate and the exported bytes independent of arrival order.
  auto cell_pos = [&](const ReplicateRecord& r) {
    for (size_t c = 0; c < cell_truths.size(); ++c) {
      if (cell_truths[c].scenario == r.scenario &&
          cell_truths[c].setting == r.setting) {
        return long(c);
      }
    }
    throw SchemaError("replicate record without a matching cell");
  };
  std::sort(records.begin(), records.end(),
            [&](const ReplicateRecord& a, const ReplicateRecord& b) {
              const long ca = cell_pos(a), cb = cell_pos(b);
              if (ca != cb) return ca < cb;
              return a.replicate < b.replicate;
            });

  SimReport report;
  report.records = std::move(records);
  std::string empty_cells;
  for (size_t c = 0; c < cell_truths.size(); ++c) {
    const CellTruth& cell = cell_truths[c];
    ScenarioSpec spec;
    spec.scenario = cell.scenario;
    spec.setting = cell.setting;
    spec.p = config.p;
    spec.n = config.n;

    std::vector<IndexSet> sel_beta, sel_alpha;
    for (const ReplicateRecord& rec : report.records) {
      if (rec.scenario != cell.scenario || rec.setting != cell.setting) continue;
      if (rec.selection_ran && !rec.selection_failed) {
        sel_beta.push_back(rec.m_beta_hat);
        sel_alpha.push_back(rec.m_alpha_hat);
      }
    }
    if (!sel_beta.empty()) {
      report.selection.push_back({cell.scenario, cell.setting, "beta",
                                  selection_metrics(sel_beta, spec.true_m_beta())});
      report.selection.push_back({cell.scenario, cell.setting, "alpha",
                                  selection_metrics(sel_alpha, spec.true_m_alpha())});
    }

    for (StrategyKind kind : config.strategies) {
      CoverageRow row;
      row.scenario = cell.scenario;
      row.setting = cell.setting;
      row.strategy = kind;
      row.true_ace = cell.true_ace;
      double sum = 0.0;
      std::vector<double> taus;
      int covered = 0;
      for (const ReplicateRecord& rec : report.records) {
        if (rec.scenario != cell.scenario || rec.setting != cell.setting) {
          continue;
        }
        for (const StrategyOutcome& out : rec.outcomes) {
          if (out.strategy != kind) continue;
          if (out.failed) {
            ++row.failures;
          } else {
            taus.push_back(out.tau);
            sum += out.tau;
            if (out.ci_lower <= row.true_ace && row.true_ace <= out.ci_upper) {
              ++covered;
            }
          }
        }
      }
      row.successes = int(taus.size());
      if (row.successes == 0) {
        empty_cells += " (scenario " + std::to_string(cell.scenario) + ", " +
                       setting_char(cell.setting) + ", " +
                       strategy_kind_name(kind) + ")";
        report.coverage.push_back(row);
        continue;
      }
      const double mean = sum / double(row.successes);
      row.bias = mean - row.true_ace;
      double ss = 0.0;
      for (double t : taus) ss += (t - mean) * (t - mean);
      row.sd = row.successes > 1 ? std::sqrt(ss / double(row.successes - 1)) : 0.0;
      row.rmse = std::sqrt(row.bias * row.bias + row.sd * row.sd);
      row.coverage = double(covered) / double(row.successes);
      report.coverage.push_back(row);
    }
  }
  if (!empty_cells.empty() && !config.strategies.empty()) {
    throw EmptyCellError(empty_cells);
  }
  return report;
}

SimReport run_study(const HarnessConfig& config) {
  if (config.reps < 1) throw SchemaError("reps must be positive");

  std::vector<ScenarioSpec> specs;
  std::vector<CellTruth> truths;
  for (int sc : config.scenarios) {
    for (Setting st : config.settings) {
      ScenarioSpec spec;
      spec.scenario = sc;
      spec.setting = st;
      spec.n = config.n;
      spec.p = config.p;
      CellTruth cell{sc, st, 0.0};
      if (spec.om_nonlinear()) {
        ScenarioSpec oracle = spec;
        oracle.seed = config.ace_oracle_seed;
        oracle.stream_base = 0;
        cell.true_ace = true_ace(oracle, config.ace_mc_draws).value;
      }
      specs.push_back(spec);
      truths.push_back(cell);
    }
  }

  std::vector<ReplicateRecord> records(specs.size() * size_t(config.reps));
  std::atomic<long> next{0};
  const long total = long(records.size());
  std::atomic<bool> worker_error{false};
  auto work = [&] {
    for (long t = next.fetch_add(1); t < total; t = next.fetch_add(1)) {
      const size_t cell = size_t(t) / size_t(config.reps);
      const int rep = int(size_t(t) % size_t(config.reps));
      try {
        records[size_t(t)] = run_replicate(specs[cell], config, rep);
      } catch (...) {
        worker_error = true;  // run_replicate records failures; this is a bug guard
      }
    }
  };
  if (config.workers <= 1) {
    work();
  } else {
    std::vector<std::thread> pool;
    for (int w = 0; w < config.workers; ++w) pool.emplace_back(work);
    for (auto& t : pool) t.join();
  }
  if (worker_error) throw Error(ErrorCode::Solver, "replicate worker aborted");

  return aggregate(config, truths, std::move(records));
}

void export_report(const SimReport& report, const std::string& out_dir) {
  namespace fs = std::filesystem;
  fs::create_directories(out_dir);

  {
    std::ofstream f(fs::path(out_dir) / "selection_metrics.csv");
    f << "scenario,setting,model,over,under,fn,fp\n";
    for (const SelectionRow& r : report.selection) {
      f << r.scenario << ',' << setting_char(r.setting) << ',' << r.model
        << ',' << fmt6(r.metrics.over_prop) << ',' << fmt6(r.metrics.under_prop)
        << ',' << fmt6(r.metrics.fn_avg) << ',' << fmt6(r.metrics.fp_avg)
        << '\n';
    }
  }
  {
    std::ofstream f(fs::path(out_dir) / "coverage.csv");
    f << "scenario,setting,strategy,coverage,bias,sd,rmse,true_ace,successes,"
         "failures\n";
    for (const CoverageRow& r : report.coverage) {
      f << r.scenario << ',' << setting_char(r.setting) << ','
        << strategy_kind_name(r.strategy) << ',' << fmt6(r.coverage) << ','
        << fmt6(r.bias) << ',' << fmt6(r.sd) << ',' << fmt6(r.rmse) << ','
        << fmt6(r.true_ace) << ',' << r.successes << ',' << r.failures << '\n';
    }
  }
  {
    std::ofstream f(fs::path(out_dir) / "replicates.csv");
    f << "scenario,setting,strategy,replicate,status,tau,se,ci_lower,ci_upper,"
         "set_size,set\n";
    for (const ReplicateRecord& rec : report.records) {
      for (const StrategyOutcome& out : rec.outcomes) {
        f << rec.scenario << ',' << setting_char(rec.setting) << ','
          << strategy_kind_name(out.strategy) << ',' << rec.replicate << ',';
        if (out.failed) {
          f << "failed,,,,,,\n";
        } else {
          f << "ok," << fmt6(out.tau) << ',' << fmt6(out.se) << ','
            << fmt6(out.ci_lower) << ',' << fmt6(out.ci_upper) << ','
            << out.adjustment_set.size() << ',' << join_set(out.adjustment_set)
            << '\n';
        }
      }
    }
  }
}

}  // namespace drselect
