#include "drselect/selection.hpp"

#include "drselect/rng.hpp"

namespace drselect {

SelectionResult select_variables(const Dataset& data,
                                 const SelectionConfig& config) {
  auto [treated, control] = split_by_arm(data);
  const long folds = config.om_grid.folds;
  if (treated.n() < folds || control.n() < folds) {
    throw TooFewRowsError(long(std::min(treated.n(), control.n())),
                          int(folds));
  }

  SelectionResult result;
  try {
    result.fit_treated =
        fit_penalized_linear(treated, config.om_grid, config.scad, config.seed,
                             config.stream_base + streams::kFoldsTreated);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("treated outcome model: ") + e.what());
  }
  try {
    result.fit_control =
        fit_penalized_linear(control, config.om_grid, config.scad, config.seed,
                             config.stream_base + streams::kFoldsControl);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("control outcome model: ") + e.what());
  }
  try {
    result.fit_ps =
        fit_penalized_logistic(data, config.ps_grid, config.scad, config.seed,
                               config.stream_base + streams::kFoldsPs);
  } catch (const Error& e) {
    throw Error(e.code(), std::string("propensity model: ") + e.what());
  }

  result.m_beta_hat =
      set_union(result.fit_treated.active_set, result.fit_control.active_set);
  result.m_alpha_hat = result.fit_ps.active_set;
  result.u_hat = set_union(result.m_alpha_hat, result.m_beta_hat);
  result.i_hat = set_intersection(result.m_alpha_hat, result.m_beta_hat);
  return result;
}

IndexSet strategy_set(const SelectionResult& result, Strategy strategy) {
  switch (strategy) {
    case Strategy::Union:
      return result.u_hat;
    case Strategy::Intersection:
      return result.i_hat;
    case Strategy::Outcome:
      return result.m_beta_hat;
  }
  throw SchemaError("unknown strategy");
}

const char* strategy_name(Strategy strategy) {
  switch (strategy) {
    case Strategy::Union:
      return "UNION";
    case Strategy::Intersection:
      return "INTERSECTION";
    case Strategy::Outcome:
      return "OUTCOME";
  }
  return "?";
}

}  // namespace drselect
