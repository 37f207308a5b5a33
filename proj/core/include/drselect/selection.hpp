#pragma once

#include <cstdint>

#include "drselect/penalized.hpp"

namespace drselect {

struct SelectionConfig {
  LambdaGrid om_grid{.lambda_min = 0.1};
  LambdaGrid ps_grid{.lambda_min = 0.02};
  ScadParams scad{};  // lambda unused here; `a` applies to all three fits
  std::uint64_t seed = 0;
  std::uint64_t stream_base = 0;  // replicate substream, see rng.hpp
};

// The two selected nuisance-model sets and their union/intersection.
// m_beta_hat is the union of the treated- and control-arm active sets.
struct SelectionResult {
  IndexSet m_alpha_hat;
  IndexSet m_beta_hat;
  IndexSet u_hat;
  IndexSet i_hat;
  PenalizedFit fit_treated;
  PenalizedFit fit_control;
  PenalizedFit fit_ps;
};

SelectionResult select_variables(const Dataset& data,
                                 const SelectionConfig& config);

enum class Strategy { Union, Intersection, Outcome };

IndexSet strategy_set(const SelectionResult& result, Strategy strategy);

const char* strategy_name(Strategy strategy);

}  // namespace drselect
