#pragma once

#include "msgc/gc.hpp"
#include "msgc/var_model.hpp"

#include <optional>
#include <string>
#include <vector>

namespace msgc {

struct MonteCarloConfig {
  SimulationConfig simulation;  // realization i uses seed simulation.seed + i
  int realizations = 100;
  int filter_order = 6;
  std::vector<int> scales;
  int p_max = 10;
  bool with_naive = true;

  void validate() const;
};

struct SummaryRow {
  Mode mode = Mode::ss_estimated;
  int tau = 1;
  int source = 0;
  int target = 0;
  double exact = 0.0;
  double median = 0.0;
  double q25 = 0.0;
  double q75 = 0.0;
  double median_abs_error = 0.0;  // median of |estimate - exact|
  int count = 0;                  // realizations with a value at this cell
};

struct MonteCarloResult {
  MultiscaleGcResult exact;
  // One entry per realization; empty when that realization failed.
  std::vector<std::optional<MultiscaleGcResult>> estimated;
  std::vector<std::optional<MultiscaleGcResult>> naive;
  std::vector<SummaryRow> summary;  // ss-estimated rows, then naive rows
  std::vector<std::string> warnings;

  const SummaryRow* find(Mode mode, int tau, int source, int target) const;
};

/// Exact curve of the benchmark plus ss-estimated (and naive) sweeps over
/// independent realizations. Realizations run in parallel, each sweep serially.
/// Throws when the benchmark VAR is not stable (it cannot be simulated).
MonteCarloResult run_monte_carlo(const MonteCarloConfig& config, const MultiscaleOptions& options = {});

}  // namespace msgc
