#include "msgc/monte_carlo.hpp"

#include "msgc/parallel.hpp"
#include "msgc/surrogate.hpp"

#include <cmath>
#include <sstream>

namespace msgc {

void MonteCarloConfig::validate() const {
  simulation.validate();
  if (realizations < 1) throw Error("number of realizations must be at least 1");
  if (filter_order < 0) throw Error("filter order must be nonnegative");
  if (p_max < 1) throw Error("p_max must be at least 1");
  validate_scales(scales);
}

const SummaryRow* MonteCarloResult::find(Mode mode, int tau, int source, int target) const {
  for (const auto& r : summary) {
    if (r.mode == mode && r.tau == tau && r.source == source && r.target == target) return &r;
  }
  return nullptr;
}

namespace {

void summarize(Mode mode, const MultiscaleGcResult& exact,
               const std::vector<std::optional<MultiscaleGcResult>>& runs, std::vector<SummaryRow>& out) {
  for (const auto& scale : exact.scales) {
    for (const auto& value : scale.values) {
      std::vector<double> sample, errors;
      for (const auto& run : runs) {
        if (!run) continue;
        const double v = run->gc(scale.tau, value.source, value.target);
        if (std::isnan(v)) continue;
        sample.push_back(v);
        errors.push_back(std::abs(v - value.f));
      }
      SummaryRow row;
      row.mode = mode;
      row.tau = scale.tau;
      row.source = value.source;
      row.target = value.target;
      row.exact = value.f;
      row.count = static_cast<int>(sample.size());
      if (sample.empty()) {
        row.median = row.q25 = row.q75 = row.median_abs_error = std::nan("");
      } else {
        row.median = percentile(sample, 50.0);
        row.q25 = percentile(sample, 25.0);
        row.q75 = percentile(sample, 75.0);
        row.median_abs_error = percentile(errors, 50.0);
      }
      out.push_back(row);
    }
  }
}

}  // namespace

MonteCarloResult run_monte_carlo(const MonteCarloConfig& config, const MultiscaleOptions& options) {
  config.validate();
  const VarModel model = build_benchmark(config.simulation);
  const MatrixXd observation = observation_matrix(config.simulation);

  MonteCarloResult result;
  result.exact = multiscale_gc_exact(model, config.filter_order, config.scales, options, observation);
  result.warnings = result.exact.warnings;
  if (!is_stable(model)) {
    std::ostringstream msg;
    msg << "benchmark '" << to_string(config.simulation.generator)
        << "' is not stable (spectral radius " << check_stability(model) << "); it cannot be simulated";
    throw Error(msg.str());
  }

  const auto n = static_cast<std::size_t>(config.realizations);
  result.estimated.resize(n);
  if (config.with_naive) result.naive.resize(n);
  std::vector<std::string> failures(n);
  MultiscaleOptions inner = options;
  inner.execution = Execution::serial;

  for_each_index(config.realizations, options.execution, [&](Index i) {
    const auto k = static_cast<std::size_t>(i);
    SimulationConfig sim = config.simulation;
    sim.seed = config.simulation.seed + static_cast<std::uint64_t>(i);
    const TimeSeriesSet data = simulate_benchmark(sim);
    try {
      result.estimated[k] = multiscale_gc_estimated(data, config.filter_order, config.scales, config.p_max, inner);
    } catch (const DareError& e) {
      failures[k] = e.what();
    }
    if (config.with_naive) {
      result.naive[k] = multiscale_gc_naive(data, config.filter_order, config.scales, config.p_max, inner);
    }
  });

  for (std::size_t k = 0; k < n; ++k) {
    if (!failures[k].empty()) {
      result.warnings.push_back("realization " + std::to_string(k) + " skipped (ss-estimated): " + failures[k]);
    }
  }
  summarize(Mode::ss_estimated, result.exact, result.estimated, result.summary);
  if (config.with_naive) summarize(Mode::naive, result.exact, result.naive, result.summary);
  return result;
}

}  // namespace msgc
