#pragma once

#include "msgc/state_space.hpp"
#include "msgc/types.hpp"
#include "msgc/var_model.hpp"

#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace msgc {

/// GC from `source` to `target` (0-based channels), conditioned on all other channels.
struct GcValue {
  int source = 0;
  int target = 0;
  double lambda_full = 0.0;        // error variance, past of all channels
  double lambda_restricted = 0.0;  // error variance, driver's past removed
  double f = 0.0;                  // ln(lambda_restricted / lambda_full), nats
};

GcValue make_gc_value(int source, int target, double lambda_full, double lambda_restricted);

/// Conditional GC from the ISS parameters: lambda_full = Phi(j,j); lambda_restricted
/// from the DARE of the submodel that drops the source channel.
GcValue gc_from_iss(const IssModel& model, int source, int target, const DareOptions& options = {});

/// All ordered pairs (source-major), one submodel DARE per source channel.
std::vector<GcValue> pairwise_gc(const IssModel& model, const DareOptions& options = {});

enum class Mode { exact, ss_estimated, naive };

Mode parse_mode(std::string_view tag);
std::string_view to_string(Mode mode);

struct ScaleGc {
  int tau = 1;
  bool present = true;
  std::string diagnostic;  // why the scale is absent
  int model_order = 0;     // order used at this scale
  std::vector<GcValue> values;

  /// nullptr when absent or the pair is not in the table.
  const GcValue* find(int source, int target) const;
};

struct MultiscaleGcResult {
  Mode mode = Mode::exact;
  int filter_order = 0;
  int model_order = 0;
  Index channels = 0;
  std::vector<ScaleGc> scales;
  std::vector<std::string> warnings;
  std::optional<VarModel> fitted;  // ss-estimated mode only

  /// GC value at a scale, NaN when the scale or pair is absent.
  double gc(int tau, int source, int target) const;
};

struct MultiscaleOptions {
  DareOptions dare;
  Execution execution = Execution::parallel;
};

/// Throws unless scales are nonempty, positive and strictly increasing.
void validate_scales(const std::vector<int>& scales);

/// Parameter-level GC for each scale: Hamming FIR of order q at cutoff 1/(2 tau),
/// filtered-VAR SS embedding, downsampling by tau, DARE, pairwise submodel DAREs.
/// `observation` (optional) maps the VAR channels to the observed channels.
/// A nonstationary model is accepted with a warning in the result.
MultiscaleGcResult multiscale_gc_exact(const VarModel& model, int q, const std::vector<int>& scales,
                                       const MultiscaleOptions& options = {},
                                       const MatrixXd& observation = MatrixXd());

/// BIC order selection and least-squares VAR fit on the raw data, then the exact sweep.
MultiscaleGcResult multiscale_gc_estimated(const TimeSeriesSet& data, int q,
                                           const std::vector<int>& scales, int p_max,
                                           const MultiscaleOptions& options = {});

/// Baseline: filter and downsample the data, then full and restricted least-squares
/// regressions (order by BIC on the rescaled data) at each scale. Scales with too
/// few samples are marked absent.
MultiscaleGcResult multiscale_gc_naive(const TimeSeriesSet& data, int q,
                                       const std::vector<int>& scales, int p_max,
                                       const MultiscaleOptions& options = {});

/// Largest candidate order the naive estimator tries on a rescaled series of
/// `samples` rows and `channels` channels: min(p_max, (samples - 1) / (2 channels)).
int naive_order_cap(Index samples, Index channels, int p_max);

}  // namespace msgc
