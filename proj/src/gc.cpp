#include "msgc/gc.hpp"

#include "msgc/linalg.hpp"
#include "msgc/parallel.hpp"
#include "msgc/rescale.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace msgc {

GcValue make_gc_value(int source, int target, double lambda_full, double lambda_restricted) {
  return GcValue{source, target, lambda_full, lambda_restricted,
                 std::log(lambda_restricted / lambda_full)};
}

namespace {

std::vector<int> all_but(Index m, int skip) {
  std::vector<int> keep;
  for (int c = 0; c < m; ++c) {
    if (c != skip) keep.push_back(c);
  }
  return keep;
}

void check_pair(const IssModel& model, int source, int target) {
  const Index m = model.obs_dim();
  if (source < 0 || source >= m || target < 0 || target >= m) {
    throw Error("GC channel index out of range");
  }
  if (source == target) throw Error("GC source and target must differ");
}

std::string direction(int source, int target) {
  return std::to_string(source + 1) + "->" + std::to_string(target + 1);
}

}  // namespace

GcValue gc_from_iss(const IssModel& model, int source, int target, const DareOptions& options) {
  check_pair(model, source, target);
  const auto keep = all_but(model.obs_dim(), source);
  const int pos = target < source ? target : target - 1;
  DareSolution restricted;
  try {
    restricted = solve_dare(iss_submodel(model, keep), options);
  } catch (const DareError& e) {
    throw DareError("GC " + direction(source, target) + ": " + e.what(), e.last_residual(),
                    e.iterations());
  }
  return make_gc_value(source, target, model.phi(target, target), restricted.phi(pos, pos));
}

std::vector<GcValue> pairwise_gc(const IssModel& model, const DareOptions& options) {
  const Index m = model.obs_dim();
  std::vector<GcValue> out;
  out.reserve(static_cast<std::size_t>(m * (m - 1)));
  for (int source = 0; source < m; ++source) {
    const auto keep = all_but(m, source);
    DareSolution restricted;
    try {
      restricted = solve_dare(iss_submodel(model, keep), options);
    } catch (const DareError& e) {
      throw DareError("GC from channel " + std::to_string(source + 1) + ": " + e.what(),
                      e.last_residual(), e.iterations());
    }
    for (std::size_t pos = 0; pos < keep.size(); ++pos) {
      const int target = keep[pos];
      const auto p = static_cast<Index>(pos);
      out.push_back(make_gc_value(source, target, model.phi(target, target), restricted.phi(p, p)));
    }
  }
  return out;
}

Mode parse_mode(std::string_view tag) {
  if (tag == "exact") return Mode::exact;
  if (tag == "ss-estimated") return Mode::ss_estimated;
  if (tag == "naive") return Mode::naive;
  throw Error("unknown mode '" + std::string(tag) + "' (expected exact, ss-estimated or naive)");
}

std::string_view to_string(Mode mode) {
  switch (mode) {
    case Mode::exact: return "exact";
    case Mode::ss_estimated: return "ss-estimated";
    case Mode::naive: return "naive";
  }
  return "?";
}

const GcValue* ScaleGc::find(int source, int target) const {
  if (!present) return nullptr;
  for (const auto& v : values) {
    if (v.source == source && v.target == target) return &v;
  }
  return nullptr;
}

double MultiscaleGcResult::gc(int tau, int source, int target) const {
  for (const auto& s : scales) {
    if (s.tau != tau) continue;
    if (const GcValue* v = s.find(source, target)) return v->f;
  }
  return std::numeric_limits<double>::quiet_NaN();
}

void validate_scales(const std::vector<int>& scales) {
  if (scales.empty()) throw Error("scale list is empty");
  for (std::size_t i = 0; i < scales.size(); ++i) {
    if (scales[i] < 1) throw Error("scale factors must be positive integers");
    if (i > 0 && scales[i] <= scales[i - 1]) throw Error("scale factors must be strictly increasing");
  }
}

MultiscaleGcResult multiscale_gc_exact(const VarModel& model, int q, const std::vector<int>& scales,
                                       const MultiscaleOptions& options,
                                       const MatrixXd& observation) {
  validate_scales(scales);
  if (q < 0) throw Error("filter order must be nonnegative");
  model.validate();
  const double radius = check_stability(model);

  MultiscaleGcResult result;
  if (!(radius < 1.0 - 1e-10)) {
    std::ostringstream msg;
    msg << "VAR model is not stationary (companion spectral radius " << radius
        << "); values are steady-state Kalman predictions";
    result.warnings.push_back(msg.str());
  }
  result.mode = Mode::exact;
  result.filter_order = q;
  result.model_order = model.order();
  result.channels = observation.size() == 0 ? model.channels() : observation.rows();
  result.scales.resize(scales.size());

  for_each_index(static_cast<Index>(scales.size()), options.execution, [&](Index s) {
    const int tau = scales[static_cast<std::size_t>(s)];
    ScaleGc& out = result.scales[static_cast<std::size_t>(s)];
    out.tau = tau;
    out.model_order = model.order();
    try {
      const SsModel filtered = var_filter_to_ss(model, design_fir_hamming(q, tau), observation);
      const IssModel iss = ss_to_iss(downsample_ss(filtered, tau), options.dare);
      out.values = pairwise_gc(iss, options.dare);
    } catch (const DareError& e) {
      throw DareError("scale " + std::to_string(tau) + ": " + e.what(), e.last_residual(),
                      e.iterations());
    }
  });
  return result;
}

MultiscaleGcResult multiscale_gc_estimated(const TimeSeriesSet& data, int q,
                                           const std::vector<int>& scales, int p_max,
                                           const MultiscaleOptions& options) {
  validate_scales(scales);
  const int order = select_order_bic(data, p_max);
  const VarModel fitted = estimate_var(data, order);
  MultiscaleGcResult result = multiscale_gc_exact(fitted, q, scales, options);
  result.mode = Mode::ss_estimated;
  result.fitted = fitted;
  return result;
}

int naive_order_cap(Index samples, Index channels, int p_max) {
  const Index cap = (samples - 1) / (2 * channels);
  return static_cast<int>(std::min<Index>(p_max, cap));
}

MultiscaleGcResult multiscale_gc_naive(const TimeSeriesSet& data, int q,
                                       const std::vector<int>& scales, int p_max,
                                       const MultiscaleOptions& options) {
  validate_scales(scales);
  data.validate();
  if (q < 0) throw Error("filter order must be nonnegative");
  if (p_max < 1) throw Error("maximum model order must be positive");
  const Index m = data.channels();
  if (m < 2) throw Error("GC needs at least two channels");

  MultiscaleGcResult result;
  result.mode = Mode::naive;
  result.filter_order = q;
  result.channels = m;
  result.scales.resize(scales.size());

  for_each_index(static_cast<Index>(scales.size()), options.execution, [&](Index s) {
    const int tau = scales[static_cast<std::size_t>(s)];
    ScaleGc& out = result.scales[static_cast<std::size_t>(s)];
    out.tau = tau;
    if (data.samples() <= q || (data.samples() - q) / tau < 2) {
      out.present = false;
      out.diagnostic = "series too short to filter and downsample at this scale";
      return;
    }
    const TimeSeriesSet rescaled = downsample(apply_filter(data, design_fir_hamming(q, tau)), tau);
    const int cap = naive_order_cap(rescaled.samples(), m, p_max);
    if (cap < 1) {
      std::ostringstream msg;
      msg << "only " << rescaled.samples() << " samples after rescaling";
      out.present = false;
      out.diagnostic = msg.str();
      return;
    }
    const int order = select_order_bic(rescaled, cap);
    out.model_order = order;

    const MatrixXd y = demeaned(rescaled.values);
    std::vector<int> everyone(static_cast<std::size_t>(m));
    for (int c = 0; c < m; ++c) everyone[static_cast<std::size_t>(c)] = c;
    const MatrixXd full =
        lagged_regression_residual_cov(y, everyone, everyone, order, order, &rescaled.labels);
    for (int source = 0; source < m; ++source) {
      const auto keep = all_but(m, source);
      const MatrixXd restricted =
          lagged_regression_residual_cov(y, keep, keep, order, order, &rescaled.labels);
      for (std::size_t pos = 0; pos < keep.size(); ++pos) {
        const int target = keep[pos];
        const auto p = static_cast<Index>(pos);
        out.values.push_back(make_gc_value(source, target, full(target, target), restricted(p, p)));
      }
    }
  });
  return result;
}

}  // namespace msgc
