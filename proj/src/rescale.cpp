#include "msgc/rescale.hpp"

#include <cmath>
#include <complex>
#include <numbers>
#include <numeric>
#include <sstream>

namespace msgc {

namespace {

// sin(pi x) / (pi x), exactly zero at nonzero integers.
double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double nearest = std::round(x);
  if (std::abs(x - nearest) < 1e-12) return 0.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

}  // namespace

void FirFilter::validate() const {
  if (b.empty()) throw Error("FIR filter has no coefficients");
  double sum = 0.0;
  for (double v : b) {
    if (!std::isfinite(v)) throw Error("FIR filter coefficient is not finite");
    sum += v;
  }
  if (std::abs(sum - 1.0) > 1e-12) {
    std::ostringstream msg;
    msg << "FIR filter must have unit DC gain (coefficient sum " << sum << ")";
    throw Error(msg.str());
  }
}

FirFilter design_fir_hamming(int q, int tau) {
  if (q < 0) throw Error("filter order must be nonnegative");
  if (tau < 1) throw Error("scale factor must be a positive integer");
  FirFilter filter;
  filter.cutoff = 0.5 / tau;
  if (q == 0) {
    filter.b = {1.0};
    return filter;
  }
  filter.b.resize(static_cast<std::size_t>(q) + 1);
  const double half = 0.5 * q;
  for (int l = 0; l <= q; ++l) {
    const double window = 0.54 - 0.46 * std::cos(2.0 * std::numbers::pi * l / q);
    filter.b[l] = window * sinc(2.0 * filter.cutoff * (l - half));
  }
  const double sum = std::accumulate(filter.b.begin(), filter.b.end(), 0.0);
  for (double& v : filter.b) v /= sum;
  // Enforce exact symmetry after the rescaling.
  for (int l = 0; l < q - l; ++l) {
    const double avg = 0.5 * (filter.b[l] + filter.b[q - l]);
    filter.b[l] = filter.b[q - l] = avg;
  }
  return filter;
}

FirFilter averaging_filter(int tau) {
  if (tau < 1) throw Error("scale factor must be a positive integer");
  FirFilter filter;
  filter.b.assign(static_cast<std::size_t>(tau), 1.0 / tau);
  filter.cutoff = 0.5 / tau;
  return filter;
}

double magnitude_response(const FirFilter& filter, double f) {
  std::complex<double> h = 0.0;
  for (std::size_t l = 0; l < filter.b.size(); ++l) {
    h += filter.b[l] * std::polar(1.0, -2.0 * std::numbers::pi * f * static_cast<double>(l));
  }
  return std::abs(h);
}

TimeSeriesSet apply_filter(const TimeSeriesSet& data, const FirFilter& filter) {
  filter.validate();
  const Index q = filter.order();
  const Index n = data.samples();
  if (n <= q) {
    std::ostringstream msg;
    msg << "series of length " << n << " is too short for a filter of order " << q;
    throw Error(msg.str());
  }
  TimeSeriesSet out;
  out.labels = data.labels;
  out.dt = data.dt;
  out.values = MatrixXd::Zero(n - q, data.channels());
  for (Index l = 0; l <= q; ++l) {
    out.values += filter.b[static_cast<std::size_t>(l)] * data.values.middleRows(q - l, n - q);
  }
  return out;
}

TimeSeriesSet downsample(const TimeSeriesSet& data, int tau) {
  if (tau < 1) throw Error("scale factor must be a positive integer");
  const Index n = data.samples();
  if (n < tau) throw Error("series is shorter than the downsampling factor");
  const Index len = n / tau;
  TimeSeriesSet out;
  out.labels = data.labels;
  if (data.dt) out.dt = *data.dt * tau;
  out.values.resize(len, data.channels());
  for (Index r = 0; r < len; ++r) out.values.row(r) = data.values.row(r * tau);
  return out;
}

}  // namespace msgc
