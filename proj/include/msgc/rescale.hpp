#pragma once

#include "msgc/types.hpp"

#include <vector>

namespace msgc {

/// Causal FIR filter b_0..b_q with unit DC gain.
struct FirFilter {
  std::vector<double> b;
  double cutoff = 0.5;  // nominal cutoff, cycles/sample

  int order() const { return static_cast<int>(b.size()) - 1; }

  /// Unit coefficient sum (1e-12), finite coefficients, nonempty.
  void validate() const;
};

/// Default filter order used by the multiscale sweeps.
inline constexpr int kDefaultFilterOrder = 6;

/// Hamming-windowed sinc lowpass of order q with cutoff 1/(2 tau), rescaled to unit DC gain.
FirFilter design_fir_hamming(int q, int tau);

/// q = tau - 1 moving average, b_l = 1/tau.
FirFilter averaging_filter(int tau);

/// Magnitude of the filter's frequency response at normalized frequency f (cycles/sample).
double magnitude_response(const FirFilter& filter, double f);

/// Output row n = sum_l b_l input(n + q - l), n = 0..N-q-1: rows lacking a full history are dropped.
TimeSeriesSet apply_filter(const TimeSeriesSet& data, const FirFilter& filter);

/// Keeps rows 0, tau, 2 tau, ...; length floor(N / tau); dt scaled by tau.
TimeSeriesSet downsample(const TimeSeriesSet& data, int tau);

}  // namespace msgc
