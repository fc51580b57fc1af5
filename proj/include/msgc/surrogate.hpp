#pragma once

#include "msgc/gc.hpp"
#include "msgc/types.hpp"

#include <cstdint>
#include <span>
#include <vector>

namespace msgc {

struct SurrogateConfig {
  int n_surrogates = 100;
  int max_iterations = 1000;
  std::uint64_t seed = 0;
  std::vector<double> percentiles{5.0, 50.0, 95.0};

  /// n_surrogates >= 1, max_iterations >= 1, percentiles in (0, 100) and increasing.
  void validate() const;
};

struct IaaftResult {
  std::vector<double> values;
  int iterations = 0;
  bool converged = false;  // rank order stopped changing before the cap
};

/// Iterative amplitude-adjusted Fourier transform surrogate.
///
/// Starts from a seeded shuffle, then alternates imposing the original Fourier
/// amplitudes and rank-remapping onto the original values, until the rank order
/// repeats or `max_iterations` is reached. The returned series is the rank-remapped
/// iterate, so it is an exact permutation of the input.
IaaftResult iaaft_detailed(std::span<const double> series, int max_iterations, std::uint64_t seed);

std::vector<double> iaaft(std::span<const double> series, int max_iterations, std::uint64_t seed);

/// Seed of surrogate `index`, channel `channel`, derived from the base seed.
std::uint64_t surrogate_seed(std::uint64_t base, int index, int channel);

/// Every channel replaced by an independent IAAFT surrogate (cross-coupling destroyed).
TimeSeriesSet surrogate_set(const TimeSeriesSet& data, int index, const SurrogateConfig& config);

/// Linear interpolation between order statistics (p in [0, 100]).
double percentile(std::vector<double> values, double p);

struct BandCell {
  int tau = 1;
  int source = 0;
  int target = 0;
  double original = 0.0;
  std::vector<double> band;  // one value per requested percentile
  bool significant = false;  // original above the highest percentile
};

struct SignificanceBands {
  std::vector<double> percentiles;
  MultiscaleGcResult original;
  std::vector<BandCell> cells;  // scale-major, then source, then target
  int surrogates_used = 0;
  int surrogates_skipped = 0;
  std::vector<std::string> warnings;

  const BandCell* find(int tau, int source, int target) const;
};

/// Runs the ss-estimated sweep on the data and on n_surrogates independent surrogate
/// sets with identical settings, then assembles percentile bands per scale and
/// direction. Surrogates whose DARE fails are skipped and counted.
SignificanceBands significance_bands(const TimeSeriesSet& data, int q, const std::vector<int>& scales,
                                     int p_max, const SurrogateConfig& config,
                                     const MultiscaleOptions& options = {});

}  // namespace msgc
