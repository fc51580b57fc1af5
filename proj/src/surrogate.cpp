#include "msgc/surrogate.hpp"

#include "msgc/parallel.hpp"

#include <unsupported/Eigen/FFT>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numeric>
#include <optional>
#include <random>
#include <sstream>

namespace msgc {

void SurrogateConfig::validate() const {
  if (n_surrogates < 1) throw Error("number of surrogates must be at least 1");
  if (max_iterations < 1) throw Error("IAAFT iteration cap must be at least 1");
  if (percentiles.empty()) throw Error("at least one percentile is required");
  for (std::size_t i = 0; i < percentiles.size(); ++i) {
    if (!(percentiles[i] > 0.0 && percentiles[i] < 100.0)) {
      throw Error("percentiles must lie strictly between 0 and 100");
    }
    if (i > 0 && percentiles[i] <= percentiles[i - 1]) throw Error("percentiles must be increasing");
  }
}

namespace {

// Indices that sort `v` ascending (ties broken by index).
std::vector<int> argsort(const std::vector<double>& v) {
  std::vector<int> idx(v.size());
  std::iota(idx.begin(), idx.end(), 0);
  std::stable_sort(idx.begin(), idx.end(), [&](int a, int b) { return v[a] < v[b]; });
  return idx;
}

}  // namespace

IaaftResult iaaft_detailed(std::span<const double> series, int max_iterations, std::uint64_t seed) {
  const std::size_t n = series.size();
  if (n < 8) throw Error("IAAFT needs at least 8 samples");
  if (max_iterations < 1) throw Error("IAAFT iteration cap must be at least 1");
  for (double v : series) {
    if (!std::isfinite(v)) throw Error("IAAFT input contains non-finite values");
  }
  const auto [lo, hi] = std::minmax_element(series.begin(), series.end());
  if (*lo == *hi) throw Error("IAAFT input series is constant");

  std::vector<double> original(series.begin(), series.end());
  std::vector<double> sorted = original;
  std::sort(sorted.begin(), sorted.end());

  Eigen::FFT<double> fft;
  std::vector<std::complex<double>> spectrum;
  fft.fwd(spectrum, original);
  std::vector<double> amplitude(n);
  for (std::size_t k = 0; k < n; ++k) amplitude[k] = std::abs(spectrum[k]);

  IaaftResult result;
  result.values = original;
  std::mt19937_64 rng(seed);
  std::shuffle(result.values.begin(), result.values.end(), rng);

  std::vector<int> previous_rank;
  std::vector<double> candidate;
  for (int it = 1; it <= max_iterations; ++it) {
    fft.fwd(spectrum, result.values);
    for (std::size_t k = 0; k < n; ++k) {
      const double mag = std::abs(spectrum[k]);
      spectrum[k] = mag > 0.0 ? spectrum[k] * (amplitude[k] / mag) : std::complex<double>(amplitude[k], 0.0);
    }
    fft.inv(candidate, spectrum);
    const std::vector<int> rank = argsort(candidate);
    for (std::size_t i = 0; i < n; ++i) result.values[static_cast<std::size_t>(rank[i])] = sorted[i];
    result.iterations = it;
    if (rank == previous_rank) {
      result.converged = true;
      break;
    }
    previous_rank = rank;
  }
  return result;
}

std::vector<double> iaaft(std::span<const double> series, int max_iterations, std::uint64_t seed) {
  return iaaft_detailed(series, max_iterations, seed).values;
}

std::uint64_t surrogate_seed(std::uint64_t base, int index, int channel) {
  std::seed_seq seq{static_cast<std::uint32_t>(base), static_cast<std::uint32_t>(base >> 32),
                    static_cast<std::uint32_t>(index), static_cast<std::uint32_t>(channel)};
  std::uint32_t words[2];
  seq.generate(words, words + 2);
  return (static_cast<std::uint64_t>(words[0]) << 32) | words[1];
}

TimeSeriesSet surrogate_set(const TimeSeriesSet& data, int index, const SurrogateConfig& config) {
  TimeSeriesSet out = data;
  for (Index c = 0; c < data.channels(); ++c) {
    const VectorXd column = data.values.col(c);
    const auto surrogate = iaaft(std::span<const double>(column.data(), static_cast<std::size_t>(column.size())),
                                 config.max_iterations,
                                 surrogate_seed(config.seed, index, static_cast<int>(c)));
    out.values.col(c) = Eigen::Map<const VectorXd>(surrogate.data(), column.size());
  }
  return out;
}

double percentile(std::vector<double> values, double p) {
  if (values.empty()) throw Error("percentile of an empty sample");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * std::clamp(p, 0.0, 100.0) / 100.0;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

const BandCell* SignificanceBands::find(int tau, int source, int target) const {
  for (const auto& c : cells) {
    if (c.tau == tau && c.source == source && c.target == target) return &c;
  }
  return nullptr;
}

SignificanceBands significance_bands(const TimeSeriesSet& data, int q, const std::vector<int>& scales,
                                     int p_max, const SurrogateConfig& config,
                                     const MultiscaleOptions& options) {
  config.validate();
  SignificanceBands bands;
  bands.percentiles = config.percentiles;
  // Surrogates run in parallel; each sweep inside runs serially.
  MultiscaleOptions inner = options;
  inner.execution = Execution::serial;
  bands.original = multiscale_gc_estimated(data, q, scales, p_max, inner);

  std::vector<std::optional<MultiscaleGcResult>> runs(static_cast<std::size_t>(config.n_surrogates));
  std::vector<std::string> failures(runs.size());
  for_each_index(config.n_surrogates, options.execution, [&](Index s) {
    const TimeSeriesSet surrogate = surrogate_set(data, static_cast<int>(s), config);
    try {
      runs[static_cast<std::size_t>(s)] = multiscale_gc_estimated(surrogate, q, scales, p_max, inner);
    } catch (const DareError& e) {
      failures[static_cast<std::size_t>(s)] = e.what();
    }
  });

  for (std::size_t s = 0; s < runs.size(); ++s) {
    if (runs[s]) {
      ++bands.surrogates_used;
    } else {
      ++bands.surrogates_skipped;
      bands.warnings.push_back("surrogate " + std::to_string(s) + " skipped: " + failures[s]);
    }
  }
  if (bands.surrogates_used == 0) throw Error("every surrogate failed; no significance bands");

  for (const auto& scale : bands.original.scales) {
    for (const auto& value : scale.values) {
      BandCell cell;
      cell.tau = scale.tau;
      cell.source = value.source;
      cell.target = value.target;
      cell.original = value.f;
      std::vector<double> sample;
      for (const auto& run : runs) {
        if (run) sample.push_back(run->gc(scale.tau, value.source, value.target));
      }
      for (double p : config.percentiles) cell.band.push_back(percentile(sample, p));
      cell.significant = cell.original > cell.band.back();
      bands.cells.push_back(std::move(cell));
    }
  }
  return bands;
}

}  // namespace msgc
