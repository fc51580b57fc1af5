#include "msgc/surrogate.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <numbers>

using namespace msgc;

namespace {

std::vector<double> ar1(std::size_t n, double a, std::uint64_t seed) {
  const MatrixXd e = oracle::gaussian(static_cast<Index>(n), 1, seed);
  std::vector<double> x(n);
  double prev = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    prev = a * prev + e(static_cast<Index>(i), 0);
    x[i] = prev;
  }
  return x;
}

// Periodogram |X_k|^2 by direct summation.
std::vector<double> periodogram(const std::vector<double>& x) {
  const std::size_t n = x.size();
  std::vector<double> p(n / 2 + 1);
  for (std::size_t k = 0; k < p.size(); ++k) {
    std::complex<double> acc = 0.0;
    for (std::size_t t = 0; t < n; ++t) {
      const double w = -2.0 * std::numbers::pi * static_cast<double>(k * t % n) / static_cast<double>(n);
      acc += x[t] * std::complex<double>(std::cos(w), std::sin(w));
    }
    p[k] = std::norm(acc);
  }
  return p;
}

double relative_spectrum_error(const std::vector<double>& a, const std::vector<double>& b) {
  const auto pa = periodogram(a);
  const auto pb = periodogram(b);
  double num = 0.0, den = 0.0;
  // DC is fixed by the value multiset, so skip it.
  for (std::size_t k = 1; k < pa.size(); ++k) {
    num += std::abs(pa[k] - pb[k]);
    den += pa[k];
  }
  return num / den;
}

TimeSeriesSet independent_ar1_pair(Index n, std::uint64_t seed) {
  MatrixXd y(n, 2);
  const auto a = ar1(static_cast<std::size_t>(n), 0.6, seed);
  const auto b = ar1(static_cast<std::size_t>(n), -0.4, seed + 1000);
  for (Index i = 0; i < n; ++i) {
    y(i, 0) = a[static_cast<std::size_t>(i)];
    y(i, 1) = b[static_cast<std::size_t>(i)];
  }
  return make_series(y);
}

}  // namespace

TEST(Iaaft, ExactPermutationOfInput) {
  const auto x = ar1(1000, 0.7, 3);
  const IaaftResult r = iaaft_detailed(x, 1000, 11);
  auto a = x;
  auto b = r.values;
  std::sort(a.begin(), a.end());
  std::sort(b.begin(), b.end());
  EXPECT_EQ(a, b);
  EXPECT_GE(r.iterations, 1);
  EXPECT_LE(r.iterations, 1000);
}

TEST(Iaaft, PreservesPowerSpectrum) {
  for (std::size_t n : {1000u, 999u}) {
    const auto x = ar1(n, 0.7, 5);
    const IaaftResult r = iaaft_detailed(x, 1000, 17);
    EXPECT_TRUE(r.converged) << n;
    EXPECT_LT(relative_spectrum_error(x, r.values), 0.05) << n;
    // A plain shuffle loses the spectrum.
    auto shuffled = x;
    std::mt19937_64 rng(1);
    std::shuffle(shuffled.begin(), shuffled.end(), rng);
    EXPECT_GT(relative_spectrum_error(x, shuffled), 0.3) << n;
  }
}

TEST(Iaaft, SkewedAmplitudeDistribution) {
  auto x = ar1(800, 0.5, 8);
  for (double& v : x) v = std::exp(v);
  const auto s = iaaft(x, 1000, 2);
  // Heavy tails leave a larger residual mismatch after the final rank remap,
  // still far below that of a shuffle.
  auto shuffled = x;
  std::mt19937_64 rng(3);
  std::shuffle(shuffled.begin(), shuffled.end(), rng);
  EXPECT_LT(relative_spectrum_error(x, s), 0.2);
  EXPECT_LT(2.0 * relative_spectrum_error(x, s), relative_spectrum_error(x, shuffled));
  EXPECT_EQ(*std::min_element(s.begin(), s.end()), *std::min_element(x.begin(), x.end()));
}

TEST(Iaaft, SeedsControlTheOutput) {
  const auto x = ar1(500, 0.5, 9);
  EXPECT_EQ(iaaft(x, 1000, 4), iaaft(x, 1000, 4));
  EXPECT_NE(iaaft(x, 1000, 4), iaaft(x, 1000, 5));
}

TEST(Iaaft, IterationCapIsHonored) {
  const auto x = ar1(500, 0.5, 9);
  const IaaftResult r = iaaft_detailed(x, 1, 4);
  EXPECT_EQ(r.iterations, 1);
  EXPECT_FALSE(r.converged);
}

TEST(Iaaft, RejectsBadInput) {
  EXPECT_THROW(iaaft(std::vector<double>(50, 1.25), 100, 0), Error);
  EXPECT_THROW(iaaft(std::vector<double>{1, 2, 3, 4, 5, 6, 7}, 100, 0), Error);
  EXPECT_THROW(iaaft(std::vector<double>{1, 2, 3, 4, 5, 6, 7, NAN}, 100, 0), Error);
  EXPECT_THROW(iaaft(ar1(20, 0.1, 1), 0, 0), Error);
}

TEST(SurrogateSet, DestroysCrossCorrelation) {
  SimulationConfig cfg = benchmark_config(Generator::uni);
  cfg.samples = 4000;
  const TimeSeriesSet d = simulate_benchmark(cfg);
  SurrogateConfig sc;
  const TimeSeriesSet s = surrogate_set(d, 0, sc);
  const double n = static_cast<double>(d.samples());
  // The original carries a clear lag-1 coupling.
  const auto corr = [](const MatrixXd& y, int lag) {
    const MatrixXd g = oracle::sample_autocovariance(y, lag);
    const MatrixXd g0 = oracle::sample_autocovariance(y, 0);
    return g(1, 0) / std::sqrt(g0(0, 0) * g0(1, 1));
  };
  EXPECT_GT(corr(d.values, 1), 0.2);
  for (int lag = 0; lag <= 5; ++lag) EXPECT_LT(std::abs(corr(s.values, lag)), 3.0 / std::sqrt(n)) << lag;
  EXPECT_EQ(s.labels, d.labels);
}

TEST(SurrogateSet, ReproducibleAndIndexed) {
  const TimeSeriesSet d = independent_ar1_pair(300, 1);
  SurrogateConfig sc;
  sc.seed = 42;
  EXPECT_TRUE((surrogate_set(d, 3, sc).values.array() == surrogate_set(d, 3, sc).values.array()).all());
  EXPECT_FALSE((surrogate_set(d, 3, sc).values.array() == surrogate_set(d, 4, sc).values.array()).all());
  EXPECT_NE(surrogate_seed(42, 3, 0), surrogate_seed(42, 3, 1));
  EXPECT_NE(surrogate_seed(42, 3, 0), surrogate_seed(43, 3, 0));
  EXPECT_NE(surrogate_seed(1, 0, 0), surrogate_seed(0, 1, 0));
}

TEST(Percentile, LinearInterpolation) {
  EXPECT_DOUBLE_EQ(percentile({3.0, 1.0, 2.0}, 50), 2.0);
  EXPECT_DOUBLE_EQ(percentile({1.0, 2.0, 3.0, 4.0}, 50), 2.5);
  EXPECT_DOUBLE_EQ(percentile({0.0, 10.0}, 95), 9.5);
  EXPECT_DOUBLE_EQ(percentile({0.0, 10.0}, 0), 0.0);
  EXPECT_DOUBLE_EQ(percentile({0.0, 10.0}, 100), 10.0);
  EXPECT_DOUBLE_EQ(percentile({7.0}, 5), 7.0);
  EXPECT_THROW(percentile({}, 50), Error);
}

TEST(SurrogateConfigType, Validation) {
  SurrogateConfig c;
  EXPECT_NO_THROW(c.validate());
  c.n_surrogates = 0;
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.percentiles = {95, 5};
  EXPECT_THROW(c.validate(), Error);
  c.percentiles = {0, 50};
  EXPECT_THROW(c.validate(), Error);
  c = {};
  c.max_iterations = 0;
  EXPECT_THROW(c.validate(), Error);
}

TEST(Bands, SingleSurrogateCollapses) {
  const TimeSeriesSet d = independent_ar1_pair(400, 2);
  SurrogateConfig sc;
  sc.n_surrogates = 1;
  const auto b = significance_bands(d, 6, {1, 2, 3}, 5, sc);
  ASSERT_EQ(b.cells.size(), 6u);
  EXPECT_EQ(b.surrogates_used, 1);
  for (const auto& c : b.cells) {
    ASSERT_EQ(c.band.size(), 3u);
    EXPECT_EQ(c.band[0], c.band[1]);
    EXPECT_EQ(c.band[1], c.band[2]);
    EXPECT_EQ(c.original, b.original.gc(c.tau, c.source, c.target));
  }
  ASSERT_NE(b.find(2, 1, 0), nullptr);
  EXPECT_EQ(b.find(2, 1, 0)->tau, 2);
  EXPECT_EQ(b.find(9, 0, 1), nullptr);
}

TEST(Bands, CellsAreOrderedAndBandsMonotone) {
  const TimeSeriesSet d = independent_ar1_pair(500, 3);
  SurrogateConfig sc;
  sc.n_surrogates = 20;
  const auto b = significance_bands(d, 6, {1, 2, 4}, 5, sc);
  ASSERT_EQ(b.cells.size(), 6u);
  EXPECT_EQ(b.cells[0].tau, 1);
  EXPECT_EQ(b.cells[0].source, 0);
  EXPECT_EQ(b.cells[1].source, 1);
  EXPECT_EQ(b.cells[5].tau, 4);
  for (const auto& c : b.cells) {
    EXPECT_LE(c.band[0], c.band[1]);
    EXPECT_LE(c.band[1], c.band[2]);
    EXPECT_EQ(c.significant, c.original > c.band[2]);
  }
}

TEST(Bands, SerialAndParallelMatch) {
  const TimeSeriesSet d = independent_ar1_pair(400, 4);
  SurrogateConfig sc;
  sc.n_surrogates = 8;
  MultiscaleOptions serial, parallel;
  serial.execution = Execution::serial;
  parallel.execution = Execution::parallel;
  const auto a = significance_bands(d, 6, {1, 2}, 5, sc, serial);
  const auto b = significance_bands(d, 6, {1, 2}, 5, sc, parallel);
  for (std::size_t i = 0; i < a.cells.size(); ++i) EXPECT_EQ(a.cells[i].band, b.cells[i].band);
}

TEST(Bands, DetectsUnidirectionalCoupling) {
  SimulationConfig cfg = benchmark_config(Generator::uni);
  cfg.samples = 2000;
  cfg.seed = 12;
  SurrogateConfig sc;
  sc.n_surrogates = 40;
  const auto b = significance_bands(simulate_benchmark(cfg), 6, {1, 2, 3, 4}, 10, sc);
  for (int tau : {1, 2, 3, 4}) EXPECT_TRUE(b.find(tau, 0, 1)->significant) << tau;
}
