#include "msgc/preprocess.hpp"
#include "oracles.hpp"

#include <gtest/gtest.h>

#include <cmath>
#include <numbers>

using namespace msgc;

namespace {

// Second-difference operator, (n-2) x n.
MatrixXd second_difference(Index n) {
  MatrixXd d = MatrixXd::Zero(n - 2, n);
  for (Index i = 0; i < n - 2; ++i) {
    d(i, i) = 1.0;
    d(i, i + 1) = -2.0;
    d(i, i + 2) = 1.0;
  }
  return d;
}

// Residual of the least-squares straight-line fit.
VectorXd line_residual(const VectorXd& y) {
  const Index n = y.size();
  MatrixXd x(n, 2);
  x.col(0).setOnes();
  x.col(1) = VectorXd::LinSpaced(n, 0.0, static_cast<double>(n - 1));
  return y - x * x.colPivHouseholderQr().solve(y);
}

double max_abs(const VectorXd& v) { return v.cwiseAbs().maxCoeff(); }

}  // namespace

TEST(Detrend, LinearInputLeavesNothing) {
  const VectorXd y = VectorXd::LinSpaced(200, -3.0, 5.0);
  EXPECT_LT(max_abs(detrend_l1(y, 50.0)), 1e-6);
  EXPECT_LT(max_abs(l1_trend(y, 50.0) - y), 1e-6);
}

TEST(Detrend, RecoversOscillationOnLinearTrend) {
  const Index n = 1000;
  VectorXd trend(n), wave(n);
  for (Index i = 0; i < n; ++i) {
    const double t = static_cast<double>(i);
    trend(i) = 3.0 + 0.02 * t;
    wave(i) = 0.1 * std::sin(2.0 * std::numbers::pi * t / 20.0);
  }
  const VectorXd r = detrend_l1(trend + wave, default_detrend_lambda(n));
  EXPECT_LT((r - wave).norm() / wave.norm(), 0.05);
}

TEST(Detrend, SmallLambdaFollowsTheData) {
  const VectorXd y = oracle::gaussian(100, 1, 4).col(0);
  EXPECT_LT(max_abs(detrend_l1(y, 1e-6)), 1e-4);
}

TEST(Detrend, LargeLambdaGivesLineFit) {
  const VectorXd y = oracle::gaussian(150, 1, 5).col(0);
  const MatrixXd d = second_difference(y.size());
  const MatrixXd ddt = d * d.transpose();
  const double lambda_max = max_abs(ddt.ldlt().solve(d * y));
  const VectorXd r = detrend_l1(y, 1.5 * lambda_max);
  EXPECT_LT(max_abs(r - line_residual(y)), 1e-5 * std::max(1.0, max_abs(y)));
}

// Optimality: y - x = D'z with |z| <= lambda and z_i = lambda sign((Dx)_i) wherever Dx is nonzero.
TEST(Detrend, SatisfiesOptimalityConditions) {
  const Index n = 300;
  VectorXd y = oracle::gaussian(n, 1, 6).col(0);
  for (Index i = 0; i < n; ++i) y(i) += 0.05 * static_cast<double>(i) + (i > 150 ? 4.0 : 0.0);
  const double lambda = 20.0;
  const VectorXd x = l1_trend(y, lambda);
  const MatrixXd d = second_difference(n);
  const VectorXd z = (d * d.transpose()).ldlt().solve(d * (y - x));
  EXPECT_LT(max_abs(d.transpose() * z - (y - x)), 1e-6);
  EXPECT_LT(max_abs(z), lambda * (1.0 + 1e-4));
  const VectorXd dx = d * x;
  const double kink = 1e-4 * max_abs(dx);
  int kinks = 0;
  for (Index i = 0; i < n - 2; ++i) {
    if (std::abs(dx(i)) > kink) {
      ++kinks;
      EXPECT_NEAR(z(i), lambda * (dx(i) > 0 ? 1.0 : -1.0), 1e-3 * lambda) << i;
    }
  }
  EXPECT_GT(kinks, 0);
  EXPECT_LT(kinks, n / 3);
}

TEST(Detrend, RejectsBadArguments) {
  EXPECT_THROW(detrend_l1(VectorXd::Ones(2), 1.0), Error);
  EXPECT_THROW(detrend_l1(VectorXd::Ones(10), 0.0), Error);
  VectorXd y = VectorXd::Ones(10);
  y(3) = NAN;
  EXPECT_THROW(detrend_l1(y, 1.0), Error);
  EXPECT_EQ(default_detrend_lambda(700), 7000.0);
}

TEST(Normalize, ZeroMeanUnitVariance) {
  MatrixXd y = oracle::gaussian(500, 3, 7);
  y.col(0) = 5.0 * y.col(0).array() + 100.0;
  y.col(2) *= 1e-3;
  const TimeSeriesSet out = normalize(make_series(y, 2.0));
  for (Index c = 0; c < 3; ++c) {
    const VectorXd col = out.values.col(c);
    EXPECT_NEAR(col.mean(), 0.0, 1e-12);
    EXPECT_NEAR((col.array() - col.mean()).square().sum() / 499.0, 1.0, 1e-12);
  }
  EXPECT_EQ(out.dt, 2.0);
  EXPECT_EQ(out.labels, (std::vector<std::string>{"y1", "y2", "y3"}));
}

TEST(Normalize, IsIdempotentAndAffineInvariant) {
  const MatrixXd y = oracle::gaussian(200, 2, 8);
  const TimeSeriesSet a = normalize(make_series(y));
  const TimeSeriesSet b = normalize(make_series((3.0 * y.array() - 7.0).matrix()));
  EXPECT_LT((a.values - b.values).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_LT((normalize(a).values - a.values).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Normalize, ConstantChannelIsAnError) {
  MatrixXd y = oracle::gaussian(50, 2, 9);
  y.col(1).setConstant(3.0);
  try {
    normalize(make_series(y));
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("y2"), std::string::npos);
  }
}

TEST(Resample, GridLength) {
  EXPECT_EQ(uniform_grid_length(798500.0, 729.77), 1095);
  EXPECT_EQ(uniform_grid_length(10.0, 1.0), 11);
  EXPECT_EQ(uniform_grid_length(10.0, 3.0), 4);
}

TEST(Resample, UniformInputIsUnchanged) {
  const MatrixXd y = oracle::gaussian(20, 2, 10);
  std::vector<double> t(20);
  for (std::size_t i = 0; i < 20; ++i) t[i] = 0.5 * static_cast<double>(i);
  const TimeSeriesSet out = resample_uniform(t, make_series(y), 0.5);
  ASSERT_EQ(out.samples(), 20);
  EXPECT_LT((out.values - y).cwiseAbs().maxCoeff(), 1e-12);
  EXPECT_EQ(out.dt, 0.5);
}

TEST(Resample, LinearInterpolation) {
  MatrixXd y(3, 1);
  y << 0.0, 10.0, 4.0;
  const std::vector<double> t{0.0, 1.0, 3.0};
  const TimeSeriesSet out = resample_uniform(t, make_series(y), 0.5);
  ASSERT_EQ(out.samples(), 7);
  const std::vector<double> expected{0.0, 5.0, 10.0, 8.5, 7.0, 5.5, 4.0};
  for (Index i = 0; i < 7; ++i) EXPECT_NEAR(out.values(i, 0), expected[static_cast<std::size_t>(i)], 1e-12);
}

TEST(Resample, IrregularAgeAxis) {
  // Ages decreasing toward the present; 1095 points at dt = 729.77 over 798500 years.
  const Index n = 5000;
  std::vector<double> t(static_cast<std::size_t>(n));
  MatrixXd y(n, 1);
  for (Index i = 0; i < n; ++i) {
    const double u = static_cast<double>(i) / static_cast<double>(n - 1);
    t[static_cast<std::size_t>(i)] = 798500.0 * (1.0 - u * u);
    y(i, 0) = 2.0 * t[static_cast<std::size_t>(i)] + 1.0;
  }
  const TimeSeriesSet out = resample_uniform(t, make_series(y), 729.77);
  ASSERT_EQ(out.samples(), 1095);
  for (Index k = 0; k < out.samples(); ++k) EXPECT_NEAR(out.values(k, 0), 2.0 * 729.77 * static_cast<double>(k) + 1.0, 1e-6);
}

TEST(Resample, Errors) {
  const TimeSeriesSet d = make_series(MatrixXd::Ones(4, 1));
  try {
    resample_uniform(std::vector<double>{0.0, 1.0, 1.0, 2.0}, d, 0.5);
    FAIL();
  } catch (const Error& e) {
    EXPECT_NE(std::string(e.what()).find("row"), std::string::npos) << e.what();
  }
  EXPECT_THROW(resample_uniform(std::vector<double>{0.0, 2.0, 1.0, 3.0}, d, 0.5), Error);
  EXPECT_THROW(resample_uniform(std::vector<double>{0.0, 1.0, 2.0}, d, 0.5), Error);
  EXPECT_THROW(resample_uniform(std::vector<double>{0.0, 1.0, 2.0, 3.0}, d, 0.0), Error);
}
