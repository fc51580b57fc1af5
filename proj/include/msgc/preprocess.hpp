#pragma once

#include "msgc/types.hpp"

#include <span>
#include <vector>

namespace msgc {

struct DetrendOptions {
  double tol = 1e-8;  // duality gap, relative to max(1, |y|^2 / 2)
  int max_iter = 200;
};

/// l1 trend filtering: returns y - x* where x* minimizes
///   1/2 sum (y - x)^2 + lambda sum |x_{n-1} - 2 x_n + x_{n+1}|.
/// Primal-dual interior point on the dual box-constrained problem.
VectorXd detrend_l1(const VectorXd& y, double lambda, const DetrendOptions& options = {});

/// The trend x* itself.
VectorXd l1_trend(const VectorXd& y, double lambda, const DetrendOptions& options = {});

/// Default detrending strength: 10 N.
inline double default_detrend_lambda(Index samples) { return 10.0 * static_cast<double>(samples); }

/// Zero mean, unit variance (N - 1 denominator) per channel.
TimeSeriesSet normalize(const TimeSeriesSet& data);

/// Linear interpolation onto t_min, t_min + dt, ... <= t_max; length
/// floor((t_max - t_min) / dt) + 1. Times must be strictly monotone (either
/// direction). The output carries dt.
TimeSeriesSet resample_uniform(std::span<const double> times, const TimeSeriesSet& data, double dt);

/// Grid length used by resample_uniform.
Index uniform_grid_length(double span, double dt);

}  // namespace msgc
