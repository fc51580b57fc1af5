#pragma once

// Reference computations used by the tests. They share no code with the
// library's state-space path.

#include "msgc/linalg.hpp"
#include "msgc/state_space.hpp"
#include "msgc/var_model.hpp"

#include <Eigen/Dense>
#include <unsupported/Eigen/KroneckerProduct>

#include <cmath>
#include <random>
#include <vector>

namespace oracle {

using Eigen::MatrixXd;
using Eigen::VectorXd;
using Index = Eigen::Index;

// Companion form of a VAR(p).
inline MatrixXd companion(const msgc::VarModel& model) {
  const Index m = model.channels();
  const int p = model.order();
  MatrixXd f = MatrixXd::Zero(m * p, m * p);
  for (int k = 0; k < p; ++k) f.block(0, k * m, m, m) = model.coefficients[static_cast<std::size_t>(k)];
  if (p > 1) f.block(m, 0, m * (p - 1), m * (p - 1)).setIdentity();
  return f;
}

// Autocovariances G[k] = E[y_n y_{n-k}'] of a stable VAR for k = 0..max_lag,
// from a dense Kronecker solve of the companion Lyapunov equation followed by
// the Yule-Walker recursion.
inline std::vector<MatrixXd> var_autocovariance(const msgc::VarModel& model, int max_lag) {
  const Index m = model.channels();
  const int p = model.order();
  const MatrixXd f = companion(model);
  const Index n = f.rows();
  MatrixXd q = MatrixXd::Zero(n, n);
  q.topLeftCorner(m, m) = model.sigma;
  const MatrixXd kron = Eigen::kroneckerProduct(f, f);
  const MatrixXd lhs = MatrixXd::Identity(n * n, n * n) - kron;
  const VectorXd vq = Eigen::Map<const VectorXd>(q.data(), n * n);
  const VectorXd vpi = lhs.partialPivLu().solve(vq);
  const MatrixXd pi = Eigen::Map<const MatrixXd>(vpi.data(), n, n);

  std::vector<MatrixXd> g(static_cast<std::size_t>(std::max(max_lag, p - 1) + 1));
  // pi block (0, k) = E[y_n y_{n-k}'].
  for (int k = 0; k < p; ++k) g[static_cast<std::size_t>(k)] = pi.block(0, k * m, m, m);
  for (int k = p; k < static_cast<int>(g.size()); ++k) {
    MatrixXd acc = MatrixXd::Zero(m, m);
    for (int i = 1; i <= p; ++i) acc += model.coefficients[static_cast<std::size_t>(i - 1)] * g[static_cast<std::size_t>(k - i)];
    g[static_cast<std::size_t>(k)] = acc;
  }
  g.resize(static_cast<std::size_t>(max_lag + 1));
  return g;
}

// Autocovariance of H y for a VAR y.
inline std::vector<MatrixXd> observed_autocovariance(const msgc::VarModel& model, const MatrixXd& h, int max_lag) {
  auto g = var_autocovariance(model, max_lag);
  for (auto& gk : g) gk = h * gk * h.transpose();
  return g;
}

// Population error variance of predicting channel `target` from lags 1..lags of
// `predictors`, using autocovariances g (g[k] = E[y_n y_{n-k}']).
inline double regression_error_variance(const std::vector<MatrixXd>& g, int target,
                                        const std::vector<int>& predictors, int lags) {
  const Index k = static_cast<Index>(predictors.size());
  const Index dim = k * lags;
  auto cov = [&](int lag) -> MatrixXd {  // E[y_n y_{n-lag}'], any sign of lag
    return lag >= 0 ? g[static_cast<std::size_t>(lag)] : MatrixXd(g[static_cast<std::size_t>(-lag)].transpose());
  };
  MatrixXd r(dim, dim);
  VectorXd c(dim);
  for (int a = 0; a < lags; ++a) {
    const MatrixXd cy = cov(a + 1);  // E[y_n y_{n-a-1}']
    for (Index i = 0; i < k; ++i) c(a * k + i) = cy(target, predictors[static_cast<std::size_t>(i)]);
    for (int b = 0; b < lags; ++b) {
      const MatrixXd cab = cov(b - a);  // E[y_{n-a-1} y_{n-b-1}']
      for (Index i = 0; i < k; ++i) {
        for (Index j = 0; j < k; ++j) {
          r(a * k + i, b * k + j) = cab(predictors[static_cast<std::size_t>(i)], predictors[static_cast<std::size_t>(j)]);
        }
      }
    }
  }
  const VectorXd beta = r.ldlt().solve(c);
  return g[0](target, target) - c.dot(beta);
}

// Classical two-regression GC from source to target, conditioned on all others.
inline double two_regression_gc(const std::vector<MatrixXd>& g, int source, int target, int lags) {
  const int m = static_cast<int>(g[0].rows());
  std::vector<int> all, restricted;
  for (int c = 0; c < m; ++c) {
    all.push_back(c);
    if (c != source) restricted.push_back(c);
  }
  return std::log(regression_error_variance(g, target, restricted, lags) /
                  regression_error_variance(g, target, all, lags));
}

// Stabilizing root of the scalar DARE P = a^2 P + xi - (a P c + theta)^2 / (c^2 P + psi),
// written as the quadratic  c^2 P^2 + (psi - a^2 psi - xi c^2 + 2 a c theta) P - (xi psi - theta^2) = 0.
inline double scalar_dare(double a, double c, double xi, double psi, double theta) {
  const double qa = c * c;
  const double qb = psi - a * a * psi - xi * c * c + 2.0 * a * c * theta;
  const double qc = -(xi * psi - theta * theta);
  if (qa == 0.0) return -qc / qb;
  const double disc = std::sqrt(qb * qb - 4.0 * qa * qc);
  return (-qb + disc) / (2.0 * qa);
}

// Outputs y_n = C z_n + e_n, z_{n+1} = A z_n + K e_n from z_0 = 0, innovations given
// row-wise.
inline MatrixXd simulate_iss(const msgc::IssModel& iss, const MatrixXd& innovations) {
  VectorXd z = VectorXd::Zero(iss.a.rows());
  MatrixXd y(innovations.rows(), iss.c.rows());
  for (Index n = 0; n < innovations.rows(); ++n) {
    const VectorXd e = innovations.row(n).transpose();
    y.row(n) = (iss.c * z + e).transpose();
    z = iss.a * z + iss.k * e;
  }
  return y;
}

inline MatrixXd gaussian(Index rows, Index cols, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  MatrixXd out(rows, cols);
  for (Index r = 0; r < rows; ++r) {
    for (Index c = 0; c < cols; ++c) out(r, c) = nd(rng);
  }
  return out;
}

// Sample autocovariance E[y_n y_{n-k}'] of a (demeaned) panel.
inline MatrixXd sample_autocovariance(const MatrixXd& y, int k) {
  const Index n = y.rows();
  const MatrixXd d = y.rowwise() - y.colwise().mean();
  return d.bottomRows(n - k).transpose() * d.topRows(n - k) / static_cast<double>(n - k);
}

// Random SS model with spectral radius of A equal to `radius`, state dimension m,
// M observed channels, and a positive definite joint noise covariance.
inline msgc::SsModel random_stable_ss(std::mt19937_64& rng, Index m, Index obs, double radius) {
  std::normal_distribution<double> nd;
  auto random = [&](Index r, Index c) {
    MatrixXd x(r, c);
    for (Index i = 0; i < r; ++i) {
      for (Index j = 0; j < c; ++j) x(i, j) = nd(rng);
    }
    return x;
  };
  msgc::SsModel ss;
  ss.a = random(m, m);
  ss.a *= radius / msgc::linalg::spectral_radius(ss.a);
  ss.c = random(obs, m);
  const MatrixXd l = random(m + obs, m + obs) / std::sqrt(static_cast<double>(m + obs));
  const MatrixXd q = l * l.transpose() + 0.1 * MatrixXd::Identity(m + obs, m + obs);
  ss.xi = q.topLeftCorner(m, m);
  ss.theta = q.topRightCorner(m, obs);
  ss.psi = q.bottomRightCorner(obs, obs);
  return ss;
}

}  // namespace oracle
