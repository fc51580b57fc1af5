#include "msgc/preprocess.hpp"

#include <Eigen/SparseCholesky>
#include <Eigen/SparseCore>

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace msgc {

namespace {

using SpMat = Eigen::SparseMatrix<double>;

// (n-2) x n second-difference operator.
SpMat second_difference(Index n) {
  SpMat d(n - 2, n);
  std::vector<Eigen::Triplet<double>> t;
  t.reserve(static_cast<std::size_t>(3 * (n - 2)));
  for (Index i = 0; i < n - 2; ++i) {
    t.emplace_back(i, i, 1.0);
    t.emplace_back(i, i + 1, -2.0);
    t.emplace_back(i, i + 2, 1.0);
  }
  d.setFromTriplets(t.begin(), t.end());
  return d;
}

}  // namespace

VectorXd detrend_l1(const VectorXd& y, double lambda, const DetrendOptions& options) {
  const Index n = y.size();
  if (n < 3) throw Error("l1 detrending needs at least 3 samples");
  if (!(lambda > 0.0)) throw Error("detrending lambda must be positive");
  if (!y.allFinite()) throw Error("detrending input contains non-finite values");

  // Dual: minimize 1/2 z' D D' z - y' D' z subject to |z_i| <= lambda; y - x* = D' z*.
  constexpr double kAlpha = 0.01;
  constexpr double kBeta = 0.5;
  constexpr double kMu = 2.0;
  constexpr int kMaxLineSearch = 40;

  const Index m = n - 2;
  const SpMat d = second_difference(n);
  const SpMat dt = d.transpose();
  const SpMat ddt = d * dt;
  const VectorXd dy = d * y;
  const double gap_tol = options.tol * std::max(1.0, 0.5 * y.squaredNorm());

  VectorXd z = VectorXd::Zero(m);
  VectorXd mu1 = VectorXd::Ones(m);
  VectorXd mu2 = VectorXd::Ones(m);
  VectorXd f1 = z.array() - lambda;
  VectorXd f2 = -z.array() - lambda;
  double t = 1e-10;
  double step = std::numeric_limits<double>::infinity();

  Eigen::SimplicialLDLT<SpMat> ldlt;
  ldlt.analyzePattern(ddt);
  Eigen::SimplicialLDLT<SpMat> dual_solver(ddt);
  if (dual_solver.info() != Eigen::Success) throw Error("l1 detrending: factorization failed");

  for (int it = 0; it < options.max_iter; ++it) {
    const VectorXd dtz = dt * z;
    const VectorXd ddtz = d * dtz;
    const VectorXd w = dy - (mu1 - mu2);
    const double pobj1 = 0.5 * w.dot(dual_solver.solve(w)) + lambda * (mu1 + mu2).sum();
    const double pobj2 = 0.5 * dtz.squaredNorm() + lambda * (dy - ddtz).cwiseAbs().sum();
    const double pobj = std::min(pobj1, pobj2);
    const double dobj = -0.5 * dtz.squaredNorm() + dy.dot(z);
    const double gap = pobj - dobj;
    if (gap <= gap_tol) return dtz;

    if (step >= 0.2) t = std::max(2.0 * static_cast<double>(m) * kMu / gap, 1.2 * t);

    SpMat s = ddt;
    for (Index i = 0; i < m; ++i) s.coeffRef(i, i) -= mu1(i) / f1(i) + mu2(i) / f2(i);
    const VectorXd r = -ddtz + dy + ((1.0 / t) / f1.array()).matrix() - ((1.0 / t) / f2.array()).matrix();
    ldlt.factorize(s);
    if (ldlt.info() != Eigen::Success) throw Error("l1 detrending: Newton system factorization failed");
    const VectorXd dz = ldlt.solve(r);
    const VectorXd dmu1 = -(mu1.array() + ((1.0 / t) + dz.array() * mu1.array()) / f1.array()).matrix();
    const VectorXd dmu2 = -(mu2.array() + ((1.0 / t) - dz.array() * mu2.array()) / f2.array()).matrix();

    auto residual_norm = [&](const VectorXd& zz, const VectorXd& m1, const VectorXd& m2,
                             const VectorXd& g1, const VectorXd& g2) {
      const VectorXd dual = ddt * zz - dy + m1 - m2;
      const VectorXd c1 = (-m1.array() * g1.array() - 1.0 / t).matrix();
      const VectorXd c2 = (-m2.array() * g2.array() - 1.0 / t).matrix();
      return std::sqrt(dual.squaredNorm() + c1.squaredNorm() + c2.squaredNorm());
    };
    const double res = residual_norm(z, mu1, mu2, f1, f2);

    step = 1.0;
    for (Index i = 0; i < m; ++i) {
      if (dmu1(i) < 0.0) step = std::min(step, -0.99 * mu1(i) / dmu1(i));
      if (dmu2(i) < 0.0) step = std::min(step, -0.99 * mu2(i) / dmu2(i));
    }
    VectorXd nz, nmu1, nmu2, nf1, nf2;
    for (int ls = 0; ls < kMaxLineSearch; ++ls) {
      nz = z + step * dz;
      nmu1 = mu1 + step * dmu1;
      nmu2 = mu2 + step * dmu2;
      nf1 = nz.array() - lambda;
      nf2 = -nz.array() - lambda;
      if (std::max(nf1.maxCoeff(), nf2.maxCoeff()) < 0.0 &&
          residual_norm(nz, nmu1, nmu2, nf1, nf2) <= (1.0 - kAlpha * step) * res) {
        break;
      }
      step *= kBeta;
    }
    z = std::move(nz);
    mu1 = std::move(nmu1);
    mu2 = std::move(nmu2);
    f1 = std::move(nf1);
    f2 = std::move(nf2);
  }
  std::ostringstream msg;
  msg << "l1 detrending did not converge in " << options.max_iter << " iterations";
  throw Error(msg.str());
}

VectorXd l1_trend(const VectorXd& y, double lambda, const DetrendOptions& options) {
  return y - detrend_l1(y, lambda, options);
}

TimeSeriesSet normalize(const TimeSeriesSet& data) {
  data.validate();
  if (data.samples() < 2) throw Error("normalization needs at least 2 samples");
  TimeSeriesSet out = data;
  const double denom = static_cast<double>(data.samples() - 1);
  for (Index c = 0; c < data.channels(); ++c) {
    auto col = out.values.col(c);
    const double mean = col.mean();
    col.array() -= mean;
    const double sd = std::sqrt(col.squaredNorm() / denom);
    const double scale = std::max(1.0, data.values.col(c).cwiseAbs().maxCoeff());
    if (!(sd > 1e-13 * scale)) throw Error("channel '" + data.labels[c] + "' is constant; cannot normalize");
    col /= sd;
  }
  return out;
}

Index uniform_grid_length(double span, double dt) {
  if (!(dt > 0.0)) throw Error("resampling interval must be positive");
  return static_cast<Index>(std::floor(span / dt + 1e-9)) + 1;
}

TimeSeriesSet resample_uniform(std::span<const double> times, const TimeSeriesSet& data, double dt) {
  data.validate();
  const Index n = data.samples();
  if (static_cast<Index>(times.size()) != n) throw Error("time axis length does not match the data");
  if (!(dt > 0.0)) throw Error("resampling interval must be positive");
  if (n < 2) throw Error("resampling needs at least 2 samples");

  const bool increasing = times[1] > times[0];
  for (Index i = 1; i < n; ++i) {
    const bool ok = increasing ? times[i] > times[i - 1] : times[i] < times[i - 1];
    if (!ok || !std::isfinite(times[i])) {
      std::ostringstream msg;
      msg << "time axis is not strictly monotone at row " << i + 1;
      throw Error(msg.str());
    }
  }
  std::vector<double> t(times.begin(), times.end());
  MatrixXd v = data.values;
  if (!increasing) {
    std::reverse(t.begin(), t.end());
    v = v.colwise().reverse().eval();
  }

  const Index len = uniform_grid_length(t.back() - t.front(), dt);
  TimeSeriesSet out;
  out.labels = data.labels;
  out.dt = dt;
  out.values.resize(len, data.channels());
  Index seg = 0;
  for (Index k = 0; k < len; ++k) {
    const double tk = std::min(t.front() + static_cast<double>(k) * dt, t.back());
    while (seg + 2 < n && t[seg + 1] < tk) ++seg;
    const double w = (tk - t[seg]) / (t[seg + 1] - t[seg]);
    out.values.row(k) = (1.0 - w) * v.row(seg) + w * v.row(seg + 1);
  }
  return out;
}

}  // namespace msgc
