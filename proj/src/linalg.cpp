#include "msgc/linalg.hpp"

#include <Eigen/Eigenvalues>

#include <cmath>
#include <sstream>

namespace msgc {

void TimeSeriesSet::validate() const {
  if (values.rows() < 1 || values.cols() < 1) throw Error("time series set is empty");
  if (!values.allFinite()) throw Error("time series set contains non-finite values");
  if (static_cast<Index>(labels.size()) != values.cols()) {
    throw Error("label count does not match channel count");
  }
  for (std::size_t a = 0; a < labels.size(); ++a) {
    for (std::size_t b = a + 1; b < labels.size(); ++b) {
      if (labels[a] == labels[b]) throw Error("duplicate channel label '" + labels[a] + "'");
    }
  }
  if (dt && !(*dt > 0.0)) throw Error("sampling interval must be positive");
}

TimeSeriesSet make_series(MatrixXd values, std::optional<double> dt) {
  TimeSeriesSet out;
  out.labels.reserve(values.cols());
  for (Index c = 0; c < values.cols(); ++c) out.labels.push_back("y" + std::to_string(c + 1));
  out.values = std::move(values);
  out.dt = dt;
  return out;
}

TimeSeriesSet select_channels(const TimeSeriesSet& data, const std::vector<int>& keep) {
  TimeSeriesSet out;
  out.values.resize(data.samples(), static_cast<Index>(keep.size()));
  for (std::size_t k = 0; k < keep.size(); ++k) {
    if (keep[k] < 0 || keep[k] >= data.channels()) {
      std::ostringstream msg;
      msg << "channel index " << keep[k] << " out of range";
      throw Error(msg.str());
    }
    out.values.col(static_cast<Index>(k)) = data.values.col(keep[k]);
    out.labels.push_back(data.labels[keep[k]]);
  }
  out.dt = data.dt;
  return out;
}

namespace linalg {

double spectral_radius(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::EigenSolver<MatrixXd> es(a, false);
  return es.eigenvalues().cwiseAbs().maxCoeff();
}

MatrixXd matrix_power(const MatrixXd& a, int n) {
  MatrixXd result = MatrixXd::Identity(a.rows(), a.cols());
  MatrixXd base = a;
  while (n > 0) {
    if (n & 1) result = result * base;
    n >>= 1;
    if (n > 0) base = base * base;
  }
  return result;
}

MatrixXd lyapunov(const MatrixXd& a, const MatrixXd& q) {
  // X = sum_k A^k Q A^kT, accumulated two blocks at a time.
  MatrixXd x = q;
  MatrixXd ak = a;
  for (int it = 0; it < 64; ++it) {
    MatrixXd next = x + ak * x * ak.transpose();
    const double change = (next - x).cwiseAbs().maxCoeff();
    x = symmetrized(next);
    ak = ak * ak;
    if (change <= 1e-16 * std::max(1.0, x.cwiseAbs().maxCoeff()) || ak.cwiseAbs().maxCoeff() < 1e-300) break;
  }
  return x;
}

MatrixXd symmetrized(const MatrixXd& a) { return 0.5 * (a + a.transpose()); }

double min_symmetric_eigenvalue(const MatrixXd& a) {
  if (a.size() == 0) return 0.0;
  Eigen::SelfAdjointEigenSolver<MatrixXd> es(symmetrized(a), Eigen::EigenvaluesOnly);
  return es.eigenvalues().minCoeff();
}

double max_abs(const MatrixXd& a) { return a.size() == 0 ? 0.0 : a.cwiseAbs().maxCoeff(); }

}  // namespace linalg
}  // namespace msgc
