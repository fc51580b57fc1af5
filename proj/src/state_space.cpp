#include "msgc/state_space.hpp"

#include "msgc/linalg.hpp"

#include <cmath>
#include <sstream>

namespace msgc {

namespace {

void require_shape(const MatrixXd& m, Index rows, Index cols, const char* name) {
  if (m.rows() != rows || m.cols() != cols) {
    std::ostringstream msg;
    msg << name << " has shape " << m.rows() << "x" << m.cols() << ", expected " << rows << "x"
        << cols;
    throw Error(msg.str());
  }
}

void require_stable(const MatrixXd& a) {
  const double radius = linalg::spectral_radius(a);
  if (!(radius < 1.0)) {
    std::ostringstream msg;
    msg << "state matrix is not stable (spectral radius " << radius << ")";
    throw Error(msg.str());
  }
}

}  // namespace

void SsModel::validate() const {
  const Index m = a.rows();
  const Index n = c.rows();
  require_shape(a, m, m, "A");
  require_shape(c, n, m, "C");
  require_shape(xi, m, m, "Xi");
  require_shape(psi, n, n, "Psi");
  require_shape(theta, m, n, "Theta");
  if (linalg::max_abs(xi - xi.transpose()) > 1e-10) throw Error("Xi is not symmetric");
  if (linalg::max_abs(psi - psi.transpose()) > 1e-10) throw Error("Psi is not symmetric");
  MatrixXd joint(m + n, m + n);
  joint << xi, theta, theta.transpose(), psi;
  if (linalg::min_symmetric_eigenvalue(joint) < -1e-8) {
    throw Error("joint noise covariance is not positive semidefinite");
  }
  require_stable(a);
}

void IssModel::validate() const {
  const Index m = a.rows();
  const Index n = c.rows();
  require_shape(a, m, m, "A");
  require_shape(c, n, m, "C");
  require_shape(k, m, n, "K");
  require_shape(phi, n, n, "Phi");
  if (linalg::max_abs(phi - phi.transpose()) > 1e-10) throw Error("Phi is not symmetric");
  if (!(linalg::min_symmetric_eigenvalue(phi) > 0.0)) throw Error("Phi is not positive definite");
  require_stable(a);
}

MatrixXd dare_rhs(const SsModel& model, const MatrixXd& p) {
  const MatrixXd& a = model.a;
  const MatrixXd& c = model.c;
  const MatrixXd s = linalg::symmetrized(c * p * c.transpose() + model.psi);
  const MatrixXd g = a * p * c.transpose() + model.theta;
  return a * p * a.transpose() + model.xi - g * s.llt().solve(g.transpose());
}

double dare_residual(const SsModel& model, const MatrixXd& p) {
  return linalg::max_abs(p - dare_rhs(model, p));
}

namespace {

// Kalman prior: the stationary state covariance for stable A; otherwise the
// covariance of a state started from rest state_dim() steps earlier.
MatrixXd initial_error_covariance(const SsModel& model) {
  if (linalg::spectral_radius(model.a) < 1.0) return linalg::lyapunov(model.a, model.xi);
  MatrixXd p = model.xi;
  for (Index k = 1; k < model.state_dim(); ++k) {
    p = linalg::symmetrized(model.a * p * model.a.transpose() + model.xi);
  }
  return p;
}

}  // namespace

DareSolution solve_dare(const SsModel& model, const DareOptions& options) {
  const MatrixXd& a = model.a;
  const MatrixXd& c = model.c;
  const MatrixXd at = a.transpose();
  const MatrixXd ct = c.transpose();

  MatrixXd p = initial_error_covariance(model);
  double update = 0.0;
  int it = 0;
  for (;;) {
    const MatrixXd s = linalg::symmetrized(c * p * ct + model.psi);
    const double min_eig = linalg::min_symmetric_eigenvalue(s);
    if (!(min_eig >= 1e-12)) {
      std::ostringstream msg;
      msg << "singular innovation covariance in DARE (min eigenvalue " << min_eig
          << " at iteration " << it << ")";
      throw DareError(msg.str(), update, it);
    }
    const MatrixXd ap = a * p;
    const MatrixXd g = ap * ct + model.theta;
    MatrixXd next = ap * at + model.xi - g * s.llt().solve(g.transpose());
    next = linalg::symmetrized(next);
    update = linalg::max_abs(next - p);
    p = std::move(next);
    ++it;
    if (update < options.tol * std::max(1.0, linalg::max_abs(p))) break;
    if (it >= options.max_iter) {
      std::ostringstream msg;
      msg << "DARE did not converge in " << options.max_iter << " iterations (last update "
          << update << ")";
      throw DareError(msg.str(), update, it);
    }
  }

  DareSolution sol;
  sol.phi = linalg::symmetrized(c * p * ct + model.psi);
  sol.k = (a * p * ct + model.theta) * sol.phi.inverse();
  sol.p = std::move(p);
  sol.iterations = it;
  sol.residual = dare_residual(model, sol.p);

  const double loop_radius = linalg::spectral_radius(a - sol.k * c);
  if (!(loop_radius < 1.0 + 1e-6)) {
    std::ostringstream msg;
    msg << "DARE solution is not stabilizing (closed-loop spectral radius " << loop_radius << ")";
    throw DareError(msg.str(), sol.residual, it);
  }
  return sol;
}

SsModel iss_to_ss(const IssModel& model) {
  SsModel ss;
  ss.a = model.a;
  ss.c = model.c;
  const MatrixXd kphi = model.k * model.phi;
  ss.xi = linalg::symmetrized(kphi * model.k.transpose());
  ss.psi = model.phi;
  ss.theta = kphi;
  return ss;
}

IssModel ss_to_iss(const SsModel& model, const DareOptions& options) {
  const DareSolution sol = solve_dare(model, options);
  return IssModel{model.a, model.c, sol.k, sol.phi};
}

namespace {

struct FilteredEmbedding {
  MatrixXd a;      // state transition
  MatrixXd c;      // Y~_n = c Z_n + b_0 U_n
  MatrixXd drive;  // G: Z_{n+1} = a Z_n + G U_n
};

FilteredEmbedding embed_filtered_var(const VarModel& model, const FirFilter& filter) {
  model.validate();
  filter.validate();
  const Index m = model.channels();
  const int p = model.order();
  const int q = filter.order();
  const Index dim = m * (p + q);
  const Index u0 = m * p;  // first U-lag block

  FilteredEmbedding e;
  e.c = MatrixXd::Zero(m, dim);
  for (int k = 0; k < p; ++k) e.c.middleCols(k * m, m) = model.coefficients[k];
  for (int l = 1; l <= q; ++l) {
    e.c.middleCols(u0 + (l - 1) * m, m) = filter.b[l] * MatrixXd::Identity(m, m);
  }

  e.a = MatrixXd::Zero(dim, dim);
  e.a.topRows(m) = e.c;
  if (p > 1) e.a.block(m, 0, m * (p - 1), m * (p - 1)).setIdentity();
  if (q > 1) e.a.block(u0 + m, u0, m * (q - 1), m * (q - 1)).setIdentity();

  e.drive = MatrixXd::Zero(dim, m);
  e.drive.topRows(m) = filter.b[0] * MatrixXd::Identity(m, m);
  if (q > 0) e.drive.middleRows(u0, m).setIdentity();
  return e;
}

}  // namespace

IssModel var_filter_to_iss(const VarModel& model, const FirFilter& filter) {
  filter.validate();
  const double b0 = filter.b[0];
  if (b0 == 0.0) throw Error("filter has b_0 = 0; no innovations-form embedding exists");
  FilteredEmbedding e = embed_filtered_var(model, filter);
  IssModel iss;
  iss.a = std::move(e.a);
  iss.c = std::move(e.c);
  iss.k = e.drive / b0;
  iss.phi = b0 * b0 * model.sigma;
  return iss;
}

SsModel var_filter_to_ss(const VarModel& model, const FirFilter& filter,
                         const MatrixXd& observation) {
  FilteredEmbedding e = embed_filtered_var(model, filter);
  const Index m = model.channels();
  const MatrixXd h = observation.size() == 0 ? MatrixXd::Identity(m, m) : observation;
  if (h.cols() != m) throw Error("observation matrix column count must equal the VAR dimension");
  const double b0 = filter.b[0];

  SsModel ss;
  ss.a = std::move(e.a);
  ss.c = h * e.c;
  ss.xi = linalg::symmetrized(e.drive * model.sigma * e.drive.transpose());
  ss.psi = linalg::symmetrized(b0 * b0 * h * model.sigma * h.transpose());
  ss.theta = b0 * e.drive * model.sigma * h.transpose();
  return ss;
}

SsModel downsample_ss(const SsModel& model, int tau) {
  if (tau < 1) throw Error("scale factor must be a positive integer");
  SsModel out;
  out.c = model.c;
  out.psi = model.psi;
  out.theta = linalg::matrix_power(model.a, tau - 1) * model.theta;
  out.a = linalg::matrix_power(model.a, tau);
  MatrixXd xi = model.xi;
  for (int k = 2; k <= tau; ++k) {
    xi = linalg::symmetrized(model.a * xi * model.a.transpose() + model.xi);
  }
  out.xi = std::move(xi);
  return out;
}

IssModel downsample_iss(const IssModel& model, int tau, const DareOptions& options) {
  return ss_to_iss(downsample_ss(iss_to_ss(model), tau), options);
}

SsModel iss_submodel(const IssModel& model, const std::vector<int>& keep) {
  const Index n = model.obs_dim();
  if (keep.empty()) throw Error("submodel channel list is empty");
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i] < 0 || keep[i] >= n) throw Error("submodel channel index out of range");
    if (i > 0 && keep[i] <= keep[i - 1]) {
      throw Error("submodel channel indices must be strictly increasing without duplicates");
    }
  }
  const Index r = static_cast<Index>(keep.size());
  const MatrixXd kphi = model.k * model.phi;
  SsModel sub;
  sub.a = model.a;
  sub.c.resize(r, model.state_dim());
  sub.psi.resize(r, r);
  sub.theta.resize(model.state_dim(), r);
  for (Index i = 0; i < r; ++i) {
    sub.c.row(i) = model.c.row(keep[i]);
    sub.theta.col(i) = kphi.col(keep[i]);
    for (Index j = 0; j < r; ++j) sub.psi(i, j) = model.phi(keep[i], keep[j]);
  }
  sub.xi = linalg::symmetrized(kphi * model.k.transpose());
  return sub;
}

std::vector<MatrixXd> autocovariance(const SsModel& model, int max_lag) {
  if (max_lag < 0) throw Error("maximum lag must be nonnegative");
  const MatrixXd state_cov = linalg::lyapunov(model.a, model.xi);
  std::vector<MatrixXd> gamma;
  gamma.reserve(static_cast<std::size_t>(max_lag) + 1);
  gamma.push_back(linalg::symmetrized(model.c * state_cov * model.c.transpose() + model.psi));
  MatrixXd lead = model.a * state_cov * model.c.transpose() + model.theta;  // E[X_{n+1} Y_n']
  for (int k = 1; k <= max_lag; ++k) {
    gamma.push_back(model.c * lead);
    lead = model.a * lead;
  }
  return gamma;
}

}  // namespace msgc
