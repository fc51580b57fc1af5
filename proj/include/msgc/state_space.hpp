#pragma once

#include "msgc/rescale.hpp"
#include "msgc/types.hpp"
#include "msgc/var_model.hpp"

#include <vector>

namespace msgc {

/// General state-space model
///   X_{n+1} = A X_n + W_n,   Y_n = C X_n + V_n,
/// with cov(W) = Xi, cov(V) = Psi, cov(W, V) = Theta.
struct SsModel {
  MatrixXd a;
  MatrixXd c;
  MatrixXd xi;
  MatrixXd psi;
  MatrixXd theta;

  Index state_dim() const { return a.rows(); }
  Index obs_dim() const { return c.rows(); }

  /// Shapes, Xi/Psi symmetry (1e-10), joint noise covariance PSD (-1e-8), rho(A) < 1.
  void validate() const;
};

/// Innovations form
///   Z_{n+1} = A Z_n + K E_n,   Y_n = C Z_n + E_n,   cov(E) = Phi.
struct IssModel {
  MatrixXd a;
  MatrixXd c;
  MatrixXd k;
  MatrixXd phi;

  Index state_dim() const { return a.rows(); }
  Index obs_dim() const { return c.rows(); }

  /// Shapes, Phi symmetric positive definite, rho(A) < 1.
  void validate() const;
};

struct DareOptions {
  double tol = 1e-12;
  int max_iter = 10000;
};

struct DareSolution {
  MatrixXd p;
  MatrixXd k;
  MatrixXd phi;
  int iterations = 0;
  double residual = 0.0;  // max |P - RHS(P)|
};

/// Raised when the Riccati iteration fails; carries the last update size.
class DareError : public Error {
 public:
  DareError(const std::string& what, double last_residual, int iterations)
      : Error(what), last_residual_(last_residual), iterations_(iterations) {}
  double last_residual() const { return last_residual_; }
  int iterations() const { return iterations_; }

 private:
  double last_residual_;
  int iterations_;
};

/// Right-hand side of the Riccati equation
///   A P A' + Xi - (A P C' + Theta)(C P C' + Psi)^-1 (C P A' + Theta').
MatrixXd dare_rhs(const SsModel& model, const MatrixXd& p);

/// max |P - dare_rhs(P)|.
double dare_residual(const SsModel& model, const MatrixXd& p);

/// Stabilizing DARE solution by Riccati fixed-point iteration.
///
/// The iteration starts at the stationary state covariance (the Kalman prior), is
/// symmetrized every step, and stops once the max-abs update drops below
/// tol * max(1, max|P|). Throws DareError when max_iter is reached, when
/// C P C' + Psi loses positive definiteness (min eigenvalue < 1e-12), or when
/// the closed loop A - K C is not stable.
DareSolution solve_dare(const SsModel& model, const DareOptions& options = {});

/// (A, C, K Phi K', Phi, K Phi): the ISS model viewed as a general SS model.
SsModel iss_to_ss(const IssModel& model);

/// Innovations form of a general SS model via solve_dare.
IssModel ss_to_iss(const SsModel& model, const DareOptions& options = {});

/// Innovations-form embedding of a VAR filtered by b (requires b_0 != 0).
///
/// State [Y~_{n-1} .. Y~_{n-p}, U_{n-1} .. U_{n-q}], C = [A_1 .. A_p, b_1 I .. b_q I],
/// K = [I, 0, I / b_0, 0]', Phi = b_0^2 Sigma. With q = 0 this is the VAR companion form.
IssModel var_filter_to_iss(const VarModel& model, const FirFilter& filter);

/// Same state as var_filter_to_iss, written as a general SS model driven by U_n:
/// W_n = G U_n with G = [b_0 I, 0, I, 0]', V_n = b_0 H U_n. Valid for b_0 = 0.
/// `observation` (H) maps the VAR channels to the observed ones; empty means identity.
SsModel var_filter_to_ss(const VarModel& model, const FirFilter& filter,
                         const MatrixXd& observation = MatrixXd());

/// SS model of the process sampled every tau steps:
/// (A^tau, C, Xi_tau, Psi, A^(tau-1) Theta) with Xi_1 = Xi, Xi_k = A Xi_{k-1} A' + Xi.
SsModel downsample_ss(const SsModel& model, int tau);

/// Downsampled ISS model: downsample_ss of the ISS noise structure, then ss_to_iss.
IssModel downsample_iss(const IssModel& model, int tau, const DareOptions& options = {});

/// Observation equation restricted to channels `keep` (0-based, strictly increasing):
/// (A, C(keep,:), K Phi K', Phi(keep,keep), K Phi(:,keep)).
SsModel iss_submodel(const IssModel& model, const std::vector<int>& keep);

/// Autocovariances Gamma_0..Gamma_max_lag of the observed process,
/// Gamma_k = E[Y_{n+k} Y_n'].
std::vector<MatrixXd> autocovariance(const SsModel& model, int max_lag);

}  // namespace msgc
