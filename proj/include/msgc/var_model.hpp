#pragma once

#include "msgc/types.hpp"

#include <cstdint>
#include <numbers>
#include <string_view>
#include <vector>

namespace msgc {

/// Stationary VAR(p): Y_n = sum_k A_k Y_{n-k} + U_n, cov(U_n) = Sigma.
struct VarModel {
  std::vector<MatrixXd> coefficients;  // A_1..A_p, each M x M
  MatrixXd sigma;

  int channels() const { return static_cast<int>(sigma.rows()); }
  int order() const { return static_cast<int>(coefficients.size()); }

  /// Coefficient of lag `k` (1-based, as in the model equation).
  const MatrixXd& lag(int k) const { return coefficients.at(static_cast<std::size_t>(k - 1)); }

  /// Mp x Mp companion matrix.
  MatrixXd companion() const;

  /// Checks shapes, Sigma symmetry (1e-12) and positive definiteness.
  void validate() const;
};

enum class Generator { uni, bi, mix };

Generator parse_generator(std::string_view tag);
std::string_view to_string(Generator g);

/// Parameters of the benchmark processes.
///
/// `uni` and `bi` are the bivariate lagged-coupling process
///   y1_n = c11 y1_{n-d11} + c12 y2_{n-d12} + u1_n
///   y2_n = c22 y2_{n-d22} + c21 y1_{n-d21} + u2_n
/// with unit innovation variances. `mix` is the 4-channel process (x1, x2, z1, z2)
/// with resonant poles (rho, phi) on x1 and z1, observed through the mixing
///   y1 = x1 + z2,  y2 = x2 + z1.
struct SimulationConfig {
  Generator generator = Generator::uni;

  // Bivariate coupling: strengths and lags; a zero strength disables the term.
  double c11 = 0.5, c12 = 0.0, c21 = 0.5, c22 = 0.0;
  int d11 = 1, d12 = 1, d21 = 2, d22 = 1;

  // Mixed process.
  double rho_x = 0.95, phi_x = 0.0;
  double rho_z = 0.95, phi_z = 0.15 * std::numbers::pi;  // 2 rho cos(phi) = 1.6929
  double coupling_x = 0.5;  // x1 -> x2 at lag 1
  double coupling_z = 1.0;  // z1 -> z2 at lag 1
  double var_u1 = 0.25, var_u2 = 0.5, var_w1 = 1.0, var_w2 = 0.5;

  Index samples = 500;
  Index burn_in = 1000;
  std::uint64_t seed = 0;

  void validate() const;
};

/// The configurations used in the simulation study.
SimulationConfig benchmark_config(Generator g);

/// Exact VAR of the benchmark (4-dimensional for `mix`).
VarModel build_benchmark(const SimulationConfig& config);

/// Observation matrix mapping the benchmark VAR to the observed channels
/// (identity for `uni`/`bi`, 2 x 4 for `mix`).
MatrixXd observation_matrix(const SimulationConfig& config);

/// Spectral radius of the companion matrix.
double check_stability(const VarModel& model);
bool is_stable(const VarModel& model);

/// Gaussian realization of the model; the first `burn_in` generated rows are dropped.
/// Starts from zero initial conditions. Bit-reproducible for a fixed seed.
TimeSeriesSet simulate_var(const VarModel& model, Index n_samples, Index burn_in,
                           std::uint64_t seed);

/// Realization of the observed benchmark process (mixing applied for `mix`).
TimeSeriesSet simulate_benchmark(const SimulationConfig& config);

/// Least-squares VAR(p) fit on demeaned data; Sigma uses the N - p denominator.
VarModel estimate_var(const TimeSeriesSet& data, int order);

/// Order in 1..p_max minimizing ln det Sigma(p) + M^2 p ln(N_eff) / N_eff, N_eff = N - p_max.
int select_order_bic(const TimeSeriesSet& data, int p_max);

/// BIC values for p = 1..p_max (index 0 holds p = 1).
std::vector<double> bic_curve(const TimeSeriesSet& data, int p_max);

/// Residual covariance of the least-squares regression of `targets` on lags
/// 1..order of `predictors`, fitted over rows first_row..N-1 of already demeaned
/// values. Denominator is the number of fitted rows. Throws on a rank-deficient
/// regressor matrix, naming the channels involved.
MatrixXd lagged_regression_residual_cov(const MatrixXd& demeaned,
                                        const std::vector<int>& targets,
                                        const std::vector<int>& predictors, int order,
                                        Index first_row,
                                        const std::vector<std::string>* labels = nullptr);

/// Per-channel mean removal.
MatrixXd demeaned(const MatrixXd& values);

}  // namespace msgc
