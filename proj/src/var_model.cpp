#include "msgc/var_model.hpp"

#include "msgc/linalg.hpp"

#include <cmath>
#include <random>
#include <sstream>

namespace msgc {

MatrixXd VarModel::companion() const {
  const int m = channels();
  const int p = order();
  MatrixXd comp = MatrixXd::Zero(m * p, m * p);
  for (int k = 0; k < p; ++k) comp.block(0, k * m, m, m) = coefficients[k];
  if (p > 1) comp.block(m, 0, m * (p - 1), m * (p - 1)).setIdentity();
  return comp;
}

void VarModel::validate() const {
  const int m = channels();
  if (m < 1 || sigma.cols() != m) throw Error("VAR innovation covariance must be square and nonempty");
  if (order() < 1) throw Error("VAR model order must be positive");
  for (const auto& a : coefficients) {
    if (a.rows() != m || a.cols() != m) throw Error("VAR coefficient matrix has wrong shape");
    if (!a.allFinite()) throw Error("VAR coefficients are not finite");
  }
  if ((sigma - sigma.transpose()).cwiseAbs().maxCoeff() > 1e-12) {
    throw Error("VAR innovation covariance is not symmetric");
  }
  if (linalg::min_symmetric_eigenvalue(sigma) <= 0.0) {
    throw Error("VAR innovation covariance is not positive definite");
  }
}

Generator parse_generator(std::string_view tag) {
  if (tag == "uni") return Generator::uni;
  if (tag == "bi") return Generator::bi;
  if (tag == "mix") return Generator::mix;
  throw Error("unknown benchmark generator '" + std::string(tag) + "' (expected uni, bi or mix)");
}

std::string_view to_string(Generator g) {
  switch (g) {
    case Generator::uni: return "uni";
    case Generator::bi: return "bi";
    case Generator::mix: return "mix";
  }
  return "?";
}

void SimulationConfig::validate() const {
  if (generator == Generator::mix) {
    for (double rho : {rho_x, rho_z}) {
      if (!(rho > 0.0 && rho < 1.0)) throw Error("pole modulus must lie in (0, 1)");
    }
    for (double v : {var_u1, var_u2, var_w1, var_w2}) {
      if (!(v > 0.0)) throw Error("innovation variances must be positive");
    }
  } else {
    for (int d : {d11, d12, d21, d22}) {
      if (d < 1) throw Error("coupling lags must be positive integers");
    }
  }
  if (samples < 1) throw Error("realization length must be positive");
  if (burn_in < 0) throw Error("burn-in must be nonnegative");
}

SimulationConfig benchmark_config(Generator g) {
  SimulationConfig cfg;
  cfg.generator = g;
  switch (g) {
    case Generator::uni:
      cfg.c11 = 0.5; cfg.d11 = 1;
      cfg.c12 = 0.0;
      cfg.c21 = 0.5; cfg.d21 = 2;
      cfg.c22 = 0.0;
      break;
    case Generator::bi:
      cfg.c11 = 0.5; cfg.d11 = 1;
      cfg.c22 = 0.5; cfg.d22 = 1;
      cfg.c12 = 0.75; cfg.d12 = 2;
      cfg.c21 = 0.5; cfg.d21 = 7;
      break;
    case Generator::mix:
      cfg.samples = 1000;
      break;
  }
  return cfg;
}

namespace {

VarModel bivariate_benchmark(const SimulationConfig& c) {
  struct Term {
    double strength;
    int lag;
    int to;
    int from;
  };
  const Term terms[] = {{c.c11, c.d11, 0, 0}, {c.c12, c.d12, 0, 1}, {c.c21, c.d21, 1, 0},
                        {c.c22, c.d22, 1, 1}};
  int p = 1;
  for (const auto& t : terms) {
    if (t.strength != 0.0) p = std::max(p, t.lag);
  }
  VarModel model;
  model.coefficients.assign(p, MatrixXd::Zero(2, 2));
  for (const auto& t : terms) {
    if (t.strength != 0.0) model.coefficients[t.lag - 1](t.to, t.from) += t.strength;
  }
  model.sigma = MatrixXd::Identity(2, 2);
  return model;
}

VarModel mixed_benchmark(const SimulationConfig& c) {
  // State order: x1, x2, z1, z2.
  VarModel model;
  model.coefficients.assign(2, MatrixXd::Zero(4, 4));
  MatrixXd& a1 = model.coefficients[0];
  MatrixXd& a2 = model.coefficients[1];
  a1(0, 0) = 2.0 * c.rho_x * std::cos(c.phi_x);
  a2(0, 0) = -c.rho_x * c.rho_x;
  a1(1, 0) = c.coupling_x;
  a1(2, 2) = 2.0 * c.rho_z * std::cos(c.phi_z);
  a2(2, 2) = -c.rho_z * c.rho_z;
  a1(3, 2) = c.coupling_z;
  model.sigma = VectorXd{{c.var_u1, c.var_u2, c.var_w1, c.var_w2}}.asDiagonal();
  return model;
}

}  // namespace

VarModel build_benchmark(const SimulationConfig& config) {
  config.validate();
  return config.generator == Generator::mix ? mixed_benchmark(config) : bivariate_benchmark(config);
}

MatrixXd observation_matrix(const SimulationConfig& config) {
  if (config.generator != Generator::mix) return MatrixXd::Identity(2, 2);
  MatrixXd h = MatrixXd::Zero(2, 4);
  h(0, 0) = 1.0;  // y1 = x1 + z2
  h(0, 3) = 1.0;
  h(1, 1) = 1.0;  // y2 = x2 + z1
  h(1, 2) = 1.0;
  return h;
}

double check_stability(const VarModel& model) { return linalg::spectral_radius(model.companion()); }

bool is_stable(const VarModel& model) { return check_stability(model) < 1.0 - 1e-10; }

TimeSeriesSet simulate_var(const VarModel& model, Index n_samples, Index burn_in,
                           std::uint64_t seed) {
  model.validate();
  if (n_samples < 1) throw Error("number of samples must be positive");
  if (burn_in < 0) throw Error("burn-in must be nonnegative");
  const double radius = check_stability(model);
  if (!(radius < 1.0 - 1e-10)) {
    std::ostringstream msg;
    msg << "cannot simulate unstable VAR: companion spectral radius " << radius;
    throw Error(msg.str());
  }

  const Index m = model.channels();
  const int p = model.order();
  const MatrixXd chol = Eigen::LLT<MatrixXd>(model.sigma).matrixL();
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal(0.0, 1.0);

  const Index total = n_samples + burn_in;
  // One column per time step; the first p columns are the zero initial state.
  MatrixXd y = MatrixXd::Zero(m, total + p);
  VectorXd z(m);
  for (Index n = p; n < total + p; ++n) {
    for (Index c = 0; c < m; ++c) z(c) = normal(rng);
    VectorXd row = chol * z;
    for (int k = 1; k <= p; ++k) row.noalias() += model.coefficients[k - 1] * y.col(n - k);
    y.col(n) = row;
  }
  return make_series(y.rightCols(n_samples).transpose());
}

TimeSeriesSet simulate_benchmark(const SimulationConfig& config) {
  const VarModel model = build_benchmark(config);
  TimeSeriesSet raw = simulate_var(model, config.samples, config.burn_in, config.seed);
  if (config.generator != Generator::mix) return raw;
  return make_series(raw.values * observation_matrix(config).transpose());
}

MatrixXd demeaned(const MatrixXd& values) {
  return values.rowwise() - values.colwise().mean();
}

namespace {

struct LaggedFit {
  MatrixXd beta;      // (|predictors| * order) x |targets|, lag-major blocks
  MatrixXd residual;  // rows x |targets|
};

LaggedFit fit_lagged(const MatrixXd& y, const std::vector<int>& targets,
                     const std::vector<int>& predictors, int order, Index first_row,
                     const std::vector<std::string>* labels) {
  const Index n = y.rows();
  const Index rows = n - first_row;
  const Index width = static_cast<Index>(predictors.size());
  const Index cols = width * order;
  if (order < 0 || first_row < order) throw Error("regression start row precedes the lag window");
  if (rows <= cols) {
    std::ostringstream msg;
    msg << "too few samples for regression: " << rows << " rows for " << cols << " regressors";
    throw Error(msg.str());
  }

  LaggedFit fit;
  fit.residual.resize(rows, static_cast<Index>(targets.size()));
  for (std::size_t t = 0; t < targets.size(); ++t) {
    fit.residual.col(static_cast<Index>(t)) = y.col(targets[t]).segment(first_row, rows);
  }
  if (cols == 0) return fit;

  MatrixXd x(rows, cols);
  for (int k = 1; k <= order; ++k) {
    for (Index c = 0; c < width; ++c) {
      x.col((k - 1) * width + c) = y.col(predictors[c]).segment(first_row - k, rows);
    }
  }

  const double scale = x.cwiseAbs().maxCoeff();
  Eigen::ColPivHouseholderQR<MatrixXd> qr;
  if (scale > 0.0) {
    qr.setThreshold(1e-10);
    qr.compute(x);
  }
  if (scale == 0.0 || qr.rank() < cols) {
    auto name = [&](int c) { return labels ? (*labels)[c] : "#" + std::to_string(c + 1); };
    std::vector<std::string> offending;
    for (int c : predictors) {
      const auto col = y.col(c).segment(first_row - 1, rows);
      if (col.cwiseAbs().maxCoeff() <= 1e-12 * std::max(scale, 1e-300)) offending.push_back(name(c));
    }
    if (offending.empty()) {
      for (int c : predictors) offending.push_back(name(c));
    }
    std::ostringstream msg;
    msg << "rank-deficient regressor matrix (rank " << (scale == 0.0 ? 0 : qr.rank()) << " of "
        << cols << "); channels:";
    for (const auto& o : offending) msg << ' ' << o;
    throw Error(msg.str());
  }
  fit.beta = qr.solve(fit.residual);
  fit.residual -= x * fit.beta;
  return fit;
}

}  // namespace

MatrixXd lagged_regression_residual_cov(const MatrixXd& y, const std::vector<int>& targets,
                                        const std::vector<int>& predictors, int order,
                                        Index first_row,
                                        const std::vector<std::string>* labels) {
  const LaggedFit fit = fit_lagged(y, targets, predictors, order, first_row, labels);
  return fit.residual.transpose() * fit.residual / static_cast<double>(fit.residual.rows());
}

namespace {

std::vector<int> all_channels(Index m) {
  std::vector<int> idx(static_cast<std::size_t>(m));
  for (Index c = 0; c < m; ++c) idx[static_cast<std::size_t>(c)] = static_cast<int>(c);
  return idx;
}

void require_length(const TimeSeriesSet& data, int order) {
  const Index n = data.samples();
  const Index m = data.channels();
  if (order < 1) throw Error("model order must be positive");
  if (n <= m * order + 1) {
    std::ostringstream msg;
    msg << "series too short for order " << order << ": N = " << n << " must exceed M*p + 1 = "
        << m * order + 1;
    throw Error(msg.str());
  }
}

}  // namespace

VarModel estimate_var(const TimeSeriesSet& data, int order) {
  data.validate();
  require_length(data, order);
  const Index m = data.channels();
  const MatrixXd y = demeaned(data.values);
  const auto idx = all_channels(m);
  const LaggedFit fit = fit_lagged(y, idx, idx, order, order, &data.labels);
  const Index rows = fit.residual.rows();
  const MatrixXd& beta = fit.beta;  // (M p) x M
  const MatrixXd& resid = fit.residual;

  VarModel model;
  model.coefficients.resize(order);
  for (int k = 0; k < order; ++k) model.coefficients[k] = beta.middleRows(k * m, m).transpose();
  model.sigma = linalg::symmetrized(resid.transpose() * resid / static_cast<double>(rows));
  return model;
}

std::vector<double> bic_curve(const TimeSeriesSet& data, int p_max) {
  data.validate();
  require_length(data, p_max);
  const Index m = data.channels();
  const MatrixXd y = demeaned(data.values);
  const auto idx = all_channels(m);
  const double n_eff = static_cast<double>(data.samples() - p_max);
  std::vector<double> bic;
  bic.reserve(p_max);
  for (int p = 1; p <= p_max; ++p) {
    const MatrixXd cov = lagged_regression_residual_cov(y, idx, idx, p, p_max, &data.labels);
    const double logdet = std::log(cov.determinant());
    bic.push_back(logdet + static_cast<double>(m * m * p) * std::log(n_eff) / n_eff);
  }
  return bic;
}

int select_order_bic(const TimeSeriesSet& data, int p_max) {
  const auto bic = bic_curve(data, p_max);
  int best = 0;
  for (int p = 1; p < p_max; ++p) {
    if (bic[p] < bic[best]) best = p;
  }
  return best + 1;
}

}  // namespace msgc
