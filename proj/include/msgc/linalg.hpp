#pragma once

#include "msgc/types.hpp"

namespace msgc::linalg {

/// Largest eigenvalue modulus of a square matrix.
double spectral_radius(const MatrixXd& a);

/// a^n by repeated squaring; n = 0 gives the identity.
MatrixXd matrix_power(const MatrixXd& a, int n);

/// Solves X = A X A^T + Q for stable A (doubling iteration).
MatrixXd lyapunov(const MatrixXd& a, const MatrixXd& q);

MatrixXd symmetrized(const MatrixXd& a);

/// Smallest eigenvalue of the symmetric part of `a`.
double min_symmetric_eigenvalue(const MatrixXd& a);

double max_abs(const MatrixXd& a);

}  // namespace msgc::linalg
