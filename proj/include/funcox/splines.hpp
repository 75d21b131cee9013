#pragma once

#include <Eigen/Dense>
#include <vector>

namespace funcox {

/// Clamped B-spline basis on a closed interval with equally spaced
/// interior knots. num_basis = #interior + degree + 1.
struct BsplineBasis {
  int degree = 3;
  int num_basis = 10;
  double a = 0.0;
  double b = 1.0;
  std::vector<double> knots;  // full clamped knot vector, size num_basis + degree + 1

  int num_interior() const { return num_basis - degree - 1; }
  double range() const { return b - a; }
};

BsplineBasis build_basis(int degree, int num_basis, double a, double b);

/// Basis values (or derivatives) at the given points, one row per point.
/// derivative_order must be 0 or 2; points must lie in [a, b].
Eigen::MatrixXd evaluate_basis(const BsplineBasis& basis,
                               const Eigen::VectorXd& points,
                               int derivative_order);

enum class FactorMethod { Cholesky, Eigendecomposition };

/// Gram matrix R, curvature matrix Q and an invertible factor L with
/// L L^T = w R + psi v Q (after the diagonal jitter policy, if needed).
struct PenaltyMatrices {
  Eigen::MatrixXd gram;       // R = integral of theta theta^T
  Eigen::MatrixXd curvature;  // Q = integral of theta'' theta''^T
  Eigen::MatrixXd factor;     // L, lower triangular for FactorMethod::Cholesky
  double psi = 0.0;
  bool triangular = true;
  double applied_ridge = 0.0;  // diagonal jitter actually added, 0 if none
};

PenaltyMatrices penalty_matrices(const BsplineBasis& basis, double psi,
                                 FactorMethod method = FactorMethod::Cholesky,
                                 int gauss_order = 0);

/// Weighted composite w*R + psi*v*Q, refactored. Used by the adaptive penalty.
PenaltyMatrices weighted_penalty_matrices(const PenaltyMatrices& pm, double psi,
                                          double w, double v,
                                          FactorMethod method = FactorMethod::Cholesky);

/// Gauss-Legendre nodes and weights on [-1, 1].
void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights);

}  // namespace funcox
