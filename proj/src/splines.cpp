#include "funcox/splines.hpp"

#include <Eigen/Cholesky>
#include <Eigen/Eigenvalues>
#include <algorithm>
#include <cmath>

#include "funcox/errors.hpp"

namespace funcox {

BsplineBasis build_basis(int degree, int num_basis, double a, double b) {
  if (degree < 0) throw ConfigError("build_basis: degree must be nonnegative");
  if (num_basis < degree + 1)
    throw ConfigError("build_basis: num_basis must be at least degree + 1 (got " +
                      std::to_string(num_basis) + " < " + std::to_string(degree + 1) + ")");
  if (!(b > a)) throw ConfigError("build_basis: degenerate domain");

  BsplineBasis basis;
  basis.degree = degree;
  basis.num_basis = num_basis;
  basis.a = a;
  basis.b = b;

  const int n_int = num_basis - degree - 1;
  basis.knots.reserve(num_basis + degree + 1);
  for (int i = 0; i <= degree; ++i) basis.knots.push_back(a);
  for (int i = 1; i <= n_int; ++i)
    basis.knots.push_back(a + (b - a) * static_cast<double>(i) / (n_int + 1));
  for (int i = 0; i <= degree; ++i) basis.knots.push_back(b);
  return basis;
}

namespace {

// Cox-de Boor evaluation of all basis functions (and derivatives) that are
// nonzero at x; returns the knot span index i with knots[i] <= x < knots[i+1].
// Follows the standard DersBasisFuns scheme.
int span_of(const std::vector<double>& knots, int degree, int num_basis, double x) {
  // clamp right endpoint into the last nondegenerate span
  if (x >= knots[num_basis]) return num_basis - 1;
  auto it = std::upper_bound(knots.begin() + degree, knots.begin() + num_basis + 1, x);
  return static_cast<int>(it - knots.begin()) - 1;
}

void ders_basis_funs(const std::vector<double>& knots, int degree, int span, double x,
                     int nders, Eigen::MatrixXd& ders) {
  const int p = degree;
  Eigen::MatrixXd ndu(p + 1, p + 1);
  std::vector<double> left(p + 1), right(p + 1);
  ndu(0, 0) = 1.0;
  for (int j = 1; j <= p; ++j) {
    left[j] = x - knots[span + 1 - j];
    right[j] = knots[span + j] - x;
    double saved = 0.0;
    for (int r = 0; r < j; ++r) {
      ndu(j, r) = right[r + 1] + left[j - r];
      double temp = ndu(r, j - 1) / ndu(j, r);
      ndu(r, j) = saved + right[r + 1] * temp;
      saved = left[j - r] * temp;
    }
    ndu(j, j) = saved;
  }
  ders.setZero(nders + 1, p + 1);
  for (int j = 0; j <= p; ++j) ders(0, j) = ndu(j, p);

  Eigen::MatrixXd a(2, p + 1);
  for (int r = 0; r <= p; ++r) {
    int s1 = 0, s2 = 1;
    a.setZero();
    a(0, 0) = 1.0;
    for (int k = 1; k <= nders; ++k) {
      double d = 0.0;
      const int rk = r - k, pk = p - k;
      if (r >= k) {
        a(s2, 0) = a(s1, 0) / ndu(pk + 1, rk);
        d = a(s2, 0) * ndu(rk, pk);
      }
      const int j1 = (rk >= -1) ? 1 : -rk;
      const int j2 = (r - 1 <= pk) ? k - 1 : p - r;
      for (int j = j1; j <= j2; ++j) {
        a(s2, j) = (a(s1, j) - a(s1, j - 1)) / ndu(pk + 1, rk + j);
        d += a(s2, j) * ndu(rk + j, pk);
      }
      if (r <= pk) {
        a(s2, k) = -a(s1, k - 1) / ndu(pk + 1, r);
        d += a(s2, k) * ndu(r, pk);
      }
      ders(k, r) = d;
      std::swap(s1, s2);
    }
  }
  double factor = p;
  for (int k = 1; k <= nders; ++k) {
    for (int j = 0; j <= p; ++j) ders(k, j) *= factor;
    factor *= (p - k);
  }
}

}  // namespace

Eigen::MatrixXd evaluate_basis(const BsplineBasis& basis, const Eigen::VectorXd& points,
                               int derivative_order) {
  if (derivative_order != 0 && derivative_order != 2)
    throw ConfigError("evaluate_basis: derivative_order must be 0 or 2");
  const double eps = 1e-12 * std::max(1.0, std::abs(basis.b - basis.a));
  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(points.size(), basis.num_basis);
  Eigen::MatrixXd ders;
  for (Eigen::Index i = 0; i < points.size(); ++i) {
    double x = points[i];
    if (x < basis.a - eps || x > basis.b + eps)
      throw InputError("evaluate_basis: point " + std::to_string(x) + " outside domain [" +
                       std::to_string(basis.a) + ", " + std::to_string(basis.b) + "]");
    x = std::clamp(x, basis.a, basis.b);
    const int span = span_of(basis.knots, basis.degree, basis.num_basis, x);
    const int nders = std::min(derivative_order, basis.degree);
    ders_basis_funs(basis.knots, basis.degree, span, x, nders, ders);
    const int row = (derivative_order <= basis.degree) ? derivative_order : -1;
    if (row < 0) continue;  // derivative order beyond degree: identically zero
    for (int j = 0; j <= basis.degree; ++j)
      out(i, span - basis.degree + j) = ders(row, j);
  }
  return out;
}

void gauss_legendre(int order, std::vector<double>& nodes, std::vector<double>& weights) {
  if (order < 1) throw ConfigError("gauss_legendre: order must be positive");
  nodes.assign(order, 0.0);
  weights.assign(order, 0.0);
  const int m = (order + 1) / 2;
  for (int i = 0; i < m; ++i) {
    // Newton from the Chebyshev-angle initial guess
    double x = std::cos(M_PI * (i + 0.75) / (order + 0.5));
    double dp = 0.0;
    for (int it = 0; it < 100; ++it) {
      double p0 = 1.0, p1 = x;
      for (int k = 2; k <= order; ++k) {
        double p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
        p0 = p1;
        p1 = p2;
      }
      dp = order * (x * p1 - p0) / (x * x - 1.0);
      double dx = p1 / dp;
      x -= dx;
      if (std::abs(dx) < 1e-15) break;
    }
    nodes[i] = -x;
    nodes[order - 1 - i] = x;
    double w = 2.0 / ((1.0 - x * x) * dp * dp);
    weights[i] = w;
    weights[order - 1 - i] = w;
  }
}

namespace {

// Piecewise Gauss-Legendre integral of theta^(d) theta^(d)^T over the domain.
Eigen::MatrixXd basis_product_integral(const BsplineBasis& basis, int deriv, int gauss_order) {
  std::vector<double> nodes, weights;
  gauss_legendre(gauss_order, nodes, weights);

  // distinct spans of the clamped knot vector
  std::vector<double> breaks;
  breaks.push_back(basis.a);
  for (int i = basis.degree + 1; i < basis.num_basis; ++i) breaks.push_back(basis.knots[i]);
  breaks.push_back(basis.b);

  Eigen::MatrixXd out = Eigen::MatrixXd::Zero(basis.num_basis, basis.num_basis);
  Eigen::VectorXd pts(gauss_order);
  for (size_t s = 0; s + 1 < breaks.size(); ++s) {
    const double lo = breaks[s], hi = breaks[s + 1];
    const double half = 0.5 * (hi - lo), mid = 0.5 * (hi + lo);
    for (int q = 0; q < gauss_order; ++q) pts[q] = mid + half * nodes[q];
    Eigen::MatrixXd vals = evaluate_basis(basis, pts, deriv);
    for (int q = 0; q < gauss_order; ++q)
      out.noalias() += (half * weights[q]) * vals.row(q).transpose() * vals.row(q);
  }
  return 0.5 * (out + out.transpose());
}

// Factor K = L L^T with escalating diagonal jitter on breakdown.
void factor_composite(const Eigen::MatrixXd& composite, FactorMethod method,
                      PenaltyMatrices& pm) {
  const int c = static_cast<int>(composite.rows());
  const double base = 1e-10 * composite.trace() / c;
  double ridge = 0.0;
  for (int attempt = 0; attempt <= 4; ++attempt) {
    Eigen::MatrixXd k = composite;
    if (ridge > 0) k.diagonal().array() += ridge;
    if (method == FactorMethod::Cholesky) {
      Eigen::LLT<Eigen::MatrixXd> llt(k);
      if (llt.info() == Eigen::Success) {
        pm.factor = llt.matrixL();
        pm.triangular = true;
        pm.applied_ridge = ridge;
        return;
      }
    } else {
      Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(k);
      const double tol = 1e-14 * std::max(1.0, es.eigenvalues().cwiseAbs().maxCoeff());
      if (es.info() == Eigen::Success && es.eigenvalues().minCoeff() > tol) {
        pm.factor = es.eigenvectors() * es.eigenvalues().cwiseSqrt().asDiagonal();
        pm.triangular = false;
        pm.applied_ridge = ridge;
        return;
      }
    }
    ridge = (ridge == 0.0) ? base : ridge * 10.0;
    if (ridge > 1e-6 * composite.trace() / c * 1.0001) break;
  }
  throw NumericalError("penalty_matrices: factorization failed after diagonal ridge up to " +
                       std::to_string(ridge));
}

}  // namespace

PenaltyMatrices penalty_matrices(const BsplineBasis& basis, double psi, FactorMethod method,
                                 int gauss_order) {
  if (psi < 0) throw ConfigError("penalty_matrices: psi must be nonnegative");
  if (gauss_order <= 0) gauss_order = basis.degree + 2;
  PenaltyMatrices pm;
  pm.psi = psi;
  pm.gram = basis_product_integral(basis, 0, gauss_order);
  pm.curvature = basis_product_integral(basis, 2, gauss_order);
  factor_composite(pm.gram + psi * pm.curvature, method, pm);
  return pm;
}

PenaltyMatrices weighted_penalty_matrices(const PenaltyMatrices& pm, double psi, double w,
                                          double v, FactorMethod method) {
  if (!(w > 0) || !std::isfinite(w) || v < 0 || !std::isfinite(v))
    throw ConfigError("weighted_penalty_matrices: weights must be positive finite");
  if (psi < 0) throw ConfigError("weighted_penalty_matrices: psi must be nonnegative");
  PenaltyMatrices out;
  out.psi = psi;
  out.gram = pm.gram;
  out.curvature = pm.curvature;
  factor_composite(w * pm.gram + psi * v * pm.curvature, method, out);
  return out;
}

}  // namespace funcox
