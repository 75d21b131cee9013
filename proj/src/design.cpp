#include "funcox/design.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "funcox/errors.hpp"

namespace funcox {

std::vector<Eigen::MatrixXd> functional_scores(const SurvivalDataset& dataset,
                                               const std::vector<BsplineBasis>& bases) {
  if (bases.size() != dataset.functional.size())
    throw InputError("functional_scores: one basis per functional covariate required");
  const int m = dataset.m();
  if (m == 0) throw InputError("functional_scores: empty grid");

  std::vector<Eigen::MatrixXd> scores;
  scores.reserve(bases.size());
  for (size_t k = 0; k < bases.size(); ++k) {
    const BsplineBasis& basis = bases[k];
    const double eps = 1e-12 * std::max(1.0, basis.range());
    if (dataset.grid.minCoeff() < basis.a - eps || dataset.grid.maxCoeff() > basis.b + eps)
      throw InputError("functional_scores: grid outside basis domain for covariate '" +
                       dataset.functional[k].name + "'");
    Eigen::MatrixXd theta = evaluate_basis(basis, dataset.grid, 0);  // m x C
    scores.push_back((basis.range() / m) * (dataset.functional[k].values * theta));
  }
  return scores;
}

Eigen::MatrixXd reparameterize(const Eigen::MatrixXd& scores, const PenaltyMatrices& pm) {
  if (scores.cols() != pm.factor.rows())
    throw InputError("reparameterize: score/factor dimension mismatch");
  // Z~^T = L^{-1} Z*^T
  if (pm.triangular) {
    const double dmin = pm.factor.diagonal().cwiseAbs().minCoeff();
    if (!(dmin > 0) || !std::isfinite(dmin))
      throw NumericalError("reparameterize: singular Cholesky factor");
    return pm.factor.triangularView<Eigen::Lower>()
        .solve(scores.transpose())
        .transpose();
  }
  Eigen::FullPivLU<Eigen::MatrixXd> lu(pm.factor);
  if (!lu.isInvertible()) throw NumericalError("reparameterize: singular factor");
  return lu.solve(scores.transpose()).transpose();
}

PenalizedDesign standardize_and_orthonormalize(const Eigen::MatrixXd& scalar,
                                               const std::vector<Eigen::MatrixXd>& groups) {
  const Eigen::Index n = scalar.size() ? scalar.rows()
                                       : (groups.empty() ? 0 : groups.front().rows());
  if (n == 0) throw InputError("standardize_and_orthonormalize: no data");

  Eigen::Index max_cols = scalar.cols();
  for (const auto& g : groups) {
    if (g.rows() != n) throw InputError("standardize_and_orthonormalize: row count mismatch");
    max_cols = std::max(max_cols, g.cols());
  }
  if (n <= max_cols)
    throw InputError("standardize_and_orthonormalize: need n > max(p, max C_k)");

  PenalizedDesign design;
  design.scalar_block.resize(n, scalar.cols());
  design.scalar_means.resize(scalar.cols());
  design.scalar_scales.resize(scalar.cols());
  for (Eigen::Index j = 0; j < scalar.cols(); ++j) {
    const double mean = scalar.col(j).mean();
    Eigen::VectorXd centered = scalar.col(j).array() - mean;
    const double scale = std::sqrt(centered.squaredNorm() / n);
    if (scale < 1e-12 * std::max(1.0, std::abs(mean)))
      throw InputError("standardize_and_orthonormalize: constant scalar column " +
                       std::to_string(j));
    design.scalar_means[j] = mean;
    design.scalar_scales[j] = scale;
    design.scalar_block.col(j) = centered / scale;
  }

  for (size_t k = 0; k < groups.size(); ++k) {
    const Eigen::MatrixXd& block = groups[k];
    const Eigen::MatrixXd gram = block.transpose() * block / static_cast<double>(n);
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(gram);
    if (es.info() != Eigen::Success)
      throw NumericalError("standardize_and_orthonormalize: eigendecomposition failed");
    const Eigen::VectorXd& evals = es.eigenvalues();  // ascending
    const double cutoff = 1e-10 * std::max(evals.maxCoeff(), 0.0);
    int rank = 0;
    for (Eigen::Index c = 0; c < evals.size(); ++c)
      if (evals[c] > cutoff && evals[c] > 0) ++rank;
    Eigen::MatrixXd map(block.cols(), rank);
    for (int r = 0; r < rank; ++r) {
      const Eigen::Index c = evals.size() - rank + r;  // keep the largest eigenvalues
      map.col(r) = es.eigenvectors().col(c) / std::sqrt(evals[c]);
    }
    if (rank == 0)
      design.warnings.push_back("group " + std::to_string(k) + " has rank 0 and was dropped");
    design.group_blocks.push_back(block * map);
    design.ortho_maps.push_back(std::move(map));
    design.group_ranks.push_back(rank);
  }
  return design;
}

PenalizedDesign build_design(const SurvivalDataset& dataset,
                             const std::vector<BsplineBasis>& bases,
                             const std::vector<PenaltyMatrices>& penalties) {
  if (penalties.size() != bases.size())
    throw InputError("build_design: one penalty per basis required");
  std::vector<Eigen::MatrixXd> scores = functional_scores(dataset, bases);
  std::vector<Eigen::MatrixXd> reparam;
  reparam.reserve(scores.size());
  for (size_t k = 0; k < scores.size(); ++k)
    reparam.push_back(reparameterize(scores[k], penalties[k]));
  PenalizedDesign design = standardize_and_orthonormalize(dataset.scalar_covariates, reparam);
  design.scalar_names = dataset.scalar_names;
  for (const auto& block : dataset.functional) design.group_names.push_back(block.name);
  for (const auto& pm : penalties) design.chol_factors.push_back(pm.factor);
  return design;
}

BacktransformResult backtransform(const Eigen::VectorXd& beta_transformed,
                                  const std::vector<Eigen::VectorXd>& gamma,
                                  const PenalizedDesign& design,
                                  const std::vector<BsplineBasis>& bases,
                                  const Eigen::VectorXd& eval_grid) {
  if (beta_transformed.size() != design.p())
    throw InputError("backtransform: scalar coefficient length mismatch");
  if (static_cast<int>(gamma.size()) != design.k() ||
      static_cast<int>(bases.size()) != design.k() ||
      static_cast<int>(design.chol_factors.size()) != design.k())
    throw InputError("backtransform: group count mismatch");

  BacktransformResult out;
  out.eval_grid = eval_grid;
  out.beta = beta_transformed.cwiseQuotient(design.scalar_scales);
  for (int k = 0; k < design.k(); ++k) {
    if (gamma[k].size() != design.group_ranks[k])
      throw InputError("backtransform: gamma length mismatch for group " + std::to_string(k));
    const Eigen::MatrixXd& factor = design.chol_factors[k];
    Eigen::VectorXd in_gamma_space = design.ortho_maps[k] * gamma[k];  // C_k
    Eigen::VectorXd b;
    if (gamma[k].isZero(0.0)) {
      b = Eigen::VectorXd::Zero(factor.rows());
    } else {
      // b = (L^T)^{-1} gamma
      b = factor.transpose().fullPivLu().solve(in_gamma_space);
    }
    out.basis_coefs.push_back(b);
    out.coef_functions.push_back(evaluate_basis(bases[k], eval_grid, 0) * b);
  }
  return out;
}

}  // namespace funcox
