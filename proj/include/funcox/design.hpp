#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

#include "funcox/dataset.hpp"
#include "funcox/splines.hpp"

namespace funcox {

/// Riemann-sum basis scores Z*_{ikc} = (range/m) * sum_l Z_ik(s_l) theta_kc(s_l),
/// one n x C_k matrix per functional covariate.
std::vector<Eigen::MatrixXd> functional_scores(const SurvivalDataset& dataset,
                                               const std::vector<BsplineBasis>& bases);

/// Z~ = Z* (L^T)^{-1}, so the quadratic-form penalty b^T K b becomes ||gamma||^2
/// with gamma = L^T b.
Eigen::MatrixXd reparameterize(const Eigen::MatrixXd& scores, const PenaltyMatrices& pm);

/// Fully assembled solver-ready design with records for exact back-transformation.
struct PenalizedDesign {
  Eigen::MatrixXd scalar_block;  // n x p, mean 0 / mean-square 1 columns
  std::vector<Eigen::MatrixXd> group_blocks;  // n x r_k, (1/n) X^T X = I
  std::vector<std::string> scalar_names;
  std::vector<std::string> group_names;

  Eigen::VectorXd scalar_means;
  Eigen::VectorXd scalar_scales;
  std::vector<Eigen::MatrixXd> ortho_maps;   // C_k x r_k, X = Z~ * M
  std::vector<int> group_ranks;              // r_k (0 when the group was dropped)
  std::vector<Eigen::MatrixXd> chol_factors; // L per group
  std::vector<std::string> warnings;

  int n() const { return static_cast<int>(scalar_block.rows()); }
  int p() const { return static_cast<int>(scalar_block.cols()); }
  int k() const { return static_cast<int>(group_blocks.size()); }
};

/// Center/scale scalar columns and orthonormalize each (already reparameterized)
/// group block via its Gram eigendecomposition, dropping null directions.
PenalizedDesign standardize_and_orthonormalize(const Eigen::MatrixXd& scalar,
                                               const std::vector<Eigen::MatrixXd>& groups);

/// scores -> reparameterize -> standardize/orthonormalize, recording factors.
PenalizedDesign build_design(const SurvivalDataset& dataset,
                             const std::vector<BsplineBasis>& bases,
                             const std::vector<PenaltyMatrices>& penalties);

/// Coefficients mapped back to the original scale.
struct BacktransformResult {
  Eigen::VectorXd beta;                      // original-scale scalar coefficients
  std::vector<Eigen::VectorXd> basis_coefs;  // b_k per group
  std::vector<Eigen::VectorXd> coef_functions;  // beta_k(.) on eval_grid
  Eigen::VectorXd eval_grid;
};

BacktransformResult backtransform(const Eigen::VectorXd& beta_transformed,
                                  const std::vector<Eigen::VectorXd>& gamma,
                                  const PenalizedDesign& design,
                                  const std::vector<BsplineBasis>& bases,
                                  const Eigen::VectorXd& eval_grid);

}  // namespace funcox
