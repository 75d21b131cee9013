#pragma once

#include <Eigen/Dense>
#include <optional>
#include <string>
#include <vector>

#include "funcox/dataset.hpp"
#include "funcox/design.hpp"
#include "funcox/solver.hpp"
#include "funcox/splines.hpp"

namespace funcox {

struct EbicOptions {
  bool use_total_n = false;  // log(n) instead of log(#events) in the BIC term
};

/// EBIC = BIC + 2 log C(p_total, nu), BIC = -2 loglik + df log(#events).
/// df counts selected scalars plus the (possibly reduced) rank of each
/// selected group; nu counts selected variables.
double ebic(const FitResult& fit, const RiskStructure& rs, int p_total, int df, int nu,
            const EbicOptions& options = {});

/// Degrees of freedom and variable count of a fit under the given design.
void model_dimensions(const FitResult& fit, const PenalizedDesign& design, int& df, int& nu);

struct GridSearchOptions {
  std::vector<double> lambda_grid;  // empty: nlambda log-spaced from lambda_max down
  std::vector<double> psi_grid;     // empty: 7 log-spaced values 1e-3..1e3
  int nlambda = 50;
  double lambda_min_ratio = 1e-3;
  PenaltyFamily family = PenaltyFamily::MCP;
  double phi = 3.0;
  EbicOptions ebic_options;
  FitOptions fit_options;
  FactorMethod factor_method = FactorMethod::Cholesky;
  // adaptive weights per group (empty = unweighted); either folded into the
  // composite penalty matrix or, when weights_on_lambda, multiplying lambda
  std::vector<double> group_w;
  std::vector<double> group_v;
  bool weights_on_lambda = false;
};

struct EbicCell {
  double lambda = 0.0;
  double psi = 0.0;
  bool ok = false;
  std::string error;
  double loglik = 0.0;
  double bic = 0.0;
  double ebic = 0.0;
  int nu = 0;
  int df = 0;
  FitResult fit;
};

struct EbicSurface {
  std::vector<double> lambda_grid;  // decreasing
  std::vector<double> psi_grid;
  std::vector<std::vector<EbicCell>> cells;  // [psi][lambda]
  int opt_psi = -1;
  int opt_lambda = -1;
  double lambda_max = 0.0;
  // adaptive weights in effect during the search (empty when unweighted)
  std::vector<double> group_w;
  std::vector<double> group_v;
  bool weights_on_lambda = false;

  const EbicCell& optimum() const { return cells[opt_psi][opt_lambda]; }
};

std::vector<double> default_psi_grid();

/// Two-dimensional (lambda, psi) grid search with warm starts along each
/// lambda path. Each psi requires design reassembly; cell failures are
/// recorded, not fatal.
EbicSurface grid_search(const SurvivalDataset& dataset,
                        const std::vector<BsplineBasis>& bases,
                        const GridSearchOptions& options = {});

/// Design and penalty matrices at a given psi, honoring adaptive weights.
void design_at_psi(const SurvivalDataset& dataset, const std::vector<BsplineBasis>& bases,
                   double psi, const GridSearchOptions& options,
                   PenalizedDesign& design, std::vector<PenaltyMatrices>& penalties);

struct AdaptiveWeights {
  std::vector<double> w;  // 1 / ||initial beta_k||
  std::vector<double> v;  // 1 / ||initial beta_k''||
};

/// L2-norm reciprocals from initial coefficient functions and their second
/// derivatives on a dense grid (trapezoid rule); zero-norm groups capped at
/// 1e6 and each weight set rescaled so its smallest uncapped value is 1.
AdaptiveWeights adaptive_weights(const std::vector<Eigen::VectorXd>& functions,
                                 const std::vector<Eigen::VectorXd>& second_derivatives,
                                 const Eigen::VectorXd& grid);

/// Non-adaptive search, then a second search with data-adaptive weights
/// computed from the first optimum. Returns the adaptive surface.
EbicSurface adaptive_grid_search(const SurvivalDataset& dataset,
                                 const std::vector<BsplineBasis>& bases,
                                 const GridSearchOptions& options = {},
                                 EbicSurface* initial_surface = nullptr);

}  // namespace funcox
