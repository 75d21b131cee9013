#pragma once

#include <Eigen/Dense>
#include <vector>

#include "funcox/coxcore.hpp"
#include "funcox/design.hpp"

namespace funcox {

enum class PenaltyFamily { MCP, LASSO };

struct PenaltyConfig {
  PenaltyFamily family = PenaltyFamily::MCP;
  double lambda = 0.0;
  double phi = 3.0;  // MCP concavity, must exceed 1
  Eigen::VectorXd scalar_weights;  // empty means all ones
  Eigen::VectorXd group_weights;
};

struct FitResult {
  Eigen::VectorXd beta;               // transformed (standardized) scale
  std::vector<Eigen::VectorXd> gamma; // per group, orthonormalized coordinates
  std::vector<int> selected_scalars;
  std::vector<int> selected_groups;
  int n_iterations = 0;
  bool converged = false;
  double final_loglik = 0.0;
  double objective = 0.0;           // -loglik / n + penalty, at the solution
  std::vector<double> objective_trace;  // one entry per outer iteration
};

double soft_threshold(double z, double lam);
double firm_threshold(double z, double lam, double phi);

struct FitOptions {
  int max_outer = 1000;
  double tol = 1e-7;  // max absolute coefficient change per outer iteration
};

/// Group descent over the standardized/orthonormalized design: each outer
/// iteration refreshes eta/e/residual, then sweeps all scalar coordinates
/// followed by all groups.
FitResult fit(const PenalizedDesign& design, const RiskStructure& rs,
              const PenaltyConfig& penalty, const FitResult* init = nullptr,
              const FitOptions& options = {});

/// Smallest lambda at which the fitted model is entirely null.
double path_lambda_max(const PenalizedDesign& design, const RiskStructure& rs,
                       const PenaltyConfig& penalty = {});

/// MCP (or LASSO) penalty value at coefficient magnitude t.
double penalty_value(double t, double lam, double phi, PenaltyFamily family);

}  // namespace funcox
