#pragma once

#include <Eigen/Dense>
#include <string>
#include <vector>

namespace funcox {

/// One functional covariate observed for all subjects on the shared grid.
struct FunctionalBlock {
  std::string name;
  Eigen::MatrixXd values;  // n x m
};

/// Right-censored survival data with scalar and functional covariates.
struct SurvivalDataset {
  Eigen::VectorXd y;       // observed times, strictly positive
  Eigen::VectorXi delta;   // event indicators in {0,1}
  Eigen::MatrixXd scalar_covariates;  // n x p
  std::vector<std::string> scalar_names;
  std::vector<FunctionalBlock> functional;
  Eigen::VectorXd grid;    // shared grid s_1 < ... < s_m
  std::vector<std::string> subject_ids;  // optional, size n when present

  int n() const { return static_cast<int>(y.size()); }
  int p() const { return static_cast<int>(scalar_covariates.cols()); }
  int k() const { return static_cast<int>(functional.size()); }
  int m() const { return static_cast<int>(grid.size()); }

  /// Throws InputError on any violated invariant.
  void validate() const;
};

}  // namespace funcox
