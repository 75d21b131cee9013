#pragma once

#include <Eigen/Dense>
#include <vector>

namespace funcox {

/// Subjects sorted by observed time with Breslow tie groups. Risk sets are
/// suffixes of the sorted order: R(t_g) = positions group_start[g]..n-1.
struct RiskStructure {
  std::vector<int> order;        // sorted subject indices, ascending time
  std::vector<char> event_at;    // event flag per sorted position
  std::vector<int> group_start;  // start position of each tie group, ascending
  std::vector<int> group_events; // events within each tie group
  int n = 0;
  int n_events = 0;
};

RiskStructure build_risk_structure(const Eigen::VectorXd& y, const Eigen::VectorXi& delta);

/// Breslow log partial likelihood, single suffix log-sum-exp sweep.
double log_partial_likelihood(const Eigen::VectorXd& eta, const RiskStructure& rs);

/// e_i = sum over risk sets containing i of delta_j exp(eta_i)/sum_{k in R_j} exp(eta_k).
Eigen::VectorXd expected_events(const Eigen::VectorXd& eta, const RiskStructure& rs);

/// delta - e, the score of the log partial likelihood with respect to eta.
Eigen::VectorXd working_residual(const Eigen::VectorXi& delta, const Eigen::VectorXd& e);

}  // namespace funcox
