#include "funcox/coxcore.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "funcox/errors.hpp"

namespace funcox {

namespace {

constexpr double kEtaClamp = 500.0;

void check_eta(const Eigen::VectorXd& eta, const RiskStructure& rs) {
  if (eta.size() != rs.n) throw InputError("eta length does not match risk structure");
  if (!eta.allFinite()) throw InputError("eta contains NaN or infinite values");
}

// exp(eta - shift) over the sorted order, plus suffix sums.
void shifted_hazards(const Eigen::VectorXd& eta, const RiskStructure& rs, double& shift,
                     Eigen::VectorXd& w, Eigen::VectorXd& suffix) {
  const int n = rs.n;
  shift = -kEtaClamp;
  for (int i = 0; i < n; ++i)
    shift = std::max(shift, std::clamp(eta[i], -kEtaClamp, kEtaClamp));
  w.resize(n);
  for (int pos = 0; pos < n; ++pos)
    w[pos] = std::exp(std::clamp(eta[rs.order[pos]], -kEtaClamp, kEtaClamp) - shift);
  suffix.resize(n + 1);
  suffix[n] = 0.0;
  for (int pos = n - 1; pos >= 0; --pos) suffix[pos] = suffix[pos + 1] + w[pos];
}

}  // namespace

RiskStructure build_risk_structure(const Eigen::VectorXd& y, const Eigen::VectorXi& delta) {
  const int n = static_cast<int>(y.size());
  if (delta.size() != n) throw InputError("build_risk_structure: y/delta length mismatch");
  for (int i = 0; i < n; ++i) {
    if (!(y[i] > 0) || !std::isfinite(y[i]))
      throw InputError("build_risk_structure: times must be strictly positive");
    if (delta[i] != 0 && delta[i] != 1)
      throw InputError("build_risk_structure: event indicators must be 0 or 1");
  }
  RiskStructure rs;
  rs.n = n;
  rs.order.resize(n);
  std::iota(rs.order.begin(), rs.order.end(), 0);
  std::stable_sort(rs.order.begin(), rs.order.end(),
                   [&](int a, int b) { return y[a] < y[b]; });
  rs.event_at.resize(n);
  for (int pos = 0; pos < n; ++pos)
    rs.event_at[pos] = static_cast<char>(delta[rs.order[pos]]);
  int pos = 0;
  while (pos < n) {
    int end = pos;
    int events = 0;
    while (end < n && y[rs.order[end]] == y[rs.order[pos]]) {
      events += delta[rs.order[end]];
      ++end;
    }
    rs.group_start.push_back(pos);
    rs.group_events.push_back(events);
    rs.n_events += events;
    pos = end;
  }
  if (rs.n_events == 0)
    throw InputError("build_risk_structure: no events, partial likelihood undefined");
  return rs;
}

double log_partial_likelihood(const Eigen::VectorXd& eta, const RiskStructure& rs) {
  check_eta(eta, rs);
  double shift;
  Eigen::VectorXd w, suffix;
  shifted_hazards(eta, rs, shift, w, suffix);

  double ll = 0.0;
  for (int pos = 0; pos < rs.n; ++pos)
    if (rs.event_at[pos]) ll += eta[rs.order[pos]];
  for (size_t g = 0; g < rs.group_start.size(); ++g) {
    const int d = rs.group_events[g];
    if (d == 0) continue;
    ll -= d * (std::log(suffix[rs.group_start[g]]) + shift);
  }
  return ll;
}

Eigen::VectorXd expected_events(const Eigen::VectorXd& eta, const RiskStructure& rs) {
  check_eta(eta, rs);
  double shift;
  Eigen::VectorXd w, suffix;
  shifted_hazards(eta, rs, shift, w, suffix);

  Eigen::VectorXd e(rs.n);
  double accum = 0.0;  // sum over processed event times of d_g / S_g
  for (size_t g = 0; g < rs.group_start.size(); ++g) {
    const int start = rs.group_start[g];
    const int end = (g + 1 < rs.group_start.size()) ? rs.group_start[g + 1]
                                                    : rs.n;
    if (rs.group_events[g] > 0) accum += rs.group_events[g] / suffix[start];
    for (int p = start; p < end; ++p) e[rs.order[p]] = w[p] * accum;
  }
  return e;
}

Eigen::VectorXd working_residual(const Eigen::VectorXi& delta, const Eigen::VectorXd& e) {
  if (delta.size() != e.size()) throw InputError("working_residual: length mismatch");
  return delta.cast<double>() - e;
}

}  // namespace funcox
