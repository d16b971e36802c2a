#include "causalts/structure.hpp"

#include "causalts/error.hpp"
#include "causalts/stats.hpp"

#include <cmath>

namespace causalts {

std::vector<Eigen::MatrixXd> lagged_effects(const Eigen::MatrixXd& b0,
                                            const std::vector<Eigen::MatrixXd>& m) {
  const Eigen::Index n = b0.rows();
  const Eigen::MatrixXd i_minus_b0 = Eigen::MatrixXd::Identity(n, n) - b0;
  if (Eigen::FullPivLU<Eigen::MatrixXd>(i_minus_b0).rank() < n) {
    throw EstimationError("I - B0 is singular; lagged effects are undefined");
  }
  std::vector<Eigen::MatrixXd> out;
  out.reserve(m.size());
  for (const auto& mt : m) out.push_back(i_minus_b0 * mt);
  return out;
}

double lag_effect_threshold(const std::vector<Eigen::MatrixXd>& b, double quantile) {
  if (b.empty()) throw ContractError("threshold_lagged needs at least B0");
  if (b.size() < 2 || b[1].size() == 0) return 0.0;
  std::vector<double> mags(b[1].data(), b[1].data() + b[1].size());
  for (double& v : mags) v = std::abs(v);
  return empirical_quantile(std::move(mags), quantile);
}

std::vector<Eigen::MatrixXd> threshold_lagged(const std::vector<Eigen::MatrixXd>& b,
                                              double quantile) {
  const double cut = lag_effect_threshold(b, quantile);
  std::vector<Eigen::MatrixXd> out = b;
  for (std::size_t tau = 1; tau < out.size(); ++tau) {
    out[tau] = (out[tau].array().abs() >= cut).select(out[tau], 0.0);
  }
  return out;
}

GrangerMatrix granger_matrix(const CausalStructure& structure,
                             bool include_instantaneous) {
  const Eigen::Index n = structure.dim();
  GrangerMatrix g;
  g.max_lag = structure.lags();
  g.include_instantaneous = include_instantaneous;
  g.cause_effect = BoolMatrix::Constant(n, n, false);
  g.self_lags.assign(static_cast<std::size_t>(n), false);
  const std::size_t first = include_instantaneous ? 0 : 1;
  for (std::size_t tau = first; tau < structure.B.size(); ++tau) {
    const auto& b = structure.B[tau];
    for (Eigen::Index j = 0; j < n; ++j) {
      for (Eigen::Index i = 0; i < n; ++i) {
        if (b(j, i) == 0.0) continue;
        if (i == j) {
          if (tau >= 1) g.self_lags[j] = true;
        } else {
          g.cause_effect(j, i) = true;
        }
      }
    }
  }
  return g;
}

}  // namespace causalts
