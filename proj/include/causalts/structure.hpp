#pragma once

#include "causalts/lingam.hpp"

#include <Eigen/Dense>

#include <vector>

namespace causalts {

struct ThresholdRecord {
  int n_boot = 0;
  double prune_level = 0.0;
  bool bonferroni = true;
  double lag_quantile = 0.0;
  double lag_threshold = 0.0;  // |B| cutoff derived from B1
  bool thresholded = false;
};

// x_t = mu + sum_{tau=0..k} B_tau x_{t-tau} + gamma z_t + eps_t
struct CausalStructure {
  std::vector<Eigen::MatrixXd> B;  // B0..Bk
  Eigen::VectorXd mu;
  Eigen::MatrixXd gamma;
  std::vector<int> order;          // causal order of B0, earliest first
  Eigen::MatrixXd noise;           // (T-k) x n structural shocks
  ThresholdRecord thresholds;

  int lags() const { return static_cast<int>(B.size()) - 1; }
  Eigen::Index dim() const { return B.empty() ? 0 : B.front().rows(); }
};

struct GrangerMatrix {
  BoolMatrix cause_effect;  // (j, i) true iff series i causes series j
  std::vector<bool> self_lags;
  int max_lag = 0;
  bool include_instantaneous = false;
};

// B_tau = (I - B0) M_tau for every lag matrix.
std::vector<Eigen::MatrixXd> lagged_effects(const Eigen::MatrixXd& b0,
                                            const std::vector<Eigen::MatrixXd>& m);

// q-quantile of |entries of B[1]|; 0 when there is no lag matrix.
double lag_effect_threshold(const std::vector<Eigen::MatrixXd>& b, double quantile = 0.70);

// Zeroes every entry of B[1..] whose magnitude is below the threshold.
// B[0] is left untouched.
std::vector<Eigen::MatrixXd> threshold_lagged(const std::vector<Eigen::MatrixXd>& b,
                                              double quantile = 0.70);

GrangerMatrix granger_matrix(const CausalStructure& structure,
                             bool include_instantaneous);

}  // namespace causalts
