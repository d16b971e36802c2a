#pragma once

#include "causalts/ica.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace causalts {

using BoolMatrix = Eigen::Matrix<bool, Eigen::Dynamic, Eigen::Dynamic>;

struct InstantEffects {
  Eigen::MatrixXd B0;             // B0(i, j): effect of variable j on variable i
  std::vector<int> causal_order;  // variable indices, earliest first
  BoolMatrix retained;            // edges kept after pruning (all nonzero ones before)
  bool pruned = false;
};

// Minimum-cost perfect assignment. cost(i, j) is the cost of giving row i
// column j; returns the column for every row.
std::vector<int> hungarian(const Eigen::MatrixXd& cost);

// Permutation (earliest first) minimizing the squared mass of B above the
// diagonal once rows/columns are put in that order. Exhaustive up to
// `exhaustive_limit` variables, greedy elimination beyond.
std::vector<int> causal_order_of(const Eigen::MatrixXd& b, int exhaustive_limit = 8);

// Sum of B(order[i], order[j])^2 over i < j.
double upper_triangular_mass(const Eigen::MatrixXd& b, const std::vector<int>& order);

bool is_acyclic(const Eigen::MatrixXd& adjacency);

// LiNGAM post-processing of an ICA unmixing matrix: resolve the row
// permutation (assignment on 1/|W_ii|), rescale rows to a unit diagonal,
// B = I - W, order variables, zero the part of B that contradicts the order.
// The assignment and the ordering work on W expressed in standard-deviation
// units of the observed variables; B0 is returned in the original units.
InstantEffects lingam_from_ica(const IcaResult& ica, int exhaustive_limit = 8);

struct LingamOptions {
  IcaOptions ica;
  int exhaustive_limit = 8;
};

// fastICA followed by lingam_from_ica.
InstantEffects estimate_lingam(const Eigen::MatrixXd& data,
                               const LingamOptions& options = {});

struct PruneOptions {
  int n_boot = 1000;
  // Family-wise level; each of the m(m-1)/2 candidate edges is tested at
  // level / m(m-1)/2 when `bonferroni` is set.
  double level = 0.05;
  bool bonferroni = true;
  std::uint64_t seed = 0;
  int threads = 0;  // 0: hardware concurrency
};

struct PruneDiagnostics {
  Eigen::MatrixXd lower;   // interval bounds per candidate edge
  Eigen::MatrixXd upper;
  int failed_replicates = 0;
  double edge_level = 0.0;
};

// Bootstrap (rows with replacement) re-estimation of B0 with the causal order
// held fixed: each variable is regressed on its predecessors in the order.
// An edge is kept iff 0 lies outside the bootstrap quantile interval
// (a/2, 1-a/2). Returns `point` with rejected edges zeroed.
InstantEffects prune_edges(const Eigen::MatrixXd& residuals,
                           const InstantEffects& point,
                           const PruneOptions& options,
                           PruneDiagnostics* diagnostics = nullptr);

// Point estimate by estimate_lingam, then prune_edges.
InstantEffects prune_edges(const Eigen::MatrixXd& residuals, int n_boot,
                           double level, std::uint64_t seed);

}  // namespace causalts
