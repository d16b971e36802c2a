#pragma once

#include <Eigen/Dense>

#include <string>
#include <vector>

namespace causalts {

struct WeightedEdge {
  int from = 0;
  int to = 0;
  double weight = 0.0;
  int lag = 0;
};

struct WeightedDigraph {
  std::vector<std::string> nodes;
  std::vector<WeightedEdge> edges;
};

// One edge i -> j for every nonzero b(j, i). Self-loops appear for lag >= 1.
// Lag-0 graphs must be acyclic and free of self-loops (ContractError).
WeightedDigraph digraph_from_matrix(const Eigen::MatrixXd& b,
                                    const std::vector<std::string>& names, int lag);

// Graphviz digraph; every node is declared, edge labels are the weights
// rounded to three decimals.
std::string to_dot(const WeightedDigraph& g, const std::string& graph_name);

}  // namespace causalts
