#include "causalts/dot.hpp"

#include "causalts/error.hpp"
#include "causalts/lingam.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

namespace causalts {
namespace {

std::string quoted(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    if (c == '"' || c == '\\') out += '\\';
    out += c;
  }
  out += '"';
  return out;
}

std::string label(double w) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.3f", w);
  std::string s = buf;
  if (s == "-0.000") s = "0.000";
  return s;
}

}  // namespace

WeightedDigraph digraph_from_matrix(const Eigen::MatrixXd& b,
                                    const std::vector<std::string>& names, int lag) {
  if (b.rows() != b.cols() || static_cast<std::size_t>(b.rows()) != names.size()) {
    throw ContractError("graph matrix must be square with one name per node");
  }
  if (lag == 0) {
    if (b.diagonal().cwiseAbs().maxCoeff() != 0.0 || !is_acyclic(b)) {
      throw ContractError("instantaneous graph must be acyclic without self-loops");
    }
  }
  WeightedDigraph g;
  g.nodes = names;
  for (Eigen::Index i = 0; i < b.cols(); ++i) {
    for (Eigen::Index j = 0; j < b.rows(); ++j) {
      const double w = b(j, i);
      if (w == 0.0) continue;
      if (!std::isfinite(w)) throw ContractError("graph weights must be finite");
      g.edges.push_back({static_cast<int>(i), static_cast<int>(j), w, lag});
    }
  }
  return g;
}

std::string to_dot(const WeightedDigraph& g, const std::string& graph_name) {
  std::ostringstream os;
  os << "digraph " << quoted(graph_name) << " {\n";
  for (const auto& node : g.nodes) os << "  " << quoted(node) << ";\n";
  for (const auto& e : g.edges) {
    os << "  " << quoted(g.nodes.at(e.from)) << " -> " << quoted(g.nodes.at(e.to))
       << " [label=" << quoted(label(e.weight)) << "];\n";
  }
  os << "}\n";
  return os.str();
}

}  // namespace causalts
