#include "causalts/lingam.hpp"

#include "causalts/error.hpp"
#include "causalts/stats.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <random>
#include <thread>

namespace causalts {

std::vector<int> hungarian(const Eigen::MatrixXd& cost) {
  // Shortest augmenting path with row/column potentials, O(m^3).
  const int m = static_cast<int>(cost.rows());
  if (cost.cols() != m) throw ContractError("assignment cost matrix must be square");
  const double inf = std::numeric_limits<double>::infinity();
  std::vector<double> u(m + 1, 0.0), v(m + 1, 0.0);
  std::vector<int> p(m + 1, 0), way(m + 1, 0);
  for (int i = 1; i <= m; ++i) {
    p[0] = i;
    int j0 = 0;
    std::vector<double> minv(m + 1, inf);
    std::vector<char> used(m + 1, 0);
    do {
      used[j0] = 1;
      const int i0 = p[j0];
      double delta = inf;
      int j1 = 0;
      for (int j = 1; j <= m; ++j) {
        if (used[j]) continue;
        const double cur = cost(i0 - 1, j - 1) - u[i0] - v[j];
        if (cur < minv[j]) {
          minv[j] = cur;
          way[j] = j0;
        }
        if (minv[j] < delta) {
          delta = minv[j];
          j1 = j;
        }
      }
      for (int j = 0; j <= m; ++j) {
        if (used[j]) {
          u[p[j]] += delta;
          v[j] -= delta;
        } else {
          minv[j] -= delta;
        }
      }
      j0 = j1;
    } while (p[j0] != 0);
    do {
      const int j1 = way[j0];
      p[j0] = p[j1];
      j0 = j1;
    } while (j0 != 0);
  }
  std::vector<int> assignment(m, -1);
  for (int j = 1; j <= m; ++j) {
    if (p[j] > 0) assignment[p[j] - 1] = j - 1;
  }
  return assignment;
}

double upper_triangular_mass(const Eigen::MatrixXd& b, const std::vector<int>& order) {
  double mass = 0.0;
  for (std::size_t i = 0; i < order.size(); ++i) {
    for (std::size_t j = i + 1; j < order.size(); ++j) {
      const double v = b(order[i], order[j]);
      mass += v * v;
    }
  }
  return mass;
}

std::vector<int> causal_order_of(const Eigen::MatrixXd& b, int exhaustive_limit) {
  const int m = static_cast<int>(b.rows());
  std::vector<int> order(m);
  std::iota(order.begin(), order.end(), 0);
  if (m <= exhaustive_limit) {
    std::vector<int> best = order;
    double best_mass = upper_triangular_mass(b, order);
    while (std::next_permutation(order.begin(), order.end())) {
      const double mass = upper_triangular_mass(b, order);
      if (mass < best_mass) {
        best_mass = mass;
        best = order;
      }
    }
    return best;
  }
  // Greedy: the next variable is the one least driven by those remaining.
  std::vector<int> remaining = order;
  order.clear();
  while (!remaining.empty()) {
    std::size_t pick = 0;
    double pick_mass = std::numeric_limits<double>::infinity();
    for (std::size_t a = 0; a < remaining.size(); ++a) {
      double mass = 0.0;
      for (int other : remaining) {
        if (other != remaining[a]) mass += b(remaining[a], other) * b(remaining[a], other);
      }
      if (mass < pick_mass) {
        pick_mass = mass;
        pick = a;
      }
    }
    order.push_back(remaining[pick]);
    remaining.erase(remaining.begin() + static_cast<std::ptrdiff_t>(pick));
  }
  return order;
}

bool is_acyclic(const Eigen::MatrixXd& adjacency) {
  // Kahn's algorithm; adjacency(i, j) != 0 is the edge j -> i.
  const Eigen::Index m = adjacency.rows();
  std::vector<int> indegree(static_cast<std::size_t>(m), 0);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (adjacency(i, j) != 0.0) ++indegree[i];
    }
  }
  std::vector<Eigen::Index> ready;
  for (Eigen::Index i = 0; i < m; ++i) {
    if (indegree[i] == 0) ready.push_back(i);
  }
  Eigen::Index visited = 0;
  while (!ready.empty()) {
    const Eigen::Index j = ready.back();
    ready.pop_back();
    ++visited;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (adjacency(i, j) != 0.0 && --indegree[i] == 0) ready.push_back(i);
    }
  }
  return visited == m;
}

InstantEffects lingam_from_ica(const IcaResult& ica, int exhaustive_limit) {
  const Eigen::Index m = ica.unmixing.rows();
  if (m < 2) throw ContractError("LiNGAM needs at least two variables");

  // Permutation and ordering are resolved in standard-deviation units
  // (sd_i^2 = (A A')_ii because the sources have unit variance), so that
  // rescaling an input column cannot change which edges look small.
  Eigen::VectorXd sd = Eigen::VectorXd::Ones(m);
  if (ica.mixing.rows() == m && ica.mixing.cols() == m) {
    sd = (ica.mixing * ica.mixing.transpose()).diagonal().cwiseSqrt();
    if (!(sd.minCoeff() > 0.0)) throw EstimationError("LiNGAM: mixing matrix has a zero row");
  }
  const Eigen::MatrixXd w = ica.unmixing * sd.asDiagonal();

  // cost(i, c): put component row c at variable position i.
  const double big = 1e300;
  Eigen::MatrixXd cost(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index c = 0; c < m; ++c) {
      const double a = std::abs(w(c, i));
      cost(i, c) = a > 0.0 ? std::min(1.0 / a, big) : big;
    }
  }
  const std::vector<int> rows = hungarian(cost);

  Eigen::MatrixXd wt(m, m);
  const double scale = w.cwiseAbs().maxCoeff();
  for (Eigen::Index i = 0; i < m; ++i) {
    const double diag = w(rows[i], i);
    if (!(std::abs(diag) > 1e-12 * scale)) {
      throw EstimationError("LiNGAM: zero diagonal entry after permutation of W");
    }
    wt.row(i) = w.row(rows[i]) / diag;
  }

  InstantEffects out;
  Eigen::MatrixXd b = Eigen::MatrixXd::Identity(m, m) - wt;
  b.diagonal().setZero();
  out.causal_order = causal_order_of(b, exhaustive_limit);
  for (std::size_t i = 0; i < out.causal_order.size(); ++i) {
    for (std::size_t j = i + 1; j < out.causal_order.size(); ++j) {
      b(out.causal_order[i], out.causal_order[j]) = 0.0;
    }
  }
  out.B0 = sd.asDiagonal() * b * sd.cwiseInverse().asDiagonal();
  out.retained = out.B0.array() != 0.0;
  return out;
}

InstantEffects estimate_lingam(const Eigen::MatrixXd& data,
                               const LingamOptions& options) {
  const IcaResult ica = fastica(data, options.ica);
  return lingam_from_ica(ica, options.exhaustive_limit);
}

namespace {

// Regression of every variable on its predecessors in `order`, from a
// covariance matrix. Returns false when a predecessor block is singular.
bool ordered_regression(const Eigen::MatrixXd& cov, const std::vector<int>& order,
                        Eigen::MatrixXd& b) {
  const Eigen::Index m = cov.rows();
  b.setZero(m, m);
  for (std::size_t pos = 1; pos < order.size(); ++pos) {
    const auto p = static_cast<Eigen::Index>(pos);
    Eigen::MatrixXd spp(p, p);
    Eigen::VectorXd spv(p);
    for (Eigen::Index a = 0; a < p; ++a) {
      spv(a) = cov(order[a], order[pos]);
      for (Eigen::Index c = 0; c < p; ++c) spp(a, c) = cov(order[a], order[c]);
    }
    Eigen::LLT<Eigen::MatrixXd> llt(spp);
    if (llt.info() != Eigen::Success) return false;
    const Eigen::VectorXd coef = llt.solve(spv);
    for (Eigen::Index a = 0; a < p; ++a) b(order[pos], order[a]) = coef(a);
  }
  return true;
}

}  // namespace

InstantEffects prune_edges(const Eigen::MatrixXd& residuals,
                           const InstantEffects& point,
                           const PruneOptions& options,
                           PruneDiagnostics* diagnostics) {
  if (options.n_boot < 100) {
    throw ContractError("edge pruning needs at least 100 bootstrap replicates, got " +
                        std::to_string(options.n_boot));
  }
  if (!(options.level > 0.0 && options.level < 1.0)) {
    throw ContractError("pruning level must lie in (0, 1)");
  }
  const Eigen::Index t = residuals.rows();
  const Eigen::Index m = residuals.cols();
  if (point.B0.rows() != m || static_cast<Eigen::Index>(point.causal_order.size()) != m) {
    throw ContractError("point estimate does not match the residual dimension");
  }
  const Eigen::MatrixXd centered = residuals.rowwise() - residuals.colwise().mean();

  const auto n_boot = static_cast<std::size_t>(options.n_boot);
  std::vector<Eigen::MatrixXd> replicates(n_boot);
  std::vector<char> ok(n_boot, 0);

  const auto work = [&](std::size_t first, std::size_t last) {
    Eigen::MatrixXd sample(t, m);
    for (std::size_t r = first; r < last; ++r) {
      std::seed_seq seq{static_cast<std::uint32_t>(options.seed & 0xffffffffu),
                        static_cast<std::uint32_t>(options.seed >> 32),
                        static_cast<std::uint32_t>(r)};
      std::mt19937_64 rng(seq);
      std::uniform_int_distribution<Eigen::Index> pick(0, t - 1);
      for (Eigen::Index i = 0; i < t; ++i) sample.row(i) = centered.row(pick(rng));
      const Eigen::MatrixXd c = sample.rowwise() - sample.colwise().mean();
      const Eigen::MatrixXd cov = c.transpose() * c / static_cast<double>(t);
      ok[r] = ordered_regression(cov, point.causal_order, replicates[r]) ? 1 : 0;
    }
  };
  unsigned threads = options.threads > 0 ? static_cast<unsigned>(options.threads)
                                         : std::max(1u, std::thread::hardware_concurrency());
  threads = std::min<unsigned>(threads, static_cast<unsigned>(n_boot));
  {
    std::vector<std::jthread> pool;
    const std::size_t chunk = (n_boot + threads - 1) / threads;
    for (unsigned w = 0; w < threads; ++w) {
      const std::size_t first = w * chunk;
      const std::size_t last = std::min(n_boot, first + chunk);
      if (first < last) pool.emplace_back(work, first, last);
    }
  }

  const auto failed = static_cast<int>(std::count(ok.begin(), ok.end(), 0));
  if (failed > options.n_boot / 10) {
    throw EstimationError("edge pruning: " + std::to_string(failed) + " of " +
                          std::to_string(options.n_boot) +
                          " bootstrap replicates failed");
  }

  const double candidates = static_cast<double>(m * (m - 1) / 2);
  const double edge_level = options.bonferroni ? options.level / candidates : options.level;

  InstantEffects out = point;
  out.pruned = true;
  out.retained = BoolMatrix::Constant(m, m, false);
  Eigen::MatrixXd lower = Eigen::MatrixXd::Zero(m, m);
  Eigen::MatrixXd upper = Eigen::MatrixXd::Zero(m, m);
  std::vector<double> values;
  values.reserve(n_boot);
  for (std::size_t pos = 1; pos < point.causal_order.size(); ++pos) {
    for (std::size_t pre = 0; pre < pos; ++pre) {
      const int i = point.causal_order[pos];
      const int j = point.causal_order[pre];
      values.clear();
      for (std::size_t r = 0; r < n_boot; ++r) {
        if (ok[r]) values.push_back(replicates[r](i, j));
      }
      lower(i, j) = empirical_quantile(values, edge_level / 2.0);
      upper(i, j) = empirical_quantile(values, 1.0 - edge_level / 2.0);
      out.retained(i, j) = lower(i, j) > 0.0 || upper(i, j) < 0.0;
    }
  }
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) {
      if (!out.retained(i, j)) out.B0(i, j) = 0.0;
    }
  }
  if (diagnostics) {
    diagnostics->lower = std::move(lower);
    diagnostics->upper = std::move(upper);
    diagnostics->failed_replicates = failed;
    diagnostics->edge_level = edge_level;
  }
  return out;
}

InstantEffects prune_edges(const Eigen::MatrixXd& residuals, int n_boot,
                           double level, std::uint64_t seed) {
  if (n_boot < 100) {
    throw ContractError("edge pruning needs at least 100 bootstrap replicates, got " +
                        std::to_string(n_boot));
  }
  LingamOptions lo;
  lo.ica.seed = seed;
  const InstantEffects point = estimate_lingam(residuals, lo);
  PruneOptions po;
  po.n_boot = n_boot;
  po.level = level;
  po.seed = seed;
  return prune_edges(residuals, point, po);
}

}  // namespace causalts
