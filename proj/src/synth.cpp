#include "causalts/synth.hpp"

#include "causalts/error.hpp"
#include "causalts/lingam.hpp"
#include "causalts/linalg.hpp"
#include "causalts/var.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>

namespace causalts {
namespace {

std::mt19937_64 make_rng(std::uint64_t seed, std::uint32_t stream) {
  std::seed_seq seq{static_cast<std::uint32_t>(seed & 0xffffffffu),
                    static_cast<std::uint32_t>(seed >> 32), stream};
  return std::mt19937_64(seq);
}

Eigen::MatrixXd or_zero(const Eigen::MatrixXd& m, Eigen::Index rows,
                        Eigen::Index cols) {
  return m.size() == 0 ? Eigen::MatrixXd::Zero(rows, cols) : m;
}

Eigen::VectorXd or_value(const Eigen::VectorXd& v, Eigen::Index n, double value) {
  return v.size() == 0 ? Eigen::VectorXd::Constant(n, value) : v;
}

Eigen::MatrixXd simulate_exog(const ExogSpec& spec, Eigen::Index steps,
                              std::mt19937_64& rng) {
  Eigen::MatrixXd z = Eigen::MatrixXd::Zero(steps, spec.d);
  std::normal_distribution<double> normal;
  const double innov = spec.scale * std::sqrt(std::max(0.0, 1.0 - spec.ar * spec.ar));
  for (int j = 0; j < spec.d; ++j) {
    double prev = spec.scale * normal(rng);
    for (Eigen::Index t = 0; t < steps; ++t) {
      prev = spec.ar * prev + innov * normal(rng);
      z(t, j) = prev;
    }
  }
  return z;
}

std::vector<int> topological_order(const Eigen::MatrixXd& b0) {
  const Eigen::Index m = b0.rows();
  std::vector<int> order;
  std::vector<char> placed(static_cast<std::size_t>(m), 0);
  while (static_cast<Eigen::Index>(order.size()) < m) {
    bool progress = false;
    for (Eigen::Index i = 0; i < m; ++i) {
      if (placed[i]) continue;
      bool ready = true;
      for (Eigen::Index j = 0; j < m && ready; ++j) {
        if (j != i && !placed[j] && b0(i, j) != 0.0) ready = false;
      }
      if (ready) {
        order.push_back(static_cast<int>(i));
        placed[i] = 1;
        progress = true;
      }
    }
    if (!progress) throw ContractError("B0 is not acyclic");
  }
  return order;
}

}  // namespace

NoiseFamily parse_noise_family(const std::string& name) {
  if (name == "uniform") return NoiseFamily::Uniform;
  if (name == "laplace") return NoiseFamily::Laplace;
  if (name == "student_t" || name == "t") return NoiseFamily::StudentT;
  if (name == "gaussian" || name == "normal") return NoiseFamily::Gaussian;
  throw InputError("unknown noise family '" + name + "'");
}

double draw_noise(const NoiseSpec& spec, std::mt19937_64& rng) {
  switch (spec.family) {
    case NoiseFamily::Uniform: {
      std::uniform_real_distribution<double> u(-std::sqrt(3.0), std::sqrt(3.0));
      return u(rng);
    }
    case NoiseFamily::Laplace: {
      std::exponential_distribution<double> e(1.0);
      std::bernoulli_distribution sign(0.5);
      const double v = e(rng) / std::numbers::sqrt2;
      return sign(rng) ? v : -v;
    }
    case NoiseFamily::StudentT: {
      if (!(spec.df > 2.0)) throw ContractError("student-t noise needs df > 2");
      std::student_t_distribution<double> t(spec.df);
      return t(rng) * std::sqrt((spec.df - 2.0) / spec.df);
    }
    case NoiseFamily::Gaussian: {
      std::normal_distribution<double> normal;
      return normal(rng);
    }
  }
  return 0.0;
}

SvarSample generate_svar(const GeneratorSpec& spec) {
  const int n = spec.n;
  const int k = static_cast<int>(spec.M.size());
  const int d = spec.exog.d;
  if (n < 1 || spec.T < 1) throw ContractError("generator needs n >= 1 and T >= 1");
  if (spec.burn_in < 0) throw ContractError("burn-in must be nonnegative");
  const Eigen::MatrixXd b0 = or_zero(spec.B0, n, n);
  if (b0.rows() != n || b0.cols() != n) throw ContractError("B0 must be n x n");
  if (b0.diagonal().cwiseAbs().maxCoeff() != 0.0 || !is_acyclic(b0)) {
    throw ContractError("B0 must have a zero diagonal and describe an acyclic graph");
  }
  for (const auto& m : spec.M) {
    if (m.rows() != n || m.cols() != n) throw ContractError("lag matrices must be n x n");
  }
  if (k > 0 && !spec.allow_nonstationary) {
    VarModel probe;
    probe.M = spec.M;
    probe.mu = Eigen::VectorXd::Zero(n);
    const double radius = spectral_radius(probe.companion());
    if (!(radius < 1.0)) {
      throw ContractError("generator VAR is not stable (spectral radius " +
                          std::to_string(radius) +
                          "); set allow_nonstationary to simulate it anyway");
    }
  }
  const Eigen::VectorXd mu = or_value(spec.mu, n, 0.0);
  const Eigen::MatrixXd gamma = or_zero(spec.gamma, n, d);
  const Eigen::VectorXd scale = or_value(spec.noise_scale, n, 1.0);
  if (gamma.rows() != n || gamma.cols() != d) throw ContractError("gamma must be n x d");

  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a = (eye - b0).inverse();
  const Eigen::Index steps = spec.burn_in + spec.T;

  std::mt19937_64 noise_rng = make_rng(spec.seed, 1);
  std::mt19937_64 exog_rng = make_rng(spec.seed, 2);
  const Eigen::MatrixXd z = simulate_exog(spec.exog, steps, exog_rng);

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(steps, n);
  Eigen::MatrixXd eps(steps, n);
  for (Eigen::Index t = 0; t < steps; ++t) {
    for (int i = 0; i < n; ++i) eps(t, i) = scale(i) * draw_noise(spec.noise, noise_rng);
    Eigen::VectorXd rhs = mu + eps.row(t).transpose();
    if (d > 0) rhs += gamma * z.row(t).transpose();
    Eigen::VectorXd lagged = Eigen::VectorXd::Zero(n);
    for (int tau = 1; tau <= k && t - tau >= 0; ++tau) {
      lagged += spec.M[tau - 1] * x.row(t - tau).transpose();
    }
    x.row(t) = (a * rhs + lagged).transpose();
  }

  SvarSample out{
      TimeSeriesMatrix(x.bottomRows(spec.T), default_names(n)),
      z.bottomRows(spec.T),
      {}};
  CausalStructure& truth = out.truth;
  truth.B.push_back(b0);
  for (const auto& m : spec.M) truth.B.push_back((eye - b0) * m);
  truth.mu = mu;
  truth.gamma = gamma;
  truth.order = topological_order(b0);
  truth.noise = eps.bottomRows(std::max(0, spec.T - k));
  return out;
}

CointegratedSample generate_cointegrated(const CointegrationSpec& spec) {
  const int n = spec.n;
  const int d = spec.exog.d;
  const Eigen::Index r = spec.alpha.cols();
  if (spec.beta.cols() != r || (r > 0 && (spec.alpha.rows() != n || spec.beta.rows() != n))) {
    throw ContractError("alpha and beta must both be n x r");
  }
  if (r >= n) throw ContractError("cointegration rank must be below n");
  const int k = static_cast<int>(spec.Gamma.size()) + 1;
  const Eigen::MatrixXd b0 = or_zero(spec.B0, n, n);
  if (!is_acyclic(b0)) throw ContractError("B0 must describe an acyclic graph");
  const Eigen::MatrixXd gamma = or_zero(spec.gamma, n, d);
  const Eigen::VectorXd mu = or_value(spec.mu, n, 0.0);
  const Eigen::VectorXd rho = or_value(spec.rho, r, 0.0);
  const Eigen::MatrixXd eye = Eigen::MatrixXd::Identity(n, n);
  const Eigen::MatrixXd a = (eye - b0).inverse();
  const Eigen::Index steps = spec.burn_in + spec.T;

  std::mt19937_64 noise_rng = make_rng(spec.seed, 1);
  std::mt19937_64 exog_rng = make_rng(spec.seed, 2);
  const Eigen::MatrixXd z = simulate_exog(spec.exog, steps, exog_rng);

  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(steps, n);
  Eigen::MatrixXd dx = Eigen::MatrixXd::Zero(steps, n);
  Eigen::VectorXd eps(n);
  for (Eigen::Index t = 1; t < steps; ++t) {
    for (int i = 0; i < n; ++i) eps(i) = draw_noise(spec.noise, noise_rng);
    Eigen::VectorXd step = a * eps;
    if (r > 0) {
      Eigen::VectorXd ect = spec.beta.transpose() * x.row(t - 1).transpose();
      if (spec.const_in_space) ect += rho;
      step += spec.alpha * ect;
    }
    if (!spec.const_in_space) step += mu;
    for (int tau = 1; tau < k && t - tau >= 0; ++tau) {
      step += spec.Gamma[tau - 1] * dx.row(t - tau).transpose();
    }
    if (d > 0) step += gamma * z.row(t).transpose();
    dx.row(t) = step.transpose();
    x.row(t) = x.row(t - 1) + dx.row(t);
  }

  CointegratedSample out{TimeSeriesMatrix(x.bottomRows(spec.T), default_names(n)),
                         z.bottomRows(spec.T),
                         {}};
  VecmModel& truth = out.truth;
  truth.rank = static_cast<int>(r);
  truth.k = k;
  truth.const_in_space = spec.const_in_space;
  truth.alpha = r > 0 ? spec.alpha : Eigen::MatrixXd::Zero(n, 0);
  truth.beta = r > 0 ? spec.beta : Eigen::MatrixXd::Zero(n, 0);
  if (spec.const_in_space) {
    truth.beta.conservativeResize(n + 1, r);
    if (r > 0) truth.beta.row(n) = rho.transpose();
  } else {
    truth.mu = mu;
  }
  truth.Pi = truth.alpha * truth.beta.topRows(n).transpose();
  truth.Gamma = spec.Gamma;
  truth.gamma = gamma;
  return out;
}

CointegrationSpec default_cointegration_spec(int n, int r, int T,
                                             std::uint64_t seed,
                                             double adjustment) {
  if (r < 0 || r >= n) throw ContractError("rank must lie in [0, n)");
  CointegrationSpec spec;
  spec.n = n;
  spec.T = T;
  spec.seed = seed;
  spec.alpha = Eigen::MatrixXd::Zero(n, r);
  spec.beta = Eigen::MatrixXd::Zero(n, r);
  std::mt19937_64 rng = make_rng(seed, 3);
  std::uniform_real_distribution<double> magnitude(0.5, 1.0);
  std::bernoulli_distribution negative(0.5);
  for (int j = 0; j < r; ++j) {
    spec.alpha(j, j) = -adjustment;
    spec.beta(j, j) = 1.0;
    for (int i = r; i < n; ++i) {
      const double v = magnitude(rng);
      spec.beta(i, j) = negative(rng) ? -v : v;
    }
  }
  return spec;
}

Eigen::MatrixXd random_dag(int m, double density, std::uint64_t seed,
                           double min_abs, double max_abs) {
  std::mt19937_64 rng = make_rng(seed, 4);
  std::vector<int> order(static_cast<std::size_t>(m));
  std::iota(order.begin(), order.end(), 0);
  std::shuffle(order.begin(), order.end(), rng);
  std::bernoulli_distribution edge(density);
  std::bernoulli_distribution sign(0.5);
  std::uniform_real_distribution<double> mag(min_abs, max_abs);
  Eigen::MatrixXd b = Eigen::MatrixXd::Zero(m, m);
  for (int j = 1; j < m; ++j) {
    for (int i = 0; i < j; ++i) {
      if (edge(rng)) {
        const double v = mag(rng);
        b(order[j], order[i]) = sign(rng) ? v : -v;
      }
    }
  }
  return b;
}

double amari_index(const Eigen::MatrixXd& p) {
  const Eigen::Index m = p.rows();
  if (m < 2 || p.cols() != m) throw ContractError("Amari index needs a square matrix, m >= 2");
  const Eigen::MatrixXd a = p.cwiseAbs();
  double total = 0.0;
  for (Eigen::Index i = 0; i < m; ++i) {
    const double row_max = a.row(i).maxCoeff();
    const double col_max = a.col(i).maxCoeff();
    if (row_max == 0.0 || col_max == 0.0) {
      throw ContractError("Amari index is undefined with an all-zero row or column");
    }
    total += a.row(i).sum() / row_max - 1.0;
    total += a.col(i).sum() / col_max - 1.0;
  }
  return total / (2.0 * static_cast<double>(m) * static_cast<double>(m - 1));
}

std::vector<std::string> default_names(int n, const std::string& prefix) {
  std::vector<std::string> names;
  for (int i = 1; i <= n; ++i) names.push_back(prefix + std::to_string(i));
  return names;
}

}  // namespace causalts
