#include "causalts/ica.hpp"

#include "causalts/error.hpp"
#include "causalts/linalg.hpp"

#include <cmath>
#include <numbers>
#include <random>

namespace causalts {
namespace {

double contrast_value(double u, Contrast c) {
  switch (c) {
    case Contrast::LogCosh: {
      // log cosh(u) = |u| + log1p(exp(-2|u|)) - log 2, overflow-safe
      const double a = std::abs(u);
      return a + std::log1p(std::exp(-2.0 * a)) - std::numbers::ln2;
    }
    case Contrast::Exp: return -std::exp(-0.5 * u * u);
    case Contrast::Kurtosis: return 0.25 * u * u * u * u;
  }
  return 0.0;
}

// E G(nu) for a standard normal nu.
double gaussian_reference(Contrast c) {
  switch (c) {
    case Contrast::Exp: return -1.0 / std::numbers::sqrt2;
    case Contrast::Kurtosis: return 0.75;
    case Contrast::LogCosh: break;
  }
  static const double logcosh_ref = [] {
    // Simpson's rule on [-12, 12]; the Gaussian tail beyond is negligible.
    constexpr int kSteps = 4800;
    const double lo = -12.0;
    const double h = 24.0 / kSteps;
    double acc = 0.0;
    for (int i = 0; i <= kSteps; ++i) {
      const double u = lo + i * h;
      const double w = (i == 0 || i == kSteps) ? 1.0 : (i % 2 ? 4.0 : 2.0);
      acc += w * contrast_value(u, Contrast::LogCosh) * std::exp(-0.5 * u * u);
    }
    return acc * h / 3.0 / std::sqrt(2.0 * std::numbers::pi);
  }();
  return logcosh_ref;
}

// Applies g and accumulates mean g' column-wise for y = z w'.
void nonlinearity(const Eigen::MatrixXd& y, Contrast c, Eigen::MatrixXd& g,
                  Eigen::VectorXd& mean_dg) {
  g.resize(y.rows(), y.cols());
  mean_dg.setZero(y.cols());
  for (Eigen::Index j = 0; j < y.cols(); ++j) {
    double acc = 0.0;
    for (Eigen::Index i = 0; i < y.rows(); ++i) {
      const double u = y(i, j);
      switch (c) {
        case Contrast::LogCosh: {
          const double th = std::tanh(u);
          g(i, j) = th;
          acc += 1.0 - th * th;
          break;
        }
        case Contrast::Exp: {
          const double e = std::exp(-0.5 * u * u);
          g(i, j) = u * e;
          acc += (1.0 - u * u) * e;
          break;
        }
        case Contrast::Kurtosis:
          g(i, j) = u * u * u;
          acc += 3.0 * u * u;
          break;
      }
    }
    mean_dg(j) = acc / static_cast<double>(y.rows());
  }
}

Eigen::MatrixXd symmetric_decorrelation(const Eigen::MatrixXd& w) {
  return inverse_sqrt_spd(w * w.transpose()) * w;
}

struct Run {
  Eigen::MatrixXd w;
  int iterations = 0;
  bool converged = false;
  double negentropy = 0.0;
};

Run run_fixed_point(const Eigen::MatrixXd& z, const IcaOptions& opt,
                    std::uint64_t restart) {
  const Eigen::Index m = z.cols();
  std::seed_seq seq{static_cast<std::uint32_t>(opt.seed & 0xffffffffu),
                    static_cast<std::uint32_t>(opt.seed >> 32),
                    static_cast<std::uint32_t>(restart)};
  std::mt19937_64 rng(seq);
  std::normal_distribution<double> normal;
  Eigen::MatrixXd w(m, m);
  for (Eigen::Index i = 0; i < m; ++i) {
    for (Eigen::Index j = 0; j < m; ++j) w(i, j) = normal(rng);
  }
  w = symmetric_decorrelation(w);

  const double t = static_cast<double>(z.rows());
  Run run;
  Eigen::MatrixXd g;
  Eigen::VectorXd mean_dg;
  for (int it = 1; it <= opt.max_iter; ++it) {
    const Eigen::MatrixXd y = z * w.transpose();
    nonlinearity(y, opt.contrast, g, mean_dg);
    Eigen::MatrixXd w_new = g.transpose() * z / t - mean_dg.asDiagonal() * w;
    w_new = symmetric_decorrelation(w_new);
    const double change =
        (1.0 - (w_new * w.transpose()).diagonal().cwiseAbs().array()).abs().maxCoeff();
    w = std::move(w_new);
    run.iterations = it;
    if (change < opt.tol) {
      run.converged = true;
      break;
    }
  }
  run.w = w;
  const Eigen::MatrixXd y = z * w.transpose();
  for (Eigen::Index j = 0; j < m; ++j) {
    run.negentropy += negentropy_proxy(y.col(j), opt.contrast);
  }
  return run;
}

}  // namespace

Contrast parse_contrast(const std::string& name) {
  if (name == "logcosh") return Contrast::LogCosh;
  if (name == "exp") return Contrast::Exp;
  if (name == "kurtosis") return Contrast::Kurtosis;
  throw InputError("unknown ICA contrast '" + name +
                   "' (expected logcosh, exp or kurtosis)");
}

const char* to_string(Contrast c) {
  switch (c) {
    case Contrast::LogCosh: return "logcosh";
    case Contrast::Exp: return "exp";
    case Contrast::Kurtosis: return "kurtosis";
  }
  return "unknown";
}

double negentropy_proxy(const Eigen::VectorXd& y, Contrast c) {
  double acc = 0.0;
  for (Eigen::Index i = 0; i < y.size(); ++i) acc += contrast_value(y(i), c);
  const double diff = acc / static_cast<double>(y.size()) - gaussian_reference(c);
  return diff * diff;
}

IcaResult fastica(const Eigen::MatrixXd& x, const IcaOptions& options) {
  const Eigen::Index t = x.rows();
  const Eigen::Index m = x.cols();
  if (m < 2) throw ContractError("fastICA needs at least two variables");
  if (t <= m) throw SizeError("fastICA needs more observations than variables");
  if (options.restarts < 1) throw ContractError("fastICA needs at least one run");

  IcaResult out;
  out.mean = x.colwise().mean().transpose();
  const Eigen::MatrixXd xc = x.rowwise() - out.mean.transpose();

  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(moment(xc, xc));
  const Eigen::VectorXd d = es.eigenvalues();
  if (!(d.minCoeff() > 1e-12 * d.maxCoeff())) {
    throw EstimationError("cannot whiten: data covariance is rank deficient");
  }
  // K = D^{-1/2} E'
  const Eigen::MatrixXd whitening =
      d.array().rsqrt().matrix().asDiagonal() * es.eigenvectors().transpose();
  const Eigen::MatrixXd z = xc * whitening.transpose();

  Run best;
  bool have = false;
  for (int r = 0; r < options.restarts; ++r) {
    Run run = run_fixed_point(z, options, static_cast<std::uint64_t>(r));
    const bool better =
        !have || (run.converged && !best.converged) ||
        (run.converged == best.converged && run.negentropy > best.negentropy);
    if (better) {
      best = std::move(run);
      have = true;
    }
  }

  out.unmixing = best.w * whitening;
  out.mixing = es.eigenvectors() * d.array().sqrt().matrix().asDiagonal() *
               best.w.transpose();
  out.sources = xc * out.unmixing.transpose();
  out.iterations = best.iterations;
  out.converged = best.converged;
  out.negentropy = best.negentropy;
  return out;
}

}  // namespace causalts
