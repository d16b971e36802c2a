#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <string>

namespace causalts {

// Contrast functions approximating negentropy:
//   LogCosh   G(u) = log cosh(u)
//   Exp       G(u) = -exp(-u^2 / 2)
//   Kurtosis  G(u) = u^4 / 4
enum class Contrast { LogCosh, Exp, Kurtosis };

Contrast parse_contrast(const std::string& name);
const char* to_string(Contrast c);

struct IcaOptions {
  Contrast contrast = Contrast::LogCosh;
  double tol = 1e-8;
  int max_iter = 1000;
  std::uint64_t seed = 0;
  // Independent random initializations; the run with the largest summed
  // negentropy proxy wins (converged runs first).
  int restarts = 5;
};

// x = sources * mixing'  (each observation x_t = A s_t).
struct IcaResult {
  Eigen::MatrixXd mixing;     // A, m x m
  Eigen::MatrixXd unmixing;   // W, m x m, W A = I
  Eigen::MatrixXd sources;    // T x m, unit variance
  Eigen::VectorXd mean;       // column means removed before unmixing
  int iterations = 0;
  bool converged = false;
  double negentropy = 0.0;    // summed contrast proxy of the sources
};

// Symmetric (parallel) fixed-point fastICA on eigen-whitened data. All m
// components are retained.
IcaResult fastica(const Eigen::MatrixXd& x, const IcaOptions& options = {});

// Negentropy proxy (E G(y) - E G(nu))^2 of a unit-variance sample.
double negentropy_proxy(const Eigen::VectorXd& y, Contrast c);

}  // namespace causalts
