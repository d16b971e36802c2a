#pragma once

#include "causalts/structure.hpp"
#include "causalts/timeseries.hpp"
#include "causalts/vecm.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <random>
#include <string>
#include <vector>

namespace causalts {

enum class NoiseFamily { Uniform, Laplace, StudentT, Gaussian };

NoiseFamily parse_noise_family(const std::string& name);

struct NoiseSpec {
  NoiseFamily family = NoiseFamily::Uniform;
  double df = 5.0;  // student-t only, must exceed 2
};

// Unit-variance draw from the family.
double draw_noise(const NoiseSpec& spec, std::mt19937_64& rng);

// Exogenous regressors z_t: independent Gaussian AR(1) processes.
struct ExogSpec {
  int d = 0;
  double ar = 0.5;
  double scale = 1.0;
};

// Structural VAR
//   x_t = B0 x_t + mu + sum_tau B_tau x_{t-tau} + gamma z_t + eps_t
// with B_tau = (I - B0) M_tau, i.e. M holds the reduced-form lag matrices.
struct GeneratorSpec {
  int n = 1;
  int T = 100;
  Eigen::MatrixXd B0;               // n x n, acyclic; empty means zero
  std::vector<Eigen::MatrixXd> M;   // reduced-form lag matrices
  Eigen::VectorXd mu;               // structural intercept; empty means zero
  Eigen::MatrixXd gamma;            // n x d structural exogenous loading
  NoiseSpec noise;
  Eigen::VectorXd noise_scale;      // empty means all ones
  ExogSpec exog;
  std::uint64_t seed = 0;
  int burn_in = 200;
  bool allow_nonstationary = false;
};

struct SvarSample {
  TimeSeriesMatrix endog;
  Eigen::MatrixXd exog;  // T x d
  CausalStructure truth;
};

SvarSample generate_svar(const GeneratorSpec& spec);

// dx_t = alpha (beta' x_{t-1} + rho) + mu + sum Gamma_tau dx_{t-tau}
//        + gamma z_t + (I - B0)^{-1} eps_t
// rho is the restricted constant (only with const_in_space), mu the
// unrestricted one.
struct CointegrationSpec {
  int n = 2;
  int T = 365;
  Eigen::MatrixXd alpha;            // n x r (r = 0: independent random walks)
  Eigen::MatrixXd beta;             // n x r
  Eigen::VectorXd rho;              // r, used when const_in_space
  Eigen::VectorXd mu;               // n, used when !const_in_space; empty = 0
  std::vector<Eigen::MatrixXd> Gamma;
  Eigen::MatrixXd gamma;            // n x d
  Eigen::MatrixXd B0;               // empty means zero
  bool const_in_space = false;
  NoiseSpec noise;
  ExogSpec exog;
  std::uint64_t seed = 0;
  int burn_in = 200;
};

struct CointegratedSample {
  TimeSeriesMatrix endog;
  Eigen::MatrixXd exog;
  VecmModel truth;  // alpha, beta (constant row appended when inside), Pi, Gamma
};

CointegratedSample generate_cointegrated(const CointegrationSpec& spec);

// Error-correcting system with r relations: beta = [I_r; B], alpha =
// [-adjustment I_r; 0]. The last n - r series are weakly exogenous random
// walks; B has entries of magnitude uniform on [0.5, 1] with random sign,
// drawn from `seed`.
CointegrationSpec default_cointegration_spec(int n, int r, int T,
                                             std::uint64_t seed,
                                             double adjustment = 0.5);

// Random DAG in a random causal order: each admissible pair gets an edge
// with probability `density`, coefficient magnitude uniform on
// [min_abs, max_abs] with random sign.
Eigen::MatrixXd random_dag(int m, double density, std::uint64_t seed,
                           double min_abs = 0.5, double max_abs = 0.9);

// Normalized Amari index of P = W_hat A, in [0, 1]; 0 iff P is a scaled
// permutation.
double amari_index(const Eigen::MatrixXd& p);

std::vector<std::string> default_names(int n, const std::string& prefix = "x");

}  // namespace causalts
