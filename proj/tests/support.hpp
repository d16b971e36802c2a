#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <random>

namespace testsupport {

inline Eigen::VectorXd white_noise(int T, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> normal;
  Eigen::VectorXd v(T);
  for (int t = 0; t < T; ++t) v(t) = normal(rng);
  return v;
}

inline Eigen::VectorXd random_walk(int T, std::uint64_t seed) {
  Eigen::VectorXd v = white_noise(T, seed);
  for (int t = 1; t < T; ++t) v(t) += v(t - 1);
  return v;
}

inline Eigen::VectorXd ar1(int T, double phi, std::uint64_t seed) {
  Eigen::VectorXd e = white_noise(T + 100, seed);
  Eigen::VectorXd v(T + 100);
  v(0) = e(0);
  for (int t = 1; t < T + 100; ++t) v(t) = phi * v(t - 1) + e(t);
  return v.tail(T);
}

inline Eigen::VectorXd diff(const Eigen::VectorXd& v) {
  return v.tail(v.size() - 1) - v.head(v.size() - 1);
}

inline Eigen::MatrixXd no_exog(Eigen::Index rows) { return Eigen::MatrixXd(rows, 0); }

}  // namespace testsupport
