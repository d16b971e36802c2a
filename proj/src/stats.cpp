#include "causalts/stats.hpp"

#include "causalts/error.hpp"

#include <algorithm>
#include <cmath>

namespace causalts {

double empirical_quantile(std::vector<double> sample, double q) {
  if (sample.empty()) throw ContractError("quantile of an empty sample");
  if (!(q >= 0.0 && q <= 1.0)) throw ContractError("quantile level must lie in [0, 1]");
  std::sort(sample.begin(), sample.end());
  const double h = static_cast<double>(sample.size() - 1) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, sample.size() - 1);
  return sample[lo] + (h - static_cast<double>(lo)) * (sample[hi] - sample[lo]);
}

}  // namespace causalts
