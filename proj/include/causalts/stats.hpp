#pragma once

#include <vector>

namespace causalts {

// Empirical q-quantile with linear interpolation between order statistics
// (h = (N-1) q). Takes the sample by value because it sorts it.
double empirical_quantile(std::vector<double> sample, double q);

}  // namespace causalts
