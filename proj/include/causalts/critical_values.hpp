#pragma once

#include <array>

namespace causalts {

// Quantiles at the 10%, 5% and 1% levels.
using CriticalTriple = std::array<double, 3>;

// Johansen trace-test critical values indexed by the number of common
// trends n - r (the number of eigenvalues summed). Throws
// UnsupportedDimensionError beyond the tabulated range.
CriticalTriple trace_critical_values(int common_trends, bool const_in_space);
int trace_table_size(bool const_in_space);

// Level-stationarity KPSS table: levels {0.10, 0.05, 0.025, 0.01}.
inline constexpr std::array<double, 4> kKpssLevels{0.10, 0.05, 0.025, 0.01};
inline constexpr std::array<double, 4> kKpssCritical{0.347, 0.463, 0.574, 0.739};

// MacKinnon (1994) approximate asymptotic p-value of a Dickey-Fuller /
// Phillips-Perron Z-tau statistic, model with constant, one I(1) series.
double mackinnon_pvalue(double tau);

// Inverse of mackinnon_pvalue over its left tail (levels below ~0.45).
double mackinnon_critical(double level);

}  // namespace causalts
