#include "causalts/critical_values.hpp"

#include "causalts/error.hpp"

#include <boost/math/distributions/normal.hpp>

#include <string>

namespace causalts {
namespace {

// Osterwald-Lenum, constant restricted to the cointegration space.
constexpr std::array<CriticalTriple, 10> kTraceInside{{
    {7.52, 9.24, 12.97},
    {17.85, 19.96, 24.60},
    {32.00, 34.91, 41.07},
    {49.65, 53.12, 60.16},
    {71.86, 76.07, 84.45},
    {97.18, 102.14, 111.01},
    {126.58, 131.70, 143.09},
    {159.48, 165.58, 177.20},
    {196.37, 202.92, 215.74},
    {236.54, 244.15, 257.68},
}};

// MacKinnon-Haug-Michelis, unrestricted constant.
constexpr std::array<CriticalTriple, 12> kTraceOutside{{
    {2.7055, 3.8415, 6.6349},
    {13.4294, 15.4943, 19.9349},
    {27.0669, 29.7961, 35.4628},
    {44.4929, 47.8545, 54.6815},
    {65.8202, 69.8189, 77.8202},
    {91.1090, 95.7542, 104.9637},
    {120.3673, 125.6185, 135.9825},
    {153.6341, 159.5290, 171.0905},
    {190.8714, 197.3772, 210.0366},
    {232.1030, 239.2468, 253.2526},
    {277.3740, 285.1402, 300.2821},
    {326.5354, 334.9795, 351.2150},
}};

// Response-surface coefficients, constant-only regression.
constexpr double kTauMax = 2.74;
constexpr double kTauMin = -18.83;
constexpr double kTauStar = -1.61;
constexpr std::array<double, 3> kSmallP{2.1659, 1.4412, 0.038269};
constexpr std::array<double, 4> kLargeP{1.7339, 0.93202, -0.12745, -0.010368};

}  // namespace

int trace_table_size(bool const_in_space) {
  return const_in_space ? static_cast<int>(kTraceInside.size())
                        : static_cast<int>(kTraceOutside.size());
}

CriticalTriple trace_critical_values(int common_trends, bool const_in_space) {
  if (common_trends < 1 || common_trends > trace_table_size(const_in_space)) {
    throw UnsupportedDimensionError(
        "no trace-test critical values for n - r = " +
        std::to_string(common_trends) + " with the constant " +
        (const_in_space ? "inside" : "outside") +
        " the cointegration space (tabulated up to " +
        std::to_string(trace_table_size(const_in_space)) + ")");
  }
  return const_in_space ? kTraceInside[common_trends - 1]
                        : kTraceOutside[common_trends - 1];
}

double mackinnon_pvalue(double tau) {
  if (tau > kTauMax) return 1.0;
  if (tau < kTauMin) return 0.0;
  double z = 0.0;
  if (tau <= kTauStar) {
    z = kSmallP[0] + tau * (kSmallP[1] + tau * kSmallP[2]);
  } else {
    z = kLargeP[0] + tau * (kLargeP[1] + tau * (kLargeP[2] + tau * kLargeP[3]));
  }
  return boost::math::cdf(boost::math::normal(), z);
}

double mackinnon_critical(double level) {
  double lo = kTauMin;
  double hi = kTauStar;
  if (!(level > mackinnon_pvalue(lo) && level < mackinnon_pvalue(hi))) {
    throw ContractError("level outside the invertible range of the surface");
  }
  for (int it = 0; it < 200; ++it) {
    const double mid = 0.5 * (lo + hi);
    (mackinnon_pvalue(mid) < level ? lo : hi) = mid;
  }
  return lo;
}

}  // namespace causalts
