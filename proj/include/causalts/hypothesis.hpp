#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

namespace causalts {

// Which side of the reference distribution counts as evidence against H0.
enum class Tail { Upper, Lower };

// Tabulated p-values are clipped at the table edges; the bound records that
// the true value is at most / at least the reported one.
enum class PValueBound { Exact, AtMost, AtLeast };

inline const std::vector<double>& standard_levels() {
  static const std::vector<double> levels{0.10, 0.05, 0.01};
  return levels;
}

struct HypothesisTestResult {
  std::string name;
  std::string null_hypothesis;
  double statistic = 0.0;
  std::optional<double> p_value;
  PValueBound p_bound = PValueBound::Exact;
  std::optional<int> df;
  std::map<double, double> critical_values;
  Tail tail = Tail::Upper;
  std::map<double, bool> reject_at;
  std::string note;

  // Fills reject_at for the standard levels. Critical values take
  // precedence; otherwise the p-value decides (reject iff p < level).
  void decide();
  // Decision at an arbitrary level; uses the stored decision when present.
  bool rejects(double level) const;
};

// True when critical-value and p-value decisions agree at every level
// where both are available.
bool decisions_consistent(const HypothesisTestResult& r);

}  // namespace causalts
