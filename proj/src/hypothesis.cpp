#include "causalts/hypothesis.hpp"

#include "causalts/error.hpp"

namespace causalts {
namespace {

bool critical_decision(const HypothesisTestResult& r, double crit) {
  return r.tail == Tail::Upper ? r.statistic > crit : r.statistic < crit;
}

bool p_decision(const HypothesisTestResult& r, double level) {
  const double p = *r.p_value;
  switch (r.p_bound) {
    case PValueBound::AtMost: return p <= level;
    case PValueBound::AtLeast: return p < level;
    case PValueBound::Exact: break;
  }
  return p < level;
}

}  // namespace

void HypothesisTestResult::decide() {
  reject_at.clear();
  for (double level : standard_levels()) {
    if (auto it = critical_values.find(level); it != critical_values.end()) {
      reject_at[level] = critical_decision(*this, it->second);
    } else if (p_value) {
      reject_at[level] = p_decision(*this, level);
    }
  }
}

bool HypothesisTestResult::rejects(double level) const {
  if (auto it = reject_at.find(level); it != reject_at.end()) return it->second;
  if (auto it = critical_values.find(level); it != critical_values.end()) {
    return critical_decision(*this, it->second);
  }
  if (p_value) return p_decision(*this, level);
  throw ContractError("test '" + name + "' has no decision rule at level " +
                      std::to_string(level));
}

bool decisions_consistent(const HypothesisTestResult& r) {
  if (!r.p_value) return true;
  for (const auto& [level, crit] : r.critical_values) {
    if (critical_decision(r, crit) != p_decision(r, level)) return false;
  }
  return true;
}

}  // namespace causalts
