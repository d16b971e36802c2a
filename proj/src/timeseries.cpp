#include "causalts/timeseries.hpp"

#include "causalts/error.hpp"

#include <cmath>
#include <utility>

namespace causalts {

const char* to_string(TransformKind kind) {
  switch (kind) {
    case TransformKind::Log: return "log";
    case TransformKind::Logit: return "logit";
    case TransformKind::Seasonal: return "seasonal";
    case TransformKind::Difference: return "difference";
    case TransformKind::Standardize: return "standardize";
  }
  return "unknown";
}

TimeSeriesMatrix::TimeSeriesMatrix(Eigen::MatrixXd values,
                                   std::vector<std::string> names, long t0,
                                   int period_length)
    : values_(std::move(values)),
      names_(std::move(names)),
      t0_(t0),
      period_length_(period_length) {
  if (values_.rows() < 1 || values_.cols() < 1) {
    throw SizeError("time series panel needs at least one row and one column");
  }
  if (static_cast<Eigen::Index>(names_.size()) != values_.cols()) {
    throw ContractError("time series panel has " +
                        std::to_string(values_.cols()) + " columns but " +
                        std::to_string(names_.size()) + " names");
  }
  if (period_length_ < 1) {
    throw ContractError("period length must be positive");
  }
  for (Eigen::Index j = 0; j < values_.cols(); ++j) {
    for (Eigen::Index i = 0; i < values_.rows(); ++i) {
      if (!std::isfinite(values_(i, j))) {
        throw InputError("missing or non-finite value in series '" +
                         names_[j] + "' at row " + std::to_string(i + 1));
      }
    }
  }
}

int TimeSeriesMatrix::find(const std::string& name) const {
  for (std::size_t j = 0; j < names_.size(); ++j) {
    if (names_[j] == name) return static_cast<int>(j);
  }
  return -1;
}

TimeSeriesMatrix TimeSeriesMatrix::with(Eigen::MatrixXd values,
                                        TransformRecord record,
                                        long t0_shift) const {
  TimeSeriesMatrix out(std::move(values), names_, t0_ + t0_shift,
                       period_length_);
  out.log_ = log_;
  out.log_.push_back(std::move(record));
  return out;
}

TimeSeriesMatrix TimeSeriesMatrix::select(const std::vector<int>& columns) const {
  Eigen::MatrixXd v(values_.rows(), static_cast<Eigen::Index>(columns.size()));
  std::vector<std::string> names;
  for (std::size_t c = 0; c < columns.size(); ++c) {
    const int j = columns[c];
    if (j < 0 || j >= values_.cols()) {
      throw ContractError("column index " + std::to_string(j) + " out of range");
    }
    v.col(static_cast<Eigen::Index>(c)) = values_.col(j);
    names.push_back(names_[j]);
  }
  TimeSeriesMatrix out(std::move(v), std::move(names), t0_, period_length_);
  for (const auto& rec : log_) {
    if (rec.column < 0) continue;
    for (std::size_t c = 0; c < columns.size(); ++c) {
      if (columns[c] == rec.column) {
        TransformRecord moved = rec;
        moved.column = static_cast<int>(c);
        out.log_.push_back(std::move(moved));
      }
    }
  }
  return out;
}

}  // namespace causalts
