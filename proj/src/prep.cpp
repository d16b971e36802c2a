#include "causalts/prep.hpp"

#include "causalts/error.hpp"

#include <cmath>
#include <numbers>
#include <string>

namespace causalts {
namespace {

std::string where(std::string_view name, Eigen::Index row) {
  return "series '" + std::string(name) + "' row " + std::to_string(row + 1);
}

Eigen::MatrixXd harmonic_design(Eigen::Index length, int period, int harmonics,
                                long t0) {
  Eigen::MatrixXd x(length, 1 + 2 * harmonics);
  for (Eigen::Index i = 0; i < length; ++i) {
    const double t = static_cast<double>(t0 + i);
    x(i, 0) = 1.0;
    for (int j = 1; j <= harmonics; ++j) {
      const double w = 2.0 * std::numbers::pi * j * t / period;
      x(i, 2 * j - 1) = std::sin(w);
      x(i, 2 * j) = std::cos(w);
    }
  }
  return x;
}

double column_mean(const Eigen::VectorXd& v) { return v.mean(); }

double column_sd(const Eigen::VectorXd& v, double mean) {
  const double ss = (v.array() - mean).square().sum();
  return std::sqrt(ss / static_cast<double>(v.size() - 1));
}

Eigen::VectorXd standardize_column(const Eigen::VectorXd& v, double mean,
                                   double sd) {
  return ((v.array() - mean) / sd).matrix();
}

Eigen::MatrixXd difference_values(const Eigen::MatrixXd& v, int order) {
  Eigen::MatrixXd out = v;
  for (int d = 0; d < order; ++d) {
    const Eigen::Index t = out.rows();
    Eigen::MatrixXd next = out.bottomRows(t - 1) - out.topRows(t - 1);
    out = std::move(next);
  }
  return out;
}

SeasonalFit fit_from_params(const std::vector<double>& p) {
  SeasonalFit fit;
  fit.period = static_cast<int>(p.at(0));
  const int harmonics = static_cast<int>(p.at(1));
  fit.beta0 = p.at(2);
  fit.sin_coef.resize(harmonics);
  fit.cos_coef.resize(harmonics);
  for (int j = 0; j < harmonics; ++j) {
    fit.sin_coef(j) = p.at(3 + 2 * j);
    fit.cos_coef(j) = p.at(4 + 2 * j);
  }
  return fit;
}

}  // namespace

double SeasonalFit::evaluate(double t) const {
  double value = beta0;
  for (int j = 1; j <= harmonics(); ++j) {
    const double w = 2.0 * std::numbers::pi * j * t / period;
    value += sin_coef(j - 1) * std::sin(w) + cos_coef(j - 1) * std::cos(w);
  }
  return value;
}

Eigen::VectorXd SeasonalFit::reconstruct(Eigen::Index length, long t0) const {
  Eigen::VectorXd out(length);
  for (Eigen::Index i = 0; i < length; ++i) {
    out(i) = evaluate(static_cast<double>(t0 + i));
  }
  return out;
}

Eigen::VectorXd log_transform(const Eigen::VectorXd& series,
                              std::string_view name) {
  Eigen::VectorXd out(series.size());
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    if (!(series(i) > 0.0)) {
      throw DomainError("log transform needs positive values: " +
                        where(name, i) + " is " + std::to_string(series(i)));
    }
    out(i) = std::log(series(i));
  }
  return out;
}

Eigen::VectorXd logit_transform(const Eigen::VectorXd& series, double lower,
                                double upper, std::string_view name) {
  if (!(lower < upper)) {
    throw ContractError("logit bounds must satisfy lower < upper");
  }
  Eigen::VectorXd out(series.size());
  for (Eigen::Index i = 0; i < series.size(); ++i) {
    const double x = series(i);
    if (!(x > lower && x < upper)) {
      throw DomainError("logit transform needs values strictly inside (" +
                        std::to_string(lower) + ", " + std::to_string(upper) +
                        "): " + where(name, i) + " is " + std::to_string(x));
    }
    out(i) = std::log((x - lower) / (upper - x));
  }
  return out;
}

SeasonalAdjustment seasonal_adjust(const Eigen::VectorXd& series, int period,
                                   int harmonics, long t0) {
  if (period < 2) throw ContractError("seasonal period must be at least 2");
  if (harmonics < 1) throw ContractError("need at least one harmonic");
  const Eigen::Index params = 1 + 2 * harmonics;
  if (series.size() < 2 * params) {
    throw SizeError("seasonal adjustment with " + std::to_string(harmonics) +
                    " harmonics needs at least " + std::to_string(2 * params) +
                    " observations, got " + std::to_string(series.size()));
  }

  const Eigen::MatrixXd design =
      harmonic_design(series.size(), period, harmonics, t0);
  Eigen::ColPivHouseholderQR<Eigen::MatrixXd> qr(design);
  qr.setThreshold(1e-10);
  if (qr.rank() < params) {
    throw EstimationError(
        "harmonic design is rank deficient (rank " + std::to_string(qr.rank()) +
        " of " + std::to_string(params) + "): period " +
        std::to_string(period) + " has too few distinct phases for " +
        std::to_string(harmonics) + " harmonics");
  }
  const Eigen::VectorXd coef = qr.solve(series);

  SeasonalAdjustment out;
  out.fit.period = period;
  out.fit.beta0 = coef(0);
  out.fit.sin_coef.resize(harmonics);
  out.fit.cos_coef.resize(harmonics);
  for (int j = 0; j < harmonics; ++j) {
    out.fit.sin_coef(j) = coef(1 + 2 * j);
    out.fit.cos_coef(j) = coef(2 + 2 * j);
  }
  out.adjusted = series - out.fit.reconstruct(series.size(), t0);
  out.fit.residual_variance =
      out.adjusted.squaredNorm() / static_cast<double>(series.size() - params);
  return out;
}

TimeSeriesMatrix difference(const TimeSeriesMatrix& m, int order) {
  if (order < 1) throw ContractError("difference order must be positive");
  if (m.rows() <= order) {
    throw SizeError("cannot difference " + std::to_string(m.rows()) +
                    " observations " + std::to_string(order) + " times");
  }
  return m.with(difference_values(m.values(), order),
                {TransformKind::Difference, -1, {static_cast<double>(order)}},
                order);
}

TimeSeriesMatrix standardize(const TimeSeriesMatrix& m) {
  if (m.rows() < 2) throw SizeError("standardize needs at least two rows");
  Eigen::MatrixXd out(m.rows(), m.cols());
  TransformRecord rec{TransformKind::Standardize, -1, {}};
  for (Eigen::Index j = 0; j < m.cols(); ++j) {
    const Eigen::VectorXd col = m.values().col(j);
    const double mean = column_mean(col);
    const double sd = column_sd(col, mean);
    if (!(sd > 0.0)) {
      throw DegenerateInputError("series '" + m.names()[j] +
                                 "' has zero variance and cannot be standardized");
    }
    out.col(j) = standardize_column(col, mean, sd);
    rec.params.push_back(mean);
    rec.params.push_back(sd);
  }
  return m.with(std::move(out), std::move(rec));
}

TimeSeriesMatrix apply_log(const TimeSeriesMatrix& m, int column) {
  Eigen::MatrixXd v = m.values();
  v.col(column) = log_transform(v.col(column), m.names().at(column));
  return m.with(std::move(v), {TransformKind::Log, column, {}});
}

TimeSeriesMatrix apply_logit(const TimeSeriesMatrix& m, int column,
                             double lower, double upper) {
  Eigen::MatrixXd v = m.values();
  v.col(column) =
      logit_transform(v.col(column), lower, upper, m.names().at(column));
  return m.with(std::move(v), {TransformKind::Logit, column, {lower, upper}});
}

TimeSeriesMatrix apply_seasonal(const TimeSeriesMatrix& m, int column,
                                int harmonics) {
  const auto adj = seasonal_adjust(m.values().col(column), m.period_length(),
                                   harmonics, m.t0());
  Eigen::MatrixXd v = m.values();
  v.col(column) = adj.adjusted;
  TransformRecord rec{TransformKind::Seasonal, column,
                      {static_cast<double>(adj.fit.period),
                       static_cast<double>(harmonics), adj.fit.beta0}};
  for (int j = 0; j < harmonics; ++j) {
    rec.params.push_back(adj.fit.sin_coef(j));
    rec.params.push_back(adj.fit.cos_coef(j));
  }
  return m.with(std::move(v), std::move(rec));
}

Eigen::MatrixXd replay(const std::vector<TransformRecord>& log,
                       const Eigen::MatrixXd& raw, long raw_t0) {
  Eigen::MatrixXd v = raw;
  long t0 = raw_t0;
  for (const auto& rec : log) {
    switch (rec.kind) {
      case TransformKind::Log:
        v.col(rec.column) = log_transform(v.col(rec.column));
        break;
      case TransformKind::Logit:
        v.col(rec.column) =
            logit_transform(v.col(rec.column), rec.params.at(0), rec.params.at(1));
        break;
      case TransformKind::Seasonal: {
        const SeasonalFit fit = fit_from_params(rec.params);
        const Eigen::VectorXd col = v.col(rec.column);
        v.col(rec.column) = col - fit.reconstruct(v.rows(), t0);
        break;
      }
      case TransformKind::Difference: {
        const int order = static_cast<int>(rec.params.at(0));
        v = difference_values(v, order);
        t0 += order;
        break;
      }
      case TransformKind::Standardize:
        for (Eigen::Index j = 0; j < v.cols(); ++j) {
          const Eigen::VectorXd col = v.col(j);
          v.col(j) = standardize_column(col, rec.params.at(2 * j),
                                        rec.params.at(2 * j + 1));
        }
        break;
    }
  }
  return v;
}

}  // namespace causalts
