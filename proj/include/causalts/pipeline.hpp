#pragma once

#include "causalts/econometrics.hpp"
#include "causalts/error.hpp"
#include "causalts/irf.hpp"
#include "causalts/lingam.hpp"
#include "causalts/structure.hpp"
#include "causalts/timeseries.hpp"
#include "causalts/var.hpp"
#include "causalts/vecm.hpp"

#include <Eigen/Dense>

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace causalts {

enum class ConstantMode { Inside, Outside, Auto };
enum class ModelKind { Vecm, Var };

ConstantMode parse_constant_mode(const std::string& s);
const char* to_string(ConstantMode m);
ModelKind parse_model_kind(const std::string& s);
const char* to_string(ModelKind m);

struct PipelineConfig {
  std::optional<int> lag_order;       // empty: choose by `lag_criterion`
  int max_lag = 8;
  std::string lag_criterion = "sc";   // aic | hq | sc
  std::optional<int> rank;            // empty: trace test at `rank_level`
  double rank_level = 0.05;
  ConstantMode constant = ConstantMode::Auto;
  ModelKind model = ModelKind::Vecm;
  bool restriction_tests = true;

  int bootstrap = 1000;
  double prune_level = 0.05;
  bool bonferroni = true;
  double lag_quantile = 0.70;
  Contrast contrast = Contrast::LogCosh;
  std::uint64_t seed = 0;
  int threads = 0;

  // Multivariate Jarque-Bera p-value above this level raises the
  // non-identifiability warning.
  double identifiability_level = 0.01;

  int irf_horizon = 10;
  // Empty: orthogonalize with the estimated structure (I - B0).
  // Otherwise a recursive ordering of series indices.
  std::vector<int> irf_order;
};

struct RankSelection {
  int rank = 0;
  std::string source;                 // "config" | "trace"
  std::optional<int> schwarz_rank;    // minimizer of the Schwarz loss over 1..n-1
  Eigen::VectorXd schwarz_losses;     // entry r-1 for rank r
};

struct RestrictionTests {
  std::vector<HypothesisTestResult> weak_exogeneity;  // one per series
  std::vector<HypothesisTestResult> exclusion;        // one per beta row
  std::vector<HypothesisTestResult> unit_vector;      // one per series
};

struct PipelineResult {
  std::vector<std::string> names;
  Eigen::Index samples = 0;

  std::optional<LagSelectionTable> lag_table;
  int k = 0;

  std::optional<TraceTestResult> trace;
  std::optional<TraceTestResult> trace_alternate;  // other constant placement
  std::optional<ConstantPlacement> placement;
  std::optional<RankSelection> rank;

  ModelKind model = ModelKind::Vecm;
  std::optional<VecmModel> vecm;
  std::optional<RestrictionTests> restrictions;
  VarModel var;
  Eigen::MatrixXd residuals;  // reduced-form e_t from the VAR representation

  std::optional<JarqueBeraResult> normality;
  bool identifiability_warning = false;

  IcaResult ica;
  InstantEffects lingam_point;
  InstantEffects lingam_pruned;
  PruneDiagnostics prune;

  std::vector<Eigen::MatrixXd> B_unthresholded;  // B0..Bk before the lag cutoff
  CausalStructure structure;
  GrangerMatrix granger_classical;
  GrangerMatrix granger_combined;

  ImpulseResponse irf;
  std::vector<std::string> warnings;
  std::vector<std::string> notes;
};

// Raised by run_pipeline: the original error text prefixed with the stage
// name. `category` preserves the failing error's class for exit codes.
class StageError : public Error {
 public:
  enum class Category { Input, Numerical };
  StageError(std::string stage, Category category, const std::string& what)
      : Error("[" + stage + "] " + what), stage_(std::move(stage)), category_(category) {}
  const std::string& stage() const { return stage_; }
  Category category() const { return category_; }

 private:
  std::string stage_;
  Category category_;
};

// Lag order, rank and constant placement, VECM estimation, VAR
// representation, reduced-form residuals, LiNGAM with bootstrap pruning,
// lagged effects and thresholding, Granger matrices, impulse responses.
PipelineResult run_pipeline(const TimeSeriesMatrix& endog,
                            const Eigen::MatrixXd& exog,
                            const PipelineConfig& config);

}  // namespace causalts
