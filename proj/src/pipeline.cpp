#include "causalts/pipeline.hpp"

#include "causalts/error.hpp"

#include <cmath>
#include <cstdio>
#include <exception>
#include <limits>
#include <utility>

namespace causalts {
namespace {

// Golden-ratio offset so the bootstrap streams never coincide with the
// ICA restart streams derived from the same master seed.
constexpr std::uint64_t kBootstrapSeedOffset = 0x9E3779B97F4A7C15ULL;

template <class F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  using C = StageError::Category;
  try {
    return f();
  } catch (const StageError&) {
    throw;
  } catch (const EstimationError& e) {
    throw StageError(name, C::Numerical, e.what());
  } catch (const Error& e) {
    throw StageError(name, C::Input, e.what());
  } catch (const std::exception& e) {
    throw StageError(name, C::Numerical, e.what());
  }
}

std::string fmt(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.4f", v);
  return buf;
}

}  // namespace

ConstantMode parse_constant_mode(const std::string& s) {
  if (s == "inside") return ConstantMode::Inside;
  if (s == "outside") return ConstantMode::Outside;
  if (s == "auto") return ConstantMode::Auto;
  throw InputError("constant must be inside, outside or auto (got '" + s + "')");
}

const char* to_string(ConstantMode m) {
  switch (m) {
    case ConstantMode::Inside: return "inside";
    case ConstantMode::Outside: return "outside";
    case ConstantMode::Auto: return "auto";
  }
  return "?";
}

ModelKind parse_model_kind(const std::string& s) {
  if (s == "vecm") return ModelKind::Vecm;
  if (s == "var") return ModelKind::Var;
  throw InputError("model must be vecm or var (got '" + s + "')");
}

const char* to_string(ModelKind m) { return m == ModelKind::Vecm ? "vecm" : "var"; }

PipelineResult run_pipeline(const TimeSeriesMatrix& endog_panel,
                            const Eigen::MatrixXd& exog_in,
                            const PipelineConfig& config) {
  PipelineResult res;
  const Eigen::MatrixXd& x = endog_panel.values();
  const Eigen::Index n = x.cols();
  const Eigen::MatrixXd z = exog_in.size() == 0 ? Eigen::MatrixXd(x.rows(), 0) : exog_in;
  res.names = endog_panel.names();
  res.samples = x.rows();

  stage("config", [&] {
    if (z.rows() != x.rows()) {
      throw ContractError("exogenous panel has " + std::to_string(z.rows()) +
                          " rows, endogenous has " + std::to_string(x.rows()));
    }
    if (config.bootstrap != 0 && config.bootstrap < 100) {
      throw ContractError("bootstrap must be 0 (no pruning) or at least 100");
    }
    if (!(config.lag_quantile >= 0.0 && config.lag_quantile <= 1.0)) {
      throw ContractError("lag_quantile must lie in [0, 1]");
    }
    for (int i : config.irf_order) {
      if (i < 0 || i >= n) throw ContractError("irf ordering index out of range");
    }
    if (!config.irf_order.empty() && static_cast<Eigen::Index>(config.irf_order.size()) != n) {
      throw ContractError("irf ordering must list every endogenous series once");
    }
  });

  // Lag order.
  stage("lag-selection", [&] {
    if (config.lag_order) {
      if (*config.lag_order < 1) throw ContractError("lag order must be at least 1");
      res.k = *config.lag_order;
      return;
    }
    res.lag_table = select_lag_order(x, z, config.max_lag);
    const auto it = res.lag_table->chosen.find(config.lag_criterion);
    if (it == res.lag_table->chosen.end()) {
      throw InputError("unknown lag criterion '" + config.lag_criterion + "'");
    }
    res.k = it->second;
  });
  const int k = res.k;

  res.model = config.model;
  if (config.model == ModelKind::Vecm) {
    bool inside = config.constant != ConstantMode::Outside;
    stage("rank", [&] {
      RankSelection sel;
      try {
        res.trace = johansen_trace_test(x, z, k, inside);
      } catch (const UnsupportedDimensionError& e) {
        if (!config.rank) throw;
        res.notes.push_back(std::string("trace test skipped: ") + e.what());
      }
      if (config.rank) {
        sel.rank = *config.rank;
        sel.source = "config";
      } else {
        sel.rank = select_rank(*res.trace, config.rank_level);
        sel.source = "trace";
      }
      if (config.constant == ConstantMode::Auto && sel.rank >= 1 && sel.rank < n) {
        res.placement = schwarz_constant_placement(x, z, k, sel.rank);
        if (!res.placement->inside) {
          inside = false;
          res.trace_alternate = std::move(res.trace);
          res.trace = johansen_trace_test(x, z, k, false);
          if (!config.rank && res.trace) {
            const int r = select_rank(*res.trace, config.rank_level);
            if (r != sel.rank) {
              res.notes.push_back("rank re-selected from " + std::to_string(sel.rank) +
                                  " to " + std::to_string(r) +
                                  " after moving the constant outside");
            }
            sel.rank = r;
          }
        }
      }
      if (n >= 2) {
        sel.schwarz_losses.resize(n - 1);
        double best = std::numeric_limits<double>::infinity();
        for (int r = 1; r < n; ++r) {
          const double loss = schwarz_loss(fit_vecm(x, z, k, r, inside));
          sel.schwarz_losses(r - 1) = loss;
          if (loss < best) {
            best = loss;
            sel.schwarz_rank = r;
          }
        }
        if (sel.source == "trace" && sel.schwarz_rank && *sel.schwarz_rank != sel.rank) {
          res.notes.push_back("Schwarz loss prefers rank " + std::to_string(*sel.schwarz_rank) +
                              "; the trace test conclusion (rank " +
                              std::to_string(sel.rank) + ") is used");
        }
      }
      if (sel.rank == 0) {
        throw ContractError(
            "no cointegration found (rank 0); difference the data or set model: var");
      }
      res.rank = sel;
    });

    if (res.rank->rank >= n) {
      res.warnings.push_back("full rank " + std::to_string(n) +
                             ": every series looks stationary; estimating a VAR in levels");
      res.model = ModelKind::Var;
    } else {
      stage("vecm", [&] { res.vecm = fit_vecm(x, z, k, res.rank->rank, inside); });
      if (config.restriction_tests) {
        stage("restriction-tests", [&] {
          RestrictionTests rt;
          const int rows = static_cast<int>(res.vecm->beta.rows());
          for (int i = 0; i < n; ++i) {
            rt.weak_exogeneity.push_back(weak_exogeneity_test(*res.vecm, i));
            rt.unit_vector.push_back(unit_vector_cointegration_test(*res.vecm, i));
          }
          for (int i = 0; i < rows; ++i) rt.exclusion.push_back(exclusion_test(*res.vecm, i));
          res.restrictions = std::move(rt);
        });
      }
      stage("var-representation", [&] { res.var = vecm_to_var(*res.vecm); });
    }
  }
  if (res.model == ModelKind::Var) {
    stage("var", [&] { res.var = fit_var(x, z, k); });
  }

  stage("residuals", [&] { res.residuals = residuals_from_var(res.var, x, z); });

  stage("normality", [&] {
    res.normality = jarque_bera(res.residuals);
    const HypothesisTestResult& mv = res.normality->multivariate;
    if (mv.p_value && *mv.p_value > config.identifiability_level) {
      res.identifiability_warning = true;
      res.warnings.push_back(
          "residuals are not distinguishable from Gaussian (multivariate Jarque-Bera p = " +
          fmt(*mv.p_value) + " > " + fmt(config.identifiability_level) +
          "); the instantaneous causal order may not be identifiable");
    }
  });

  stage("lingam", [&] {
    IcaOptions io;
    io.contrast = config.contrast;
    io.seed = config.seed;
    res.ica = fastica(res.residuals, io);
    if (!res.ica.converged) {
      res.warnings.push_back("fastICA did not converge in " +
                             std::to_string(io.max_iter) + " iterations");
    }
    res.lingam_point = lingam_from_ica(res.ica);
    if (config.bootstrap > 0) {
      PruneOptions po;
      po.n_boot = config.bootstrap;
      po.level = config.prune_level;
      po.bonferroni = config.bonferroni;
      po.seed = config.seed + kBootstrapSeedOffset;
      po.threads = config.threads;
      res.lingam_pruned = prune_edges(res.residuals, res.lingam_point, po, &res.prune);
    } else {
      res.lingam_pruned = res.lingam_point;
      res.notes.push_back("bootstrap disabled; B0 is not pruned");
    }
  });

  stage("lagged-effects", [&] {
    const Eigen::MatrixXd& b0 = res.lingam_pruned.B0;
    const Eigen::MatrixXd a = Eigen::MatrixXd::Identity(n, n) - b0;
    res.B_unthresholded.clear();
    res.B_unthresholded.push_back(b0);
    for (auto& bt : lagged_effects(b0, res.var.M)) res.B_unthresholded.push_back(std::move(bt));

    const Eigen::PartialPivLU<Eigen::MatrixXd> lu(a);
    for (int tau = 1; tau <= k; ++tau) {
      const Eigen::MatrixXd back = lu.solve(res.B_unthresholded[tau]);
      const double scale = std::max(1.0, res.var.M[tau - 1].cwiseAbs().maxCoeff());
      if ((back - res.var.M[tau - 1]).cwiseAbs().maxCoeff() > 1e-10 * scale) {
        throw EstimationError("(I - B0)^{-1} B_" + std::to_string(tau) +
                              " does not reproduce M_" + std::to_string(tau));
      }
    }

    CausalStructure& s = res.structure;
    s.B = threshold_lagged(res.B_unthresholded, config.lag_quantile);
    s.mu = a * res.var.mu;
    s.gamma = a * res.var.gamma;
    s.order = res.lingam_pruned.causal_order;
    s.noise = res.residuals * a.transpose();
    s.thresholds.n_boot = config.bootstrap;
    s.thresholds.prune_level = config.prune_level;
    s.thresholds.bonferroni = config.bonferroni;
    s.thresholds.lag_quantile = config.lag_quantile;
    s.thresholds.lag_threshold = lag_effect_threshold(res.B_unthresholded, config.lag_quantile);
    s.thresholds.thresholded = true;
    res.granger_classical = granger_matrix(s, false);
    res.granger_combined = granger_matrix(s, true);
  });

  stage("impulse-response", [&] {
    const Eigen::MatrixXd cov = res.var.residual_covariance();
    const Eigen::MatrixXd impact =
        config.irf_order.empty()
            ? structural_impact(cov, Eigen::MatrixXd::Identity(n, n) - res.lingam_pruned.B0)
            : recursive_impact(cov, config.irf_order);
    res.irf = impulse_response(res.var, impact, config.irf_horizon);
    if (res.irf.explosive) {
      res.warnings.push_back("VAR representation is explosive (companion spectral radius " +
                             fmt(res.irf.spectral_radius) + ")");
    }
  });

  return res;
}

}  // namespace causalts
