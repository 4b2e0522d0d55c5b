#pragma once

#include <sppcso/estimator.hpp>
#include <sppcso/linalg.hpp>
#include <sppcso/solvers.hpp>

#include <cstdint>
#include <string_view>
#include <vector>

namespace sppcso {

enum class Method { lasso, enet, mcp, scad, mnet, sppcso };

std::string_view to_string(Method method);

/// Throws Error(Usage) listing the valid names.
Method parse_method(std::string_view name);

std::string valid_method_names();

/// Everything needed to fit one method at a (lambda, theta) point.
struct MethodConfig
{
    Method method = Method::lasso;
    double gamma = 0.0;  // 0 selects the family default
    double alpha = default_mixing;
    EigenScale scale = EigenScale::gram;
    double tol = 1e-4;
    int max_iter = 10000;

    bool uses_theta() const { return method == Method::sppcso; }

    /// Penalty of the baseline family (lasso for sppcso).
    PenaltySpec penalty(double lambda) const;
};

/// Fits `config` at one point. theta is ignored unless the method is sppcso.
FitResult fit_method(const Dataset& data, const MethodConfig& config, double lambda, double theta);

/**
 * Warm-started fits along `lambdas` (processed in descending order, returned
 * in the given order). For sppcso, fits[t][l] is the fit at thetas[t],
 * lambdas[l]; the Lasso stage and the support eigendecompositions are shared
 * across thetas. Other methods ignore thetas and return a single row.
 */
std::vector<std::vector<FitResult>> fit_grid(const Dataset& data, const MethodConfig& config, const Vector& lambdas,
                                             const std::vector<double>& thetas);

/// Partition of {0..n-1} into k folds whose sizes differ by at most one.
std::vector<IndexSet> kfold_split(Index n, int k, std::uint64_t seed);

/// {0.1, 0.2, ..., 0.9}.
std::vector<double> theta_grid();

/// lambda_path on `data`, divided by the l1 mixing weight for enet/mnet so
/// that the first value still yields the empty model.
Vector default_lambda_grid(const Dataset& data, const MethodConfig& config, int n_lambda = 50,
                           double min_ratio = 0.01);

struct CvPoint
{
    double lambda = 0.0;
    double theta = 0.0;  // NaN when the method has no theta
    double mean_mse = 0.0;
    double std_mse = 0.0;
    int folds_ok = 0;
};

struct CVResult
{
    std::vector<CvPoint> curve;  // theta-major, lambdas in grid order
    std::size_t best_index = 0;
    double best_lambda = 0.0;
    double best_theta = 0.0;
    int failed_fits = 0;
};

/**
 * k-fold cross-validation over lambda x theta.
 *
 * Each training fold is re-standardized and its transform applied to the
 * held-out fold; validation MSE is (1 / n_val) ||y_val - X_val b||^2.
 * Folds run on up to `threads` workers and are reduced in fold order, so the
 * result does not depend on the worker count. Ties in mean MSE go to the
 * larger lambda, then the larger theta. Failed fits are excluded; if every
 * grid point fails, throws Error(AllGridPointsFailed).
 */
CVResult cross_validate(const Dataset& data, const MethodConfig& config, const Vector& lambda_grid,
                        const std::vector<double>& thetas, int k, std::uint64_t seed, int threads = 1);

} // namespace sppcso
