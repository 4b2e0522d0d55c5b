#pragma once

#include <sppcso/linalg.hpp>

#include <string>
#include <string_view>
#include <vector>

namespace sppcso {

enum class PenaltyFamily { lasso, enet, mcp, scad, mnet };

std::string_view to_string(PenaltyFamily family);
PenaltyFamily parse_penalty_family(std::string_view name);

inline constexpr double default_scad_gamma = 3.7;
inline constexpr double default_mcp_gamma = 3.0;
inline constexpr double default_mixing = 0.5;

/**
 * Penalty family and its parameters.
 *
 *   lasso: lambda * |b|
 *   enet:  lambda * alpha * |b| + lambda * (1 - alpha) * b^2
 *   mcp:   lambda * int_0^|b| (1 - x / (gamma * lambda))_+ dx
 *   scad:  Fan-Li SCAD with concavity gamma
 *   mnet:  mcp(lambda * alpha, gamma) + lambda * (1 - alpha) * b^2
 */
struct PenaltySpec
{
    PenaltyFamily family = PenaltyFamily::lasso;
    double lambda = 0.0;
    double gamma = default_mcp_gamma;
    double alpha = 1.0;

    static PenaltySpec lasso(double lambda);
    static PenaltySpec enet(double lambda, double alpha = default_mixing);
    static PenaltySpec mcp(double lambda, double gamma = default_mcp_gamma);
    static PenaltySpec scad(double lambda, double gamma = default_scad_gamma);
    static PenaltySpec mnet(double lambda, double gamma = default_mcp_gamma, double alpha = default_mixing);

    /// Same family and parameters, different lambda.
    PenaltySpec with_lambda(double new_lambda) const;

    bool convex() const { return family == PenaltyFamily::lasso || family == PenaltyFamily::enet; }

    /// Throws Error(InvalidPenalty / InvalidGamma) on out-of-range parameters.
    void validate() const;
};

struct FitResult
{
    Vector beta;
    IndexSet support;
    int iterations = 0;
    double objective = 0.0;
    bool converged = false;
    // Set by the two-stage fit when the Lasso stage selects nothing.
    bool reduced_to_lasso = false;
    std::vector<std::string> warnings;
};

double soft_threshold(double r, double lam);

/// Minimizer of 0.5 (z - r)^2 + MCP(|z|). Requires gamma > 1.
double mcp_threshold(double r, double lam, double gamma);

/// Minimizer of 0.5 (z - r)^2 + SCAD(|z|). Requires gamma > 2.
double scad_threshold(double r, double lam, double gamma);

/// Penalty contribution p(|b|) of one coefficient.
double penalty_value(const PenaltySpec& spec, double b);

/**
 * argmin_b  (curvature / 2) b^2 - z b + p(|b|).
 *
 * With curvature == 1 this is the family's threshold operator; the general
 * form covers columns whose scaled norm is not one (augmented designs) and
 * the ridge part of enet/mnet.
 */
double coordinate_minimizer(const PenaltySpec& spec, double z, double curvature);

/// max_j |X_j' y| / n.
double lambda_max(const Matrix& X, const Vector& y);

/// n_lambda values log-spaced from lambda_max down to min_ratio * lambda_max.
Vector lambda_path(const Dataset& data, int n_lambda, double min_ratio);

struct CdOptions
{
    double tol = 1e-4;
    int max_iter = 10000;
    // Loss is scaled by 1 / (2 * n_scale); 0 means X.rows().
    double n_scale = 0.0;
};

/**
 * Cyclic coordinate descent for (1 / 2n) ||y - X b||^2 + sum_j p(|b_j|).
 *
 * Keeps the residual cached. After each full sweep the nonzero coordinates
 * are iterated alone until stable, then a full sweep checks for violators;
 * convergence is declared when a full sweep moves no coordinate by tol or
 * more (max-abs norm). `iterations` counts sweeps of either kind.
 *
 * Throws Error(Diverged) if a convex family's objective rises by more than
 * 1e-6 relative between sweeps. Hitting max_iter returns converged == false.
 */
FitResult cd_fit(const Matrix& X, const Vector& y, const PenaltySpec& spec, const Vector& init,
                 const CdOptions& options = {});

/**
 * cd_fit on the stacked design [X; E] with response [y; 0], where E has
 * extra_rows.rows() rows, is zero outside `extra_cols`, and
 * E(:, extra_cols[k]) = extra_rows(:, k). Loss scaling uses options.n_scale
 * (default X.rows()), not the stacked row count. Equivalent to cd_fit on the
 * materialized matrix without copying X.
 */
FitResult cd_fit_stacked(const Matrix& X, const Vector& y, const Matrix& extra_rows, const IndexSet& extra_cols,
                         const PenaltySpec& spec, const Vector& init, const CdOptions& options = {});

double objective(const Matrix& X, const Vector& y, const PenaltySpec& spec, const Vector& beta,
                 double n_scale = 0.0);

/// Largest violation of the stationarity conditions for lasso/enet.
double kkt_residual(const Matrix& X, const Vector& y, const PenaltySpec& spec, const Vector& beta,
                    double n_scale = 0.0);

} // namespace sppcso
