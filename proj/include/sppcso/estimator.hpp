#pragma once

#include <sppcso/linalg.hpp>
#include <sppcso/solvers.hpp>

#include <string_view>

namespace sppcso {

/**
 * Which Gram matrix the principal-component eigenvalues come from.
 *
 * gram:            eigenvalues of X_S' X_S, as the branch rule d >= 1 is
 *                  written. With standardized columns these scale with n,
 *                  so for moderate n every component lands in the d >= 1
 *                  branch.
 * per_observation: eigenvalues of X_S' X_S / n. The penalty matrix added
 *                  to X_S' X_S is then n * U diag(K) U', which keeps the
 *                  shrinkage factors d / (d + K) on the same footing.
 */
enum class EigenScale { gram, per_observation };

std::string_view to_string(EigenScale scale);
EigenScale parse_eigen_scale(std::string_view name);

/// Principal-component shrinkage factor: (d - 1 + theta) / d for d >= 1,
/// theta * d otherwise.
double shrinkage_factor(double d, double theta);

/// d / (d + k).
double ridge_shrinkage_factor(double d, double k);

/// (d + h) / (d + 1).
double liu_shrinkage_factor(double d, double h);

/// Penalty weight for one component: d (1 - theta) / (d + theta - 1) for
/// d >= 1, 1 / theta - d otherwise. Strictly positive for theta in (0, 1).
double penalty_weight(double d, double theta);

Vector penalty_diag(const Vector& d, double theta);

/// Throws Error(InvalidTheta) unless 0 < theta < 1.
void check_theta(double theta);

struct SppcsoPenalty
{
    IndexSet support;
    Matrix U;          // q x q eigenvectors of the support Gram matrix
    Vector d;          // eigenvalues at `scale`, descending
    double theta = 0.5;
    Vector K;          // penalty_diag(d, theta)
    Matrix Z_rows;     // sqrt(c K) U', c = 1 (gram) or n (per_observation)
    EigenScale scale = EigenScale::gram;
    double multiplier = 1.0;  // c above
    // theta <= d_q < 1: outside the range the shrinkage estimator is
    // usually stated for. K is still positive.
    bool theta_below_min_eigen = false;

    /// Z_rows' Z_rows = c U diag(K) U', the matrix added to X_S' X_S.
    Matrix gram_penalty() const;
};

/// Penalty from a precomputed decomposition of X_S' X_S (gram scale).
SppcsoPenalty make_penalty(const EigenDecomposition& gram_eigen, IndexSet support, double theta,
                           EigenScale scale, double n);

/// Decomposes X_S' X_S for `support` and builds the penalty.
SppcsoPenalty build_penalty(const Dataset& data, const IndexSet& support, double theta,
                            EigenScale scale = EigenScale::gram);

struct AugmentedDesign
{
    Matrix X_star;       // (n + q) x p
    Vector y_star;       // y followed by q zeros
    double n_effective;  // the original n, used for loss scaling
};

/// Appends the penalty rows (nonzero only at the support columns) to X.
AugmentedDesign augment(const Dataset& data, const SppcsoPenalty& penalty);

/// Throws Error(EmptySupport) if `support` is empty.
AugmentedDesign build_augmentation(const Dataset& data, const IndexSet& support, double theta,
                                   EigenScale scale = EigenScale::gram);

/// U diag(A) U' beta_ols with A_i = shrinkage_factor(d_i, theta).
/// Throws Error(SingularGram) when X_S' X_S is not invertible.
Vector sppcr_estimate(const Matrix& XS, const Vector& y, double theta, EigenScale scale = EigenScale::gram);

/// (X_S' X_S + P)^-1 X_S' y, the equivalent closed form.
Vector sppcr_estimate_closed_form(const Matrix& XS, const Vector& y, double theta,
                                  EigenScale scale = EigenScale::gram);

struct SppcsoOptions
{
    double tol = 1e-4;
    int max_iter = 10000;
    EigenScale scale = EigenScale::gram;
};

/// (1/2n) ||y - X b||^2 + (1/2n) ||Z b||^2 + lambda ||b||_1.
double sppcso_objective(const Dataset& data, const SppcsoPenalty& penalty, double lambda, const Vector& beta);

/// Second stage: lasso on the augmented design, warm-started at `initial`.
FitResult sppcso_refine(const Dataset& data, const SppcsoPenalty& penalty, double lambda, const Vector& initial,
                        const SppcsoOptions& options = {});

/**
 * Two-stage fit. A Lasso fit at `lambda` fixes the support; the penalty
 * built from that support's principal components is appended as extra
 * rows and a Lasso at the same `lambda` is solved on the augmented data,
 * starting from the first-stage solution.
 *
 * An empty first-stage support returns the Lasso fit with
 * reduced_to_lasso set.
 */
FitResult sppcso_fit(const Dataset& data, double lambda, double theta, const SppcsoOptions& options = {});

/// Plug-in check of  Lambda_max(Z'Z / n) * ||beta||_inf <= lambda / 4.
struct NoiseConditionDiagnostic
{
    double lhs = 0.0;
    double rhs = 0.0;
    bool satisfied = false;
};

NoiseConditionDiagnostic noise_condition(const SppcsoPenalty& penalty, const Vector& beta, double lambda, double n);

} // namespace sppcso
