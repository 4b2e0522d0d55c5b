#pragma once

#include <Eigen/Dense>

#include <cstdint>
#include <vector>

namespace sppcso {

using Matrix = Eigen::MatrixXd;
using Vector = Eigen::VectorXd;
using Index = Eigen::Index;
using IndexSet = std::vector<Index>;

/**
 * Response vector plus design matrix, with the affine transform that was
 * applied to reach the current values.
 *
 * For a standardized dataset, raw values relate to stored values by
 *   X_raw(:, j) = column_centers[j] + column_scales[j] * X(:, j)
 *   y_raw       = y_center + y
 * so that a coefficient b on the stored scale maps to b / column_scales[j]
 * on the raw scale.
 */
struct Dataset
{
    Matrix X;
    Vector y;
    bool standardized = false;
    Vector column_centers;
    Vector column_scales;
    double y_center = 0.0;

    Index n() const { return X.rows(); }
    Index p() const { return X.cols(); }

    /// Wraps untransformed data (identity transform recorded).
    static Dataset raw(Matrix X, Vector y);
};

/// Centers y and every column of X, then scales each column so that
/// X_j'X_j / n == 1 (population scaling). Transforms compose, so standardizing
/// an already standardized dataset keeps the mapping back to the original raw
/// values.
Dataset standardize(const Dataset& raw);

/// Applies the transform recorded in `reference` to other raw rows (e.g. a
/// validation fold). The result carries `reference`'s transform.
Dataset apply_transform(const Dataset& reference, const Matrix& X_raw, const Vector& y_raw);

/// Coefficients on the stored (standardized) scale mapped to the raw scale.
Vector coefficients_to_raw(const Dataset& data, const Vector& beta);

/// Intercept of the raw-scale model implied by `beta`.
double raw_intercept(const Dataset& data, const Vector& beta);

/// Predictions for raw rows from a model fitted on `data`.
Vector predict_raw(const Dataset& data, const Vector& beta, const Matrix& X_raw);

/// Rows/entries selected by index, in the given order.
Matrix select_rows(const Matrix& M, const IndexSet& rows);
Vector select_rows(const Vector& v, const IndexSet& rows);
Matrix select_columns(const Matrix& M, const IndexSet& cols);

/// Indices j with beta[j] != 0, ascending.
IndexSet support_of(const Vector& beta);

struct EigenDecomposition
{
    Matrix U;  // columns are unit eigenvectors
    Vector d;  // eigenvalues, descending
};

/**
 * Symmetric eigendecomposition by cyclic Jacobi rotations.
 *
 * Sweeps until the off-diagonal Frobenius norm drops below
 * 1e-12 * ||M||_F (at most 100 sweeps). Eigenvalues are returned in
 * descending order and each eigenvector is signed so that its first
 * nonzero entry is positive, which makes the output a deterministic
 * function of the input.
 *
 * Throws Error(NotSymmetric) if |M_ij - M_ji| > 1e-10 * max(1, max|M|).
 */
EigenDecomposition sym_eigen(const Matrix& M);

/// X_S' X_S for the columns in `support` (exactly symmetric).
Matrix support_gram(const Matrix& X, const IndexSet& support);

} // namespace sppcso
