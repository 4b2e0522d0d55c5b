#include <sppcso/estimator.hpp>
#include <sppcso/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace sppcso {

std::string_view to_string(EigenScale scale)
{
    return scale == EigenScale::gram ? "gram" : "per_observation";
}

EigenScale parse_eigen_scale(std::string_view name)
{
    if (name == "gram") return EigenScale::gram;
    if (name == "per_observation") return EigenScale::per_observation;
    throw Error(ErrorKind::Usage, "unknown eigen scale '" + std::string(name) + "' (gram | per_observation)");
}

void check_theta(double theta)
{
    if (!(theta > 0.0 && theta < 1.0)) {
        throw Error(ErrorKind::InvalidTheta, "theta must lie in (0, 1), got " + std::to_string(theta));
    }
}

double shrinkage_factor(double d, double theta)
{
    check_theta(theta);
    if (d >= 1.0) return (d - 1.0 + theta) / d;
    return theta * std::max(d, 0.0);
}

double ridge_shrinkage_factor(double d, double k)
{
    return d / (d + k);
}

double liu_shrinkage_factor(double d, double h)
{
    return (d + h) / (d + 1.0);
}

double penalty_weight(double d, double theta)
{
    check_theta(theta);
    if (d >= 1.0) return d * (1.0 - theta) / (d + theta - 1.0);
    return 1.0 / theta - std::max(d, 0.0);
}

Vector penalty_diag(const Vector& d, double theta)
{
    check_theta(theta);
    Vector K(d.size());
    for (Index i = 0; i < d.size(); ++i) K[i] = penalty_weight(d[i], theta);
    return K;
}

Matrix SppcsoPenalty::gram_penalty() const
{
    return multiplier * U * K.asDiagonal() * U.transpose();
}

SppcsoPenalty make_penalty(const EigenDecomposition& gram_eigen, IndexSet support, double theta,
                           EigenScale scale, double n)
{
    check_theta(theta);
    if (support.empty()) throw Error(ErrorKind::EmptySupport, "penalty needs a nonempty support");

    SppcsoPenalty pen;
    pen.support = std::move(support);
    pen.theta = theta;
    pen.scale = scale;
    pen.multiplier = scale == EigenScale::gram ? 1.0 : n;
    pen.U = gram_eigen.U;
    // Rounding can leave eigenvalues of a PSD Gram matrix slightly negative.
    pen.d = (gram_eigen.d / pen.multiplier).cwiseMax(0.0);
    pen.K = penalty_diag(pen.d, theta);
    pen.Z_rows = (pen.multiplier * pen.K).cwiseSqrt().asDiagonal() * pen.U.transpose();
    const double d_min = pen.d[pen.d.size() - 1];
    pen.theta_below_min_eigen = d_min < 1.0 && theta <= d_min;
    return pen;
}

SppcsoPenalty build_penalty(const Dataset& data, const IndexSet& support, double theta, EigenScale scale)
{
    check_theta(theta);
    if (support.empty()) throw Error(ErrorKind::EmptySupport, "penalty needs a nonempty support");
    return make_penalty(sym_eigen(support_gram(data.X, support)), support, theta, scale,
                        static_cast<double>(data.n()));
}

AugmentedDesign augment(const Dataset& data, const SppcsoPenalty& penalty)
{
    const Index n = data.n();
    const Index q = static_cast<Index>(penalty.support.size());
    AugmentedDesign out;
    out.X_star = Matrix::Zero(n + q, data.p());
    out.X_star.topRows(n) = data.X;
    for (Index k = 0; k < q; ++k) {
        out.X_star.block(n, penalty.support[static_cast<std::size_t>(k)], q, 1) = penalty.Z_rows.col(k);
    }
    out.y_star = Vector::Zero(n + q);
    out.y_star.head(n) = data.y;
    out.n_effective = static_cast<double>(n);
    return out;
}

AugmentedDesign build_augmentation(const Dataset& data, const IndexSet& support, double theta, EigenScale scale)
{
    return augment(data, build_penalty(data, support, theta, scale));
}

namespace {

Vector ols(const Matrix& XS, const Vector& y)
{
    const Matrix G = XS.transpose() * XS;
    Eigen::LDLT<Matrix> ldlt(G);
    const double tiny = 1e-12 * std::max(1.0, G.diagonal().cwiseAbs().maxCoeff());
    if (ldlt.info() != Eigen::Success || ldlt.vectorD().cwiseAbs().minCoeff() <= tiny) {
        throw Error(ErrorKind::SingularGram, "X_S' X_S is singular");
    }
    return ldlt.solve(XS.transpose() * y);
}

EigenDecomposition checked_eigen(const Matrix& XS)
{
    const Matrix G = XS.transpose() * XS;
    EigenDecomposition e = sym_eigen(0.5 * (G + G.transpose()));
    if (e.d[e.d.size() - 1] <= 1e-12 * std::max(1.0, e.d[0])) {
        throw Error(ErrorKind::SingularGram, "X_S' X_S is singular");
    }
    return e;
}

} // namespace

Vector sppcr_estimate(const Matrix& XS, const Vector& y, double theta, EigenScale scale)
{
    check_theta(theta);
    const EigenDecomposition e = checked_eigen(XS);
    const double c = scale == EigenScale::gram ? 1.0 : static_cast<double>(XS.rows());
    Vector A(e.d.size());
    for (Index i = 0; i < A.size(); ++i) A[i] = shrinkage_factor(e.d[i] / c, theta);
    return e.U * A.asDiagonal() * e.U.transpose() * ols(XS, y);
}

Vector sppcr_estimate_closed_form(const Matrix& XS, const Vector& y, double theta, EigenScale scale)
{
    check_theta(theta);
    IndexSet all(static_cast<std::size_t>(XS.cols()));
    for (Index j = 0; j < XS.cols(); ++j) all[static_cast<std::size_t>(j)] = j;
    const SppcsoPenalty pen =
        make_penalty(checked_eigen(XS), all, theta, scale, static_cast<double>(XS.rows()));
    const Matrix lhs = XS.transpose() * XS + pen.gram_penalty();
    return lhs.ldlt().solve(XS.transpose() * y);
}

double sppcso_objective(const Dataset& data, const SppcsoPenalty& penalty, double lambda, const Vector& beta)
{
    if (beta.size() != data.p()) throw Error(ErrorKind::DimensionMismatch, "beta length differs from p");
    const double n = static_cast<double>(data.n());
    const Vector bS = select_rows(beta, penalty.support);
    return (data.y - data.X * beta).squaredNorm() / (2.0 * n) +
           (penalty.Z_rows * bS).squaredNorm() / (2.0 * n) + lambda * beta.lpNorm<1>();
}

FitResult sppcso_refine(const Dataset& data, const SppcsoPenalty& penalty, double lambda, const Vector& initial,
                        const SppcsoOptions& options)
{
    FitResult fit = cd_fit_stacked(data.X, data.y, penalty.Z_rows, penalty.support, PenaltySpec::lasso(lambda),
                                   initial, {options.tol, options.max_iter, static_cast<double>(data.n())});
    if (penalty.theta_below_min_eigen) {
        fit.warnings.push_back("theta " + std::to_string(penalty.theta) +
                               " is not above the smallest support eigenvalue " +
                               std::to_string(penalty.d[penalty.d.size() - 1]));
    }
    return fit;
}

FitResult sppcso_fit(const Dataset& data, double lambda, double theta, const SppcsoOptions& options)
{
    check_theta(theta);
    FitResult stage1 = cd_fit(data.X, data.y, PenaltySpec::lasso(lambda), Vector::Zero(data.p()),
                              {options.tol, options.max_iter, 0.0});
    if (stage1.support.empty()) {
        stage1.reduced_to_lasso = true;
        return stage1;
    }
    const SppcsoPenalty pen = build_penalty(data, stage1.support, theta, options.scale);
    return sppcso_refine(data, pen, lambda, stage1.beta, options);
}

NoiseConditionDiagnostic noise_condition(const SppcsoPenalty& penalty, const Vector& beta, double lambda, double n)
{
    NoiseConditionDiagnostic out;
    out.lhs = penalty.multiplier * penalty.K.maxCoeff() / n * beta.cwiseAbs().maxCoeff();
    out.rhs = lambda / 4.0;
    out.satisfied = out.lhs <= out.rhs;
    return out;
}

} // namespace sppcso
