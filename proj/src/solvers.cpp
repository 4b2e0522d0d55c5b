#include <sppcso/solvers.hpp>
#include <sppcso/error.hpp>

#include <algorithm>
#include <cmath>
#include <string>

namespace sppcso {

std::string_view to_string(PenaltyFamily family)
{
    switch (family) {
        case PenaltyFamily::lasso: return "lasso";
        case PenaltyFamily::enet: return "enet";
        case PenaltyFamily::mcp: return "mcp";
        case PenaltyFamily::scad: return "scad";
        case PenaltyFamily::mnet: return "mnet";
    }
    return "unknown";
}

PenaltyFamily parse_penalty_family(std::string_view name)
{
    for (auto f : {PenaltyFamily::lasso, PenaltyFamily::enet, PenaltyFamily::mcp, PenaltyFamily::scad,
                   PenaltyFamily::mnet}) {
        if (to_string(f) == name) return f;
    }
    throw Error(ErrorKind::InvalidPenalty, "unknown penalty family '" + std::string(name) + "'");
}

PenaltySpec PenaltySpec::lasso(double lambda)
{
    return {PenaltyFamily::lasso, lambda, default_mcp_gamma, 1.0};
}

PenaltySpec PenaltySpec::enet(double lambda, double alpha)
{
    return {PenaltyFamily::enet, lambda, default_mcp_gamma, alpha};
}

PenaltySpec PenaltySpec::mcp(double lambda, double gamma)
{
    return {PenaltyFamily::mcp, lambda, gamma, 1.0};
}

PenaltySpec PenaltySpec::scad(double lambda, double gamma)
{
    return {PenaltyFamily::scad, lambda, gamma, 1.0};
}

PenaltySpec PenaltySpec::mnet(double lambda, double gamma, double alpha)
{
    return {PenaltyFamily::mnet, lambda, gamma, alpha};
}

PenaltySpec PenaltySpec::with_lambda(double new_lambda) const
{
    PenaltySpec s = *this;
    s.lambda = new_lambda;
    return s;
}

void PenaltySpec::validate() const
{
    if (!(lambda >= 0.0) || !std::isfinite(lambda)) {
        throw Error(ErrorKind::InvalidPenalty, "lambda must be finite and >= 0");
    }
    switch (family) {
        case PenaltyFamily::lasso: break;
        case PenaltyFamily::scad:
            if (!(gamma > 2.0)) throw Error(ErrorKind::InvalidGamma, "scad requires gamma > 2");
            break;
        case PenaltyFamily::mcp:
        case PenaltyFamily::mnet:
            if (!(gamma > 0.0)) throw Error(ErrorKind::InvalidGamma, "mcp/mnet require gamma > 0");
            break;
        case PenaltyFamily::enet: break;
    }
    if (family == PenaltyFamily::enet || family == PenaltyFamily::mnet) {
        if (!(alpha > 0.0 && alpha <= 1.0)) {
            throw Error(ErrorKind::InvalidPenalty, "mixing weight alpha must lie in (0, 1]");
        }
    }
}

double soft_threshold(double r, double lam)
{
    const double a = std::abs(r) - lam;
    return a > 0.0 ? std::copysign(a, r) : 0.0;
}

double mcp_threshold(double r, double lam, double gamma)
{
    if (!(gamma > 1.0)) throw Error(ErrorKind::InvalidGamma, "mcp threshold requires gamma > 1");
    if (std::abs(r) <= gamma * lam) return soft_threshold(r, lam) / (1.0 - 1.0 / gamma);
    return r;
}

double scad_threshold(double r, double lam, double gamma)
{
    if (!(gamma > 2.0)) throw Error(ErrorKind::InvalidGamma, "scad threshold requires gamma > 2");
    const double a = std::abs(r);
    if (a <= 2.0 * lam) return soft_threshold(r, lam);
    if (a <= gamma * lam) return ((gamma - 1.0) * r - std::copysign(gamma * lam, r)) / (gamma - 2.0);
    return r;
}

namespace {

double mcp_penalty(double t, double lam, double gamma)
{
    if (t <= gamma * lam) return lam * t - t * t / (2.0 * gamma);
    return 0.5 * gamma * lam * lam;
}

double scad_penalty(double t, double lam, double gamma)
{
    if (t <= lam) return lam * t;
    if (t <= gamma * lam) return (2.0 * gamma * lam * t - t * t - lam * lam) / (2.0 * (gamma - 1.0));
    return 0.5 * lam * lam * (gamma + 1.0);
}

// argmin (w/2) b^2 - z b + mcp(|b|)
double mcp_minimizer(double z, double lam, double gamma, double w)
{
    if (!(w * gamma > 1.0)) {
        throw Error(ErrorKind::InvalidGamma, "mcp coordinate update needs curvature * gamma > 1");
    }
    if (std::abs(z) <= gamma * lam * w) return soft_threshold(z, lam) / (w - 1.0 / gamma);
    return z / w;
}

// argmin (w/2) b^2 - z b + scad(|b|)
double scad_minimizer(double z, double lam, double gamma, double w)
{
    if (!(w * (gamma - 1.0) > 1.0)) {
        throw Error(ErrorKind::InvalidGamma, "scad coordinate update needs curvature * (gamma - 1) > 1");
    }
    const double a = std::abs(z);
    if (a <= lam * (1.0 + w)) return soft_threshold(z, lam) / w;
    if (a <= w * gamma * lam) {
        return ((gamma - 1.0) * z - std::copysign(gamma * lam, z)) / (w * (gamma - 1.0) - 1.0);
    }
    return z / w;
}

} // namespace

double penalty_value(const PenaltySpec& spec, double b)
{
    const double t = std::abs(b);
    const double lam = spec.lambda;
    switch (spec.family) {
        case PenaltyFamily::lasso: return lam * t;
        case PenaltyFamily::enet: return lam * spec.alpha * t + lam * (1.0 - spec.alpha) * t * t;
        case PenaltyFamily::mcp: return mcp_penalty(t, lam, spec.gamma);
        case PenaltyFamily::scad: return scad_penalty(t, lam, spec.gamma);
        case PenaltyFamily::mnet:
            return mcp_penalty(t, lam * spec.alpha, spec.gamma) + lam * (1.0 - spec.alpha) * t * t;
    }
    return 0.0;
}

double coordinate_minimizer(const PenaltySpec& spec, double z, double curvature)
{
    const double lam = spec.lambda;
    switch (spec.family) {
        case PenaltyFamily::lasso: return soft_threshold(z, lam) / curvature;
        case PenaltyFamily::enet:
            return soft_threshold(z, lam * spec.alpha) / (curvature + 2.0 * lam * (1.0 - spec.alpha));
        case PenaltyFamily::mcp: return mcp_minimizer(z, lam, spec.gamma, curvature);
        case PenaltyFamily::scad: return scad_minimizer(z, lam, spec.gamma, curvature);
        case PenaltyFamily::mnet:
            return mcp_minimizer(z, lam * spec.alpha, spec.gamma, curvature + 2.0 * lam * (1.0 - spec.alpha));
    }
    return 0.0;
}

double lambda_max(const Matrix& X, const Vector& y)
{
    if (X.rows() == 0 || X.cols() == 0) throw Error(ErrorKind::EmptyData, "empty design");
    if (X.rows() != y.size()) throw Error(ErrorKind::DimensionMismatch, "X rows and y length differ");
    return (X.transpose() * y).cwiseAbs().maxCoeff() / static_cast<double>(X.rows());
}

Vector lambda_path(const Dataset& data, int n_lambda, double min_ratio)
{
    if (n_lambda < 1) throw Error(ErrorKind::EmptyData, "n_lambda must be >= 1");
    if (!(min_ratio > 0.0 && min_ratio < 1.0)) {
        throw Error(ErrorKind::InvalidPenalty, "min_ratio must lie in (0, 1)");
    }
    const double top = lambda_max(data.X, data.y);
    if (!(top > 0.0)) throw Error(ErrorKind::EmptyData, "lambda_max is zero; no valid path");
    Vector path(n_lambda);
    path[0] = top;
    for (int k = 1; k < n_lambda; ++k) {
        path[k] = top * std::pow(min_ratio, static_cast<double>(k) / static_cast<double>(n_lambda - 1));
    }
    return path;
}

double objective(const Matrix& X, const Vector& y, const PenaltySpec& spec, const Vector& beta, double n_scale)
{
    if (X.rows() != y.size() || X.cols() != beta.size()) {
        throw Error(ErrorKind::DimensionMismatch, "objective: X, y and beta shapes disagree");
    }
    const double n = n_scale > 0.0 ? n_scale : static_cast<double>(X.rows());
    double pen = 0.0;
    for (Index j = 0; j < beta.size(); ++j) pen += penalty_value(spec, beta[j]);
    return (y - X * beta).squaredNorm() / (2.0 * n) + pen;
}

double kkt_residual(const Matrix& X, const Vector& y, const PenaltySpec& spec, const Vector& beta, double n_scale)
{
    if (!spec.convex()) throw Error(ErrorKind::InvalidPenalty, "KKT residual defined for lasso/enet only");
    const double n = n_scale > 0.0 ? n_scale : static_cast<double>(X.rows());
    const Vector grad = X.transpose() * (y - X * beta) / n;
    const double l1 = spec.lambda * spec.alpha;
    const double l2 = spec.family == PenaltyFamily::enet ? spec.lambda * (1.0 - spec.alpha) : 0.0;
    double worst = 0.0;
    for (Index j = 0; j < beta.size(); ++j) {
        const double g = grad[j] - 2.0 * l2 * beta[j];
        const double v = beta[j] != 0.0 ? std::abs(g - std::copysign(l1, beta[j]))
                                        : std::max(0.0, std::abs(g) - l1);
        worst = std::max(worst, v);
    }
    return worst;
}

namespace {

// Plain dense design: residual r = y - X b.
struct DenseDesign
{
    const Matrix& X;
    Vector resid;

    DenseDesign(const Matrix& X_, const Vector& y, const Vector& beta) : X(X_), resid(y - X_ * beta) {}

    Vector column_sq_norms() const { return X.colwise().squaredNorm().transpose(); }
    double dot(Index j) const { return X.col(j).dot(resid); }
    void shift(Index j, double delta) { resid.noalias() -= delta * X.col(j); }
    double rss() const { return resid.squaredNorm(); }
};

// [X; E] with response [y; 0], where E is zero outside the columns in
// `extra_cols` and E(:, extra_cols[k]) = extra_rows(:, k). The extra rows are
// never materialized next to X.
struct StackedDesign
{
    const Matrix& X;
    const Matrix& extra;
    std::vector<Index> slot;  // column -> position in extra_cols, or -1
    Vector resid;
    Vector extra_resid;  // -E b

    StackedDesign(const Matrix& X_, const Vector& y, const Matrix& extra_rows, const IndexSet& extra_cols,
                  const Vector& beta)
        : X(X_), extra(extra_rows), slot(static_cast<std::size_t>(X_.cols()), -1), resid(y - X_ * beta),
          extra_resid(Vector::Zero(extra_rows.rows()))
    {
        for (std::size_t k = 0; k < extra_cols.size(); ++k) {
            const Index j = extra_cols[k];
            slot[static_cast<std::size_t>(j)] = static_cast<Index>(k);
            extra_resid.noalias() -= beta[j] * extra.col(static_cast<Index>(k));
        }
    }

    Vector column_sq_norms() const
    {
        Vector w = X.colwise().squaredNorm().transpose();
        for (std::size_t j = 0; j < slot.size(); ++j) {
            if (slot[j] >= 0) w[static_cast<Index>(j)] += extra.col(slot[j]).squaredNorm();
        }
        return w;
    }
    double dot(Index j) const
    {
        const Index k = slot[static_cast<std::size_t>(j)];
        const double base = X.col(j).dot(resid);
        return k >= 0 ? base + extra.col(k).dot(extra_resid) : base;
    }
    void shift(Index j, double delta)
    {
        resid.noalias() -= delta * X.col(j);
        const Index k = slot[static_cast<std::size_t>(j)];
        if (k >= 0) extra_resid.noalias() -= delta * extra.col(k);
    }
    double rss() const { return resid.squaredNorm() + extra_resid.squaredNorm(); }
};

template <class Design>
FitResult run_cd(Design& design, const PenaltySpec& spec, const Vector& init, const CdOptions& options, double n)
{
    const Index p = init.size();
    const Vector curvature = design.column_sq_norms() / n;

    FitResult fit;
    fit.beta = init;
    Vector& beta = fit.beta;

    auto current_objective = [&] {
        double pen = 0.0;
        for (Index j = 0; j < p; ++j) pen += penalty_value(spec, beta[j]);
        return design.rss() / (2.0 * n) + pen;
    };

    auto update = [&](Index j) {
        const double w = curvature[j];
        double next = 0.0;
        if (w > 0.0) {
            const double z = design.dot(j) / n + w * beta[j];
            next = coordinate_minimizer(spec, z, w);
        }
        const double delta = next - beta[j];
        if (delta != 0.0) {
            design.shift(j, delta);
            beta[j] = next;
        }
        return std::abs(delta);
    };

    double last = current_objective();
    auto after_sweep = [&] {
        ++fit.iterations;
        const double now = current_objective();
        if (!std::isfinite(now) ||
            (spec.convex() && now > last + 1e-6 * std::max(1.0, std::abs(last)))) {
            throw Error(ErrorKind::Diverged, "objective increased from " + std::to_string(last) + " to " +
                                                 std::to_string(now));
        }
        last = now;
    };

    IndexSet active;
    while (fit.iterations < options.max_iter) {
        double change = 0.0;
        for (Index j = 0; j < p; ++j) change = std::max(change, update(j));
        after_sweep();
        if (change < options.tol) {
            fit.converged = true;
            break;
        }

        active = support_of(beta);
        while (fit.iterations < options.max_iter) {
            double inner = 0.0;
            for (Index j : active) inner = std::max(inner, update(j));
            after_sweep();
            if (inner < options.tol) break;
        }
    }
    fit.support = support_of(beta);
    return fit;
}

void check_cd_inputs(const Matrix& X, const Vector& y, const PenaltySpec& spec, const Vector& init,
                     const CdOptions& options)
{
    spec.validate();
    if (X.rows() != y.size() || init.size() != X.cols()) {
        throw Error(ErrorKind::DimensionMismatch, "cd_fit: X, y and init shapes disagree");
    }
    if (!(options.tol > 0.0)) throw Error(ErrorKind::InvalidPenalty, "tol must be positive");
}

} // namespace

FitResult cd_fit(const Matrix& X, const Vector& y, const PenaltySpec& spec, const Vector& init,
                 const CdOptions& options)
{
    check_cd_inputs(X, y, spec, init, options);
    const double n = options.n_scale > 0.0 ? options.n_scale : static_cast<double>(X.rows());
    // Zero satisfies the optimality conditions; skip sweeps whose only effect
    // would be rounding noise in the inner products.
    const double slope = (X.transpose() * y).cwiseAbs().maxCoeff() / n;
    if (init.isZero(0.0) && spec.lambda * spec.alpha >= slope * (1.0 - 1e-12)) {
        FitResult fit;
        fit.beta = Vector::Zero(X.cols());
        fit.iterations = 1;
        fit.converged = true;
        fit.objective = objective(X, y, spec, fit.beta, n);
        return fit;
    }
    DenseDesign design(X, y, init);
    FitResult fit = run_cd(design, spec, init, options, n);
    fit.objective = objective(X, y, spec, fit.beta, n);
    return fit;
}

FitResult cd_fit_stacked(const Matrix& X, const Vector& y, const Matrix& extra_rows, const IndexSet& extra_cols,
                         const PenaltySpec& spec, const Vector& init, const CdOptions& options)
{
    check_cd_inputs(X, y, spec, init, options);
    if (extra_rows.cols() != static_cast<Index>(extra_cols.size())) {
        throw Error(ErrorKind::DimensionMismatch, "extra rows and extra column list disagree");
    }
    for (Index j : extra_cols) {
        if (j < 0 || j >= X.cols()) throw Error(ErrorKind::DimensionMismatch, "extra column index out of range");
    }
    const double n = options.n_scale > 0.0 ? options.n_scale : static_cast<double>(X.rows());
    StackedDesign design(X, y, extra_rows, extra_cols, init);
    FitResult fit = run_cd(design, spec, init, options, n);
    const Vector bS = select_rows(fit.beta, extra_cols);
    fit.objective = objective(X, y, spec, fit.beta, n) + (extra_rows * bS).squaredNorm() / (2.0 * n);
    return fit;
}

} // namespace sppcso
