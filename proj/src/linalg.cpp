#include <sppcso/linalg.hpp>
#include <sppcso/error.hpp>

#include <algorithm>
#include <cmath>
#include <numeric>
#include <string>

namespace sppcso {

Dataset Dataset::raw(Matrix X, Vector y)
{
    if (X.rows() != y.size()) {
        throw Error(ErrorKind::DimensionMismatch,
                    "X has " + std::to_string(X.rows()) + " rows but y has " +
                        std::to_string(y.size()) + " entries");
    }
    Dataset d;
    d.column_centers = Vector::Zero(X.cols());
    d.column_scales = Vector::Ones(X.cols());
    d.X = std::move(X);
    d.y = std::move(y);
    return d;
}

Dataset standardize(const Dataset& raw)
{
    const Index n = raw.n();
    const Index p = raw.p();
    if (n < 2) {
        throw Error(ErrorKind::TooFewRows, "standardize needs at least 2 rows, got " + std::to_string(n));
    }
    if (raw.y.size() != n) {
        throw Error(ErrorKind::DimensionMismatch, "X rows and y length differ");
    }

    Dataset out;
    out.X.resize(n, p);
    out.column_centers.resize(p);
    out.column_scales.resize(p);
    const double dn = static_cast<double>(n);

    const bool have_prev = raw.column_scales.size() == p && raw.column_centers.size() == p;
    for (Index j = 0; j < p; ++j) {
        const double mean = raw.X.col(j).mean();
        out.X.col(j) = raw.X.col(j).array() - mean;
        const double scale = std::sqrt(out.X.col(j).squaredNorm() / dn);
        const double magnitude = std::max(1.0, raw.X.col(j).cwiseAbs().maxCoeff());
        if (!(scale > 1e-12 * magnitude)) {
            throw Error(ErrorKind::ConstantColumn, "column " + std::to_string(j) + " has zero variance");
        }
        out.X.col(j) /= scale;
        const double prev_center = have_prev ? raw.column_centers[j] : 0.0;
        const double prev_scale = have_prev ? raw.column_scales[j] : 1.0;
        out.column_centers[j] = prev_center + prev_scale * mean;
        out.column_scales[j] = prev_scale * scale;
    }

    const double y_mean = raw.y.mean();
    out.y = raw.y.array() - y_mean;
    out.y_center = raw.y_center + y_mean;
    out.standardized = true;
    return out;
}

Dataset apply_transform(const Dataset& reference, const Matrix& X_raw, const Vector& y_raw)
{
    if (X_raw.cols() != reference.p() || X_raw.rows() != y_raw.size()) {
        throw Error(ErrorKind::DimensionMismatch, "apply_transform: shape does not match reference");
    }
    Dataset out;
    out.X = (X_raw.rowwise() - reference.column_centers.transpose()).array().rowwise() /
            reference.column_scales.transpose().array();
    out.y = y_raw.array() - reference.y_center;
    out.standardized = reference.standardized;
    out.column_centers = reference.column_centers;
    out.column_scales = reference.column_scales;
    out.y_center = reference.y_center;
    return out;
}

Vector coefficients_to_raw(const Dataset& data, const Vector& beta)
{
    return beta.array() / data.column_scales.array();
}

double raw_intercept(const Dataset& data, const Vector& beta)
{
    return data.y_center - data.column_centers.dot(coefficients_to_raw(data, beta));
}

Vector predict_raw(const Dataset& data, const Vector& beta, const Matrix& X_raw)
{
    const Vector b = coefficients_to_raw(data, beta);
    return (X_raw * b).array() + raw_intercept(data, beta);
}

Matrix select_rows(const Matrix& M, const IndexSet& rows)
{
    Matrix out(static_cast<Index>(rows.size()), M.cols());
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out.row(static_cast<Index>(i)) = M.row(rows[i]);
    }
    return out;
}

Vector select_rows(const Vector& v, const IndexSet& rows)
{
    Vector out(static_cast<Index>(rows.size()));
    for (std::size_t i = 0; i < rows.size(); ++i) {
        out[static_cast<Index>(i)] = v[rows[i]];
    }
    return out;
}

Matrix select_columns(const Matrix& M, const IndexSet& cols)
{
    Matrix out(M.rows(), static_cast<Index>(cols.size()));
    for (std::size_t k = 0; k < cols.size(); ++k) {
        out.col(static_cast<Index>(k)) = M.col(cols[k]);
    }
    return out;
}

IndexSet support_of(const Vector& beta)
{
    IndexSet s;
    for (Index j = 0; j < beta.size(); ++j) {
        if (beta[j] != 0.0) s.push_back(j);
    }
    return s;
}

Matrix support_gram(const Matrix& X, const IndexSet& support)
{
    const Matrix XS = select_columns(X, support);
    const Index q = XS.cols();
    Matrix G = Matrix::Zero(q, q);
    G.selfadjointView<Eigen::Lower>().rankUpdate(XS.transpose());
    return G.selfadjointView<Eigen::Lower>();
}

EigenDecomposition sym_eigen(const Matrix& M)
{
    const Index q = M.rows();
    if (q < 1 || M.cols() != q) {
        throw Error(ErrorKind::DimensionMismatch, "sym_eigen needs a nonempty square matrix");
    }
    const double magnitude = std::max(1.0, M.cwiseAbs().maxCoeff());
    if ((M - M.transpose()).cwiseAbs().maxCoeff() > 1e-10 * magnitude) {
        throw Error(ErrorKind::NotSymmetric, "asymmetry exceeds tolerance");
    }

    Matrix A = 0.5 * (M + M.transpose());
    Matrix V = Matrix::Identity(q, q);
    const double threshold = 1e-12 * A.norm();

    auto off_norm = [&A, q] {
        double s = 0.0;
        for (Index j = 0; j < q; ++j)
            for (Index i = 0; i < q; ++i)
                if (i != j) s += A(i, j) * A(i, j);
        return std::sqrt(s);
    };

    for (int sweep = 0; sweep < 100 && off_norm() > threshold; ++sweep) {
        for (Index p = 0; p + 1 < q; ++p) {
            for (Index r = p + 1; r < q; ++r) {
                const double apr = A(p, r);
                if (apr == 0.0) continue;
                const double tau = (A(r, r) - A(p, p)) / (2.0 * apr);
                const double t = std::abs(tau) > 1e150
                                     ? 0.5 / tau
                                     : std::copysign(1.0, tau) / (std::abs(tau) + std::sqrt(tau * tau + 1.0));
                const double c = 1.0 / std::sqrt(t * t + 1.0);
                const double s = t * c;

                // A <- R' A R, with R rotating the (p, r) plane.
                for (Index k = 0; k < q; ++k) {
                    const double akp = A(k, p);
                    const double akr = A(k, r);
                    A(k, p) = c * akp - s * akr;
                    A(k, r) = s * akp + c * akr;
                }
                for (Index k = 0; k < q; ++k) {
                    const double apk = A(p, k);
                    const double ark = A(r, k);
                    A(p, k) = c * apk - s * ark;
                    A(r, k) = s * apk + c * ark;
                }
                A(p, r) = 0.0;
                A(r, p) = 0.0;
                for (Index k = 0; k < q; ++k) {
                    const double vkp = V(k, p);
                    const double vkr = V(k, r);
                    V(k, p) = c * vkp - s * vkr;
                    V(k, r) = s * vkp + c * vkr;
                }
            }
        }
    }

    std::vector<Index> order(static_cast<std::size_t>(q));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&A](Index a, Index b) { return A(a, a) > A(b, b); });

    EigenDecomposition out;
    out.d.resize(q);
    out.U.resize(q, q);
    for (Index k = 0; k < q; ++k) {
        const Index src = order[static_cast<std::size_t>(k)];
        out.d[k] = A(src, src);
        Eigen::VectorXd v = V.col(src);
        for (Index i = 0; i < q; ++i) {
            if (std::abs(v[i]) > 1e-12) {
                if (v[i] < 0.0) v = -v;
                break;
            }
        }
        out.U.col(k) = v;
    }
    return out;
}

} // namespace sppcso
