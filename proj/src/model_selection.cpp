#include <sppcso/model_selection.hpp>
#include <sppcso/error.hpp>
#include <sppcso/parallel.hpp>

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <optional>
#include <random>
#include <string>

namespace sppcso {

namespace {

constexpr Method all_methods[] = {Method::lasso, Method::enet, Method::mcp,
                                  Method::scad,  Method::mnet, Method::sppcso};

// Positions of `lambdas` sorted by descending value (stable).
std::vector<Index> descending_order(const Vector& lambdas)
{
    std::vector<Index> order(static_cast<std::size_t>(lambdas.size()));
    std::iota(order.begin(), order.end(), Index{0});
    std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return lambdas[a] > lambdas[b]; });
    return order;
}

} // namespace

std::string_view to_string(Method method)
{
    switch (method) {
        case Method::lasso: return "lasso";
        case Method::enet: return "enet";
        case Method::mcp: return "mcp";
        case Method::scad: return "scad";
        case Method::mnet: return "mnet";
        case Method::sppcso: return "sppcso";
    }
    return "unknown";
}

std::string valid_method_names()
{
    std::string s;
    for (auto m : all_methods) {
        if (!s.empty()) s += ", ";
        s += to_string(m);
    }
    return s;
}

Method parse_method(std::string_view name)
{
    for (auto m : all_methods) {
        if (to_string(m) == name) return m;
    }
    throw Error(ErrorKind::Usage, "unknown method '" + std::string(name) + "'; valid methods: " + valid_method_names());
}

PenaltySpec MethodConfig::penalty(double lambda) const
{
    switch (method) {
        case Method::lasso:
        case Method::sppcso: return PenaltySpec::lasso(lambda);
        case Method::enet: return PenaltySpec::enet(lambda, alpha);
        case Method::mcp: return PenaltySpec::mcp(lambda, gamma > 0.0 ? gamma : default_mcp_gamma);
        case Method::scad: return PenaltySpec::scad(lambda, gamma > 0.0 ? gamma : default_scad_gamma);
        case Method::mnet: return PenaltySpec::mnet(lambda, gamma > 0.0 ? gamma : default_mcp_gamma, alpha);
    }
    return PenaltySpec::lasso(lambda);
}

FitResult fit_method(const Dataset& data, const MethodConfig& config, double lambda, double theta)
{
    if (config.method == Method::sppcso) {
        return sppcso_fit(data, lambda, theta, {config.tol, config.max_iter, config.scale});
    }
    return cd_fit(data.X, data.y, config.penalty(lambda), Vector::Zero(data.p()), {config.tol, config.max_iter, 0.0});
}

std::vector<std::vector<FitResult>> fit_grid(const Dataset& data, const MethodConfig& config, const Vector& lambdas,
                                             const std::vector<double>& thetas)
{
    const auto order = descending_order(lambdas);
    const std::size_t n_lambda = static_cast<std::size_t>(lambdas.size());
    const CdOptions cd{config.tol, config.max_iter, 0.0};

    std::vector<FitResult> base(n_lambda);
    Vector warm = Vector::Zero(data.p());
    for (Index l : order) {
        FitResult fit = cd_fit(data.X, data.y, config.penalty(lambdas[l]), warm, cd);
        warm = fit.beta;
        base[static_cast<std::size_t>(l)] = std::move(fit);
    }
    if (!config.uses_theta()) return {std::move(base)};

    if (thetas.empty()) throw Error(ErrorKind::InvalidTheta, "theta grid is empty");
    for (double t : thetas) check_theta(t);

    const SppcsoOptions opts{config.tol, config.max_iter, config.scale};
    std::vector<std::vector<FitResult>> out(thetas.size(), std::vector<FitResult>(n_lambda));
    for (std::size_t l = 0; l < n_lambda; ++l) {
        const FitResult& stage1 = base[l];
        if (stage1.support.empty()) {
            for (auto& row : out) {
                row[l] = stage1;
                row[l].reduced_to_lasso = true;
            }
            continue;
        }
        const EigenDecomposition eig = sym_eigen(support_gram(data.X, stage1.support));
        for (std::size_t t = 0; t < thetas.size(); ++t) {
            const SppcsoPenalty pen =
                make_penalty(eig, stage1.support, thetas[t], config.scale, static_cast<double>(data.n()));
            out[t][l] = sppcso_refine(data, pen, lambdas[static_cast<Index>(l)], stage1.beta, opts);
        }
    }
    return out;
}

std::vector<IndexSet> kfold_split(Index n, int k, std::uint64_t seed)
{
    if (k < 2 || n < k) {
        throw Error(ErrorKind::BadFoldCount,
                    "need 2 <= k <= n, got k=" + std::to_string(k) + " n=" + std::to_string(n));
    }
    IndexSet perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::mt19937_64 rng(seed);
    std::shuffle(perm.begin(), perm.end(), rng);

    std::vector<IndexSet> folds(static_cast<std::size_t>(k));
    for (std::size_t i = 0; i < perm.size(); ++i) folds[i % static_cast<std::size_t>(k)].push_back(perm[i]);
    for (auto& f : folds) std::sort(f.begin(), f.end());
    return folds;
}

std::vector<double> theta_grid()
{
    std::vector<double> g;
    for (int i = 1; i <= 9; ++i) g.push_back(i / 10.0);
    return g;
}

Vector default_lambda_grid(const Dataset& data, const MethodConfig& config, int n_lambda, double min_ratio)
{
    Vector path = lambda_path(data, n_lambda, min_ratio);
    if (config.method == Method::enet || config.method == Method::mnet) path /= config.alpha;
    return path;
}

CVResult cross_validate(const Dataset& data, const MethodConfig& config, const Vector& lambda_grid,
                        const std::vector<double>& thetas, int k, std::uint64_t seed, int threads)
{
    if (lambda_grid.size() == 0) throw Error(ErrorKind::EmptyData, "lambda grid is empty");
    const std::vector<double> theta_values =
        config.uses_theta() ? thetas : std::vector<double>{std::numeric_limits<double>::quiet_NaN()};
    if (theta_values.empty()) throw Error(ErrorKind::InvalidTheta, "theta grid is empty");

    const auto folds = kfold_split(data.n(), k, seed);
    const std::size_t n_lambda = static_cast<std::size_t>(lambda_grid.size());
    const std::size_t n_points = theta_values.size() * n_lambda;

    // mse[fold][point]; nullopt marks a failed fit.
    std::vector<std::vector<std::optional<double>>> mse(folds.size());

    parallel_for(folds.size(), threads, [&](std::size_t f) {
        std::vector<bool> held(static_cast<std::size_t>(data.n()), false);
        for (Index i : folds[f]) held[static_cast<std::size_t>(i)] = true;
        IndexSet train;
        for (Index i = 0; i < data.n(); ++i) {
            if (!held[static_cast<std::size_t>(i)]) train.push_back(i);
        }
        const Dataset train_raw = Dataset::raw(select_rows(data.X, train), select_rows(data.y, train));
        const Dataset train_std = standardize(train_raw);
        const Dataset val = apply_transform(train_std, select_rows(data.X, folds[f]), select_rows(data.y, folds[f]));

        auto& out = mse[f];
        out.assign(n_points, std::nullopt);
        std::vector<std::vector<FitResult>> fits;
        try {
            fits = fit_grid(train_std, config, lambda_grid, thetas);
        } catch (const Error&) {
            // Whole-path failure: fall back to independent fits per point.
            for (std::size_t t = 0; t < theta_values.size(); ++t) {
                for (std::size_t l = 0; l < n_lambda; ++l) {
                    try {
                        const FitResult fit =
                            fit_method(train_std, config, lambda_grid[static_cast<Index>(l)], theta_values[t]);
                        out[t * n_lambda + l] = (val.y - val.X * fit.beta).squaredNorm() / static_cast<double>(val.n());
                    } catch (const Error&) {
                    }
                }
            }
            return;
        }
        for (std::size_t t = 0; t < fits.size(); ++t) {
            for (std::size_t l = 0; l < n_lambda; ++l) {
                out[t * n_lambda + l] =
                    (val.y - val.X * fits[t][l].beta).squaredNorm() / static_cast<double>(val.n());
            }
        }
    });

    CVResult res;
    res.curve.resize(n_points);
    bool any = false;
    for (std::size_t t = 0; t < theta_values.size(); ++t) {
        for (std::size_t l = 0; l < n_lambda; ++l) {
            const std::size_t idx = t * n_lambda + l;
            CvPoint& pt = res.curve[idx];
            pt.lambda = lambda_grid[static_cast<Index>(l)];
            pt.theta = theta_values[t];
            double sum = 0.0;
            for (const auto& fold : mse) {
                if (fold[idx]) {
                    sum += *fold[idx];
                    ++pt.folds_ok;
                } else {
                    ++res.failed_fits;
                }
            }
            if (pt.folds_ok == 0) {
                pt.mean_mse = pt.std_mse = std::numeric_limits<double>::quiet_NaN();
                continue;
            }
            pt.mean_mse = sum / pt.folds_ok;
            double ss = 0.0;
            for (const auto& fold : mse) {
                if (fold[idx]) ss += (*fold[idx] - pt.mean_mse) * (*fold[idx] - pt.mean_mse);
            }
            pt.std_mse = pt.folds_ok > 1 ? std::sqrt(ss / (pt.folds_ok - 1)) : 0.0;

            const CvPoint& cur = res.curve[res.best_index];
            const bool better = !any || pt.mean_mse < cur.mean_mse ||
                                (pt.mean_mse == cur.mean_mse &&
                                 (pt.lambda > cur.lambda || (pt.lambda == cur.lambda && pt.theta > cur.theta)));
            if (better) res.best_index = idx;
            any = true;
        }
    }
    if (!any) throw Error(ErrorKind::AllGridPointsFailed, "every cross-validation grid point failed");
    res.best_lambda = res.curve[res.best_index].lambda;
    res.best_theta = res.curve[res.best_index].theta;
    return res;
}

} // namespace sppcso
