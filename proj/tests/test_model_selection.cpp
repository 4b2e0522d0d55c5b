#include <sppcso/error.hpp>
#include <sppcso/model_selection.hpp>
#include <sppcso/sim_bench.hpp>

#include <gtest/gtest.h>

#include <cmath>
#include <random>
#include <set>

using namespace sppcso;

namespace {

Dataset noise_data(Index n, Index p, std::uint64_t seed, bool signal)
{
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> normal;
    Matrix X(n, p);
    for (Index j = 0; j < p; ++j)
        for (Index i = 0; i < n; ++i) X(i, j) = normal(rng);
    Vector y(n);
    for (Index i = 0; i < n; ++i) y[i] = normal(rng);
    if (signal) y += 2.0 * X.col(0) - 1.5 * X.col(1);
    return standardize(Dataset::raw(X, y));
}

template <class F>
ErrorKind kind_of(F&& f)
{
    try {
        f();
    } catch (const Error& e) {
        return e.kind();
    }
    ADD_FAILURE() << "no error thrown";
    return ErrorKind::Usage;
}

} // namespace

TEST(KfoldSplit, EvenDivision)
{
    const auto folds = kfold_split(10, 5, 3);
    ASSERT_EQ(folds.size(), 5u);
    for (const auto& f : folds) EXPECT_EQ(f.size(), 2u);
}

TEST(KfoldSplit, RemainderDistribution)
{
    const auto folds = kfold_split(11, 5, 3);
    std::multiset<std::size_t> sizes;
    for (const auto& f : folds) sizes.insert(f.size());
    EXPECT_EQ(sizes, (std::multiset<std::size_t>{2, 2, 2, 2, 3}));
}

TEST(KfoldSplit, PartitionAndDeterminism)
{
    for (std::uint64_t seed : {0ull, 1ull, 99ull}) {
        const auto a = kfold_split(37, 4, seed);
        EXPECT_EQ(a, kfold_split(37, 4, seed));
        std::vector<int> seen(37, 0);
        for (const auto& f : a)
            for (Index i : f) ++seen[static_cast<std::size_t>(i)];
        for (int c : seen) EXPECT_EQ(c, 1);
    }
    EXPECT_NE(kfold_split(37, 4, 1), kfold_split(37, 4, 2));
}

TEST(KfoldSplit, BadFoldCounts)
{
    EXPECT_EQ(kind_of([] { kfold_split(10, 1, 0); }), ErrorKind::BadFoldCount);
    EXPECT_EQ(kind_of([] { kfold_split(3, 4, 0); }), ErrorKind::BadFoldCount);
}

TEST(ThetaGrid, NineIncreasingInteriorValues)
{
    const auto g = theta_grid();
    ASSERT_EQ(g.size(), 9u);
    for (std::size_t i = 0; i < g.size(); ++i) {
        EXPECT_GT(g[i], 0.0);
        EXPECT_LT(g[i], 1.0);
        if (i > 0) EXPECT_GT(g[i], g[i - 1]);
    }
    EXPECT_DOUBLE_EQ(g.front(), 0.1);
    EXPECT_DOUBLE_EQ(g.back(), 0.9);
}

TEST(ParseMethod, KnownAndUnknownNames)
{
    EXPECT_EQ(parse_method("sppcso"), Method::sppcso);
    EXPECT_EQ(parse_method("mnet"), Method::mnet);
    try {
        parse_method("ridge");
        FAIL();
    } catch (const Error& e) {
        EXPECT_EQ(e.kind(), ErrorKind::Usage);
        const std::string msg = e.what();
        for (const char* name : {"lasso", "enet", "mcp", "scad", "mnet", "sppcso"}) {
            EXPECT_NE(msg.find(name), std::string::npos) << name;
        }
    }
}

TEST(DefaultLambdaGrid, EnetGridStartsAtEmptyModel)
{
    const Dataset data = noise_data(40, 10, 5, true);
    MethodConfig cfg;
    cfg.method = Method::enet;
    cfg.alpha = 0.5;
    const Vector grid = default_lambda_grid(data, cfg, 10, 0.01);
    EXPECT_NEAR(grid[0], lambda_max(data.X, data.y) / 0.5, 1e-12);
    const FitResult fit = fit_method(data, cfg, grid[0], 0.5);
    EXPECT_TRUE(fit.beta.isZero(0.0));
}

TEST(FitGrid, MatchesIndependentFitsAtEachPoint)
{
    const Dataset data = noise_data(40, 15, 6, true);
    MethodConfig cfg;
    cfg.method = Method::sppcso;
    cfg.tol = 1e-10;
    const Vector grid = default_lambda_grid(data, cfg, 8, 0.05);
    const std::vector<double> thetas{0.2, 0.7};
    const auto fits = fit_grid(data, cfg, grid, thetas);
    ASSERT_EQ(fits.size(), 2u);
    for (std::size_t t = 0; t < thetas.size(); ++t) {
        for (Index l = 0; l < grid.size(); ++l) {
            const FitResult ref = fit_method(data, cfg, grid[l], thetas[t]);
            EXPECT_LE((fits[t][static_cast<std::size_t>(l)].beta - ref.beta).cwiseAbs().maxCoeff(), 1e-6);
        }
    }
}

TEST(CrossValidate, SingleGridPointIsBest)
{
    const Dataset data = noise_data(30, 8, 7, true);
    MethodConfig cfg;
    cfg.method = Method::sppcso;
    Vector grid(1);
    grid << 0.1;
    const CVResult res = cross_validate(data, cfg, grid, {0.4}, 5, 1);
    ASSERT_EQ(res.curve.size(), 1u);
    EXPECT_EQ(res.best_index, 0u);
    EXPECT_EQ(res.best_lambda, 0.1);
    EXPECT_EQ(res.best_theta, 0.4);
    EXPECT_EQ(res.curve[0].folds_ok, 5);
}

TEST(CrossValidate, CurveShapeAndMinimizer)
{
    const SimulatedDataset sim = gen_example1(60, 40, 0.5, 11);
    MethodConfig cfg;
    cfg.method = Method::sppcso;
    const Vector grid = default_lambda_grid(sim.data, cfg, 12, 0.01);
    const auto thetas = theta_grid();
    const CVResult res = cross_validate(sim.data, cfg, grid, thetas, 5, 3);
    ASSERT_EQ(res.curve.size(), 12u * thetas.size());
    std::size_t argmin = 0;
    for (std::size_t i = 0; i < res.curve.size(); ++i) {
        EXPECT_GE(res.curve[i].mean_mse, 0.0);
        EXPECT_GE(res.curve[i].std_mse, 0.0);
        EXPECT_EQ(res.curve[i].lambda, grid[static_cast<Index>(i % 12)]);
        EXPECT_EQ(res.curve[i].theta, thetas[i / 12]);
        if (res.curve[i].mean_mse < res.curve[argmin].mean_mse) argmin = i;
    }
    EXPECT_EQ(res.curve[res.best_index].mean_mse, res.curve[argmin].mean_mse);
    EXPECT_EQ(res.best_lambda, res.curve[res.best_index].lambda);
    EXPECT_EQ(res.best_theta, res.curve[res.best_index].theta);
}

TEST(CrossValidate, TiesPreferLargerLambdaThenLargerTheta)
{
    const Dataset data = noise_data(30, 5, 8, true);
    MethodConfig cfg;
    cfg.method = Method::sppcso;
    // Both values empty the model on every training fold, so all points tie.
    Vector grid(2);
    grid << 1e6, 2e6;
    const CVResult res = cross_validate(data, cfg, grid, {0.3, 0.8, 0.5}, 5, 2);
    EXPECT_EQ(res.best_lambda, 2e6);
    EXPECT_EQ(res.best_theta, 0.8);
}

TEST(CrossValidate, PureNoisePrefersLargeLambda)
{
    int hits = 0;
    const int trials = 50;
    for (int s = 0; s < trials; ++s) {
        const Dataset data = noise_data(50, 20, 1000 + static_cast<std::uint64_t>(s), false);
        MethodConfig cfg;
        const Vector grid = default_lambda_grid(data, cfg, 50, 0.01);
        const CVResult res = cross_validate(data, cfg, grid, {}, 5, static_cast<std::uint64_t>(s));
        if (res.best_index < 10) ++hits;
    }
    EXPECT_GE(hits, trials * 8 / 10) << hits;
}

TEST(CrossValidate, ReproducibleAcrossRunsAndThreadCounts)
{
    const Dataset data = noise_data(50, 30, 9, true);
    MethodConfig cfg;
    cfg.method = Method::sppcso;
    const Vector grid = default_lambda_grid(data, cfg, 10, 0.05);
    const auto a = cross_validate(data, cfg, grid, {0.3, 0.6}, 5, 4, 1);
    const auto b = cross_validate(data, cfg, grid, {0.3, 0.6}, 5, 4, 1);
    const auto c = cross_validate(data, cfg, grid, {0.3, 0.6}, 5, 4, 3);
    for (std::size_t i = 0; i < a.curve.size(); ++i) {
        EXPECT_EQ(a.curve[i].mean_mse, b.curve[i].mean_mse);
        EXPECT_EQ(a.curve[i].mean_mse, c.curve[i].mean_mse);
        EXPECT_EQ(a.curve[i].std_mse, c.curve[i].std_mse);
    }
    EXPECT_EQ(a.best_index, c.best_index);
}

TEST(CrossValidate, NonThetaMethodsReportNaNTheta)
{
    const Dataset data = noise_data(30, 6, 10, true);
    for (Method m : {Method::lasso, Method::enet, Method::mcp, Method::scad, Method::mnet}) {
        MethodConfig cfg;
        cfg.method = m;
        const Vector grid = default_lambda_grid(data, cfg, 5, 0.05);
        const CVResult res = cross_validate(data, cfg, grid, theta_grid(), 3, 1);
        EXPECT_EQ(res.curve.size(), 5u);
        EXPECT_TRUE(std::isnan(res.best_theta));
    }
}
