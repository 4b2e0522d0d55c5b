#include <sppcso/error.hpp>
#include <sppcso/estimator.hpp>
#include <sppcso/genes.hpp>
#include <sppcso/io.hpp>
#include <sppcso/model_selection.hpp>
#include <sppcso/parallel.hpp>
#include <sppcso/sim_bench.hpp>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

namespace fs = std::filesystem;
using nlohmann::json;
using namespace sppcso;

namespace {

struct Common
{
    std::uint64_t seed = 1;
    int threads = 0;
    std::string out_dir = "sppcso_out";
};

struct SolverFlags
{
    std::string method = "lasso";
    double gamma = 0.0;
    double alpha = default_mixing;
    double tol = 1e-4;
    int max_iter = 10000;
    std::string eigen_scale = "gram";

    MethodConfig config() const
    {
        MethodConfig c;
        c.method = parse_method(method);
        c.gamma = gamma;
        c.alpha = alpha;
        c.tol = tol;
        c.max_iter = max_iter;
        c.scale = parse_eigen_scale(eigen_scale);
        return c;
    }
};

struct DataFlags
{
    std::string x_path;
    std::string y_path;
};

struct GridFlags
{
    std::vector<double> lambdas;
    int n_lambda = 50;
    double lambda_min_ratio = 0.01;
    std::vector<double> thetas = theta_grid();
};

void add_solver_flags(CLI::App* sub, SolverFlags& f)
{
    sub->add_option("--method", f.method, "lasso | enet | mcp | scad | mnet | sppcso")->capture_default_str();
    sub->add_option("--gamma", f.gamma, "concavity for mcp/scad/mnet (0 = family default)")->capture_default_str();
    sub->add_option("--alpha", f.alpha, "l1 mixing weight for enet/mnet")->capture_default_str();
    sub->add_option("--tol", f.tol, "coordinate descent tolerance")->capture_default_str();
    sub->add_option("--max-iter", f.max_iter, "maximum coordinate descent sweeps")->capture_default_str();
    sub->add_option("--eigen-scale", f.eigen_scale, "gram | per_observation")->capture_default_str();
}

void add_data_flags(CLI::App* sub, DataFlags& f)
{
    sub->add_option("--x", f.x_path, "design matrix file (rows = observations)")->required();
    sub->add_option("--y", f.y_path, "response file (one value per row)")->required();
}

void add_grid_flags(CLI::App* sub, GridFlags& f)
{
    sub->add_option("--lambdas", f.lambdas, "explicit lambda grid (comma separated)")->delimiter(',');
    sub->add_option("--n-lambda", f.n_lambda, "size of the default lambda grid")->capture_default_str();
    sub->add_option("--lambda-min-ratio", f.lambda_min_ratio, "smallest lambda as a fraction of lambda_max")
        ->capture_default_str();
    sub->add_option("--thetas", f.thetas, "theta grid for sppcso")->delimiter(',')->capture_default_str();
}

Dataset load_data(const DataFlags& f)
{
    const io::NumericTable X = io::read_table(f.x_path);
    const Vector y = io::read_vector(f.y_path);
    if (X.values.rows() != y.size()) {
        throw Error(ErrorKind::DimensionMismatch, f.x_path + " has " + std::to_string(X.values.rows()) + " rows but " +
                                                      f.y_path + " has " + std::to_string(y.size()) + " values");
    }
    return standardize(Dataset::raw(X.values, y));
}

Vector lambda_grid(const Dataset& data, const MethodConfig& cfg, const GridFlags& g)
{
    if (!g.lambdas.empty()) return Eigen::Map<const Vector>(g.lambdas.data(), static_cast<Index>(g.lambdas.size()));
    return default_lambda_grid(data, cfg, g.n_lambda, g.lambda_min_ratio);
}

json fit_json(const FitResult& fit)
{
    return {{"objective", fit.objective},
            {"iterations", fit.iterations},
            {"converged", fit.converged},
            {"nnz", nnz(fit.beta)},
            {"reduced_to_lasso", fit.reduced_to_lasso},
            {"warnings", fit.warnings}};
}

std::string coefficients_csv(const Dataset& data, const Vector& beta)
{
    const Vector raw = coefficients_to_raw(data, beta);
    std::string out = "index,value,raw_value\n";
    for (Index j = 0; j < beta.size(); ++j) {
        out += std::to_string(j) + ',' + io::format_double(beta[j]) + ',' + io::format_double(raw[j]) + '\n';
    }
    return out;
}

// A theta is required exactly when the method is sppcso.
void require_theta(const MethodConfig& cfg, const CLI::Option* theta_opt)
{
    if (cfg.uses_theta() && theta_opt->count() == 0) {
        throw Error(ErrorKind::Usage, "method sppcso requires --theta (required flags: --x, --y, --lambda, --theta)");
    }
}

json theta_json(double theta)
{
    return std::isnan(theta) ? json(nullptr) : json(theta);
}

} // namespace

int main(int argc, char** argv)
{
    CLI::App app{"Penalized regression with single-parametric principal-component selection"};
    app.set_version_flag("--version", SPPCSO_VERSION);
    app.set_config("--config", "", "TOML config file; command-line flags take precedence");
    app.fallthrough();
    app.require_subcommand(1);

    Common common;
    app.add_option("--seed", common.seed, "master random seed")->capture_default_str();
    app.add_option("--threads", common.threads, "worker threads (0 = all cores)")
        ->envname("SPPCSO_THREADS")
        ->capture_default_str();
    app.add_option("--out-dir", common.out_dir, "output directory")->capture_default_str();

    // fit
    auto* fit_cmd = app.add_subcommand("fit", "fit one (lambda, theta) point");
    fit_cmd->configurable();
    DataFlags fit_data;
    SolverFlags fit_solver;
    double fit_lambda = 0.0;
    double fit_theta = 0.5;
    add_data_flags(fit_cmd, fit_data);
    add_solver_flags(fit_cmd, fit_solver);
    fit_cmd->add_option("--lambda", fit_lambda, "penalty level")->required();
    auto* fit_theta_opt = fit_cmd->add_option("--theta", fit_theta, "sppcso shrinkage parameter in (0, 1)");

    // cv
    auto* cv_cmd = app.add_subcommand("cv", "k-fold cross-validation over the lambda x theta grid");
    cv_cmd->configurable();
    DataFlags cv_data;
    SolverFlags cv_solver;
    GridFlags cv_grid;
    int cv_folds = 5;
    bool cv_refit = false;
    add_data_flags(cv_cmd, cv_data);
    add_solver_flags(cv_cmd, cv_solver);
    add_grid_flags(cv_cmd, cv_grid);
    cv_cmd->add_option("--folds", cv_folds, "number of folds")->capture_default_str();
    cv_cmd->add_flag("--refit", cv_refit, "refit on all data at the selected point");

    // path
    auto* path_cmd = app.add_subcommand("path", "warm-started solution path over lambda");
    path_cmd->configurable();
    DataFlags path_data;
    SolverFlags path_solver;
    GridFlags path_grid;
    double path_theta = 0.5;
    add_data_flags(path_cmd, path_data);
    add_solver_flags(path_cmd, path_solver);
    add_grid_flags(path_cmd, path_grid);
    auto* path_theta_opt = path_cmd->add_option("--theta", path_theta, "sppcso shrinkage parameter in (0, 1)");

    // benchmark
    auto* bench_cmd = app.add_subcommand("benchmark", "Monte-Carlo comparison on simulated data");
    bench_cmd->configurable();
    std::vector<std::string> bench_methods{"lasso", "sppcso"};
    std::string bench_scenario = "example1";
    Index bench_n = 200;
    Index bench_p = 600;
    std::vector<double> bench_sigmas;
    std::vector<double> bench_rhos{0.5, 0.75, 0.95};
    std::string bench_background = "ar1";
    int bench_reps = 100;
    int bench_folds = 5;
    GridFlags bench_grid;
    SolverFlags bench_solver;
    bench_cmd->add_option("--methods", bench_methods, "methods to compare (oracle returns the true coefficients)")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--scenario", bench_scenario, "example1 | example2")->capture_default_str();
    bench_cmd->add_option("--n", bench_n, "observations")->capture_default_str();
    bench_cmd->add_option("--p", bench_p, "predictors")->capture_default_str();
    bench_cmd->add_option("--sigmas", bench_sigmas, "noise levels (default 0.5,1,2 for example1, 1 for example2)")
        ->delimiter(',');
    bench_cmd->add_option("--rhos", bench_rhos, "example2 background correlations")
        ->delimiter(',')
        ->capture_default_str();
    bench_cmd->add_option("--background", bench_background, "example2 background: ar1 | compound_symmetry")
        ->capture_default_str();
    bench_cmd->add_option("--reps", bench_reps, "repetitions per scenario")->capture_default_str();
    bench_cmd->add_option("--folds", bench_folds, "cross-validation folds")->capture_default_str();
    bench_cmd->add_option("--n-lambda", bench_grid.n_lambda, "lambda grid size")->capture_default_str();
    bench_cmd->add_option("--lambda-min-ratio", bench_grid.lambda_min_ratio, "smallest lambda / lambda_max")
        ->capture_default_str();
    bench_cmd->add_option("--thetas", bench_grid.thetas, "theta grid")->delimiter(',')->capture_default_str();
    bench_cmd->add_option("--eigen-scale", bench_solver.eigen_scale, "gram | per_observation")->capture_default_str();
    bench_cmd->add_option("--tol", bench_solver.tol, "coordinate descent tolerance")->capture_default_str();

    // genes
    auto* genes_cmd = app.add_subcommand("genes", "expression-data pipeline: filter, screen, train/test MAPE");
    genes_cmd->configurable();
    std::string genes_path;
    std::string genes_target;
    std::vector<std::string> genes_methods{"lasso", "sppcso"};
    int genes_reps = 100;
    Index genes_train = 60;
    Index genes_top = 3000;
    double genes_quantile = 0.25;
    double genes_fold_change = 2.0;
    bool genes_spread = false;
    std::string genes_split = "disjoint";
    std::string genes_delim;
    int genes_folds = 5;
    GridFlags genes_grid;
    SolverFlags genes_solver;
    genes_cmd->add_option("--expression", genes_path, "samples x probes table (plain or gzip)")->required();
    genes_cmd->add_option("--target", genes_target, "probe id used as the response")->required();
    genes_cmd->add_option("--methods", genes_methods, "methods to compare")->delimiter(',')->capture_default_str();
    genes_cmd->add_option("--reps", genes_reps, "random train/test splits")->capture_default_str();
    genes_cmd->add_option("--n-train", genes_train, "training samples per split")->capture_default_str();
    genes_cmd->add_option("--top-k", genes_top, "probes kept by variance screening")->capture_default_str();
    genes_cmd->add_option("--max-quantile", genes_quantile, "drop probes whose maximum is below this quantile")
        ->capture_default_str();
    genes_cmd->add_option("--fold-change", genes_fold_change, "minimum max/min ratio")->capture_default_str();
    genes_cmd->add_flag("--spread-fallback", genes_spread, "use max - min >= log2(fold change) when min <= 0");
    genes_cmd->add_option("--split", genes_split, "disjoint | resample")->capture_default_str();
    genes_cmd->add_option("--delimiter", genes_delim, "field delimiter (default: tab if present, else comma)");
    genes_cmd->add_option("--folds", genes_folds, "cross-validation folds")->capture_default_str();
    genes_cmd->add_option("--n-lambda", genes_grid.n_lambda, "lambda grid size")->capture_default_str();
    genes_cmd->add_option("--lambda-min-ratio", genes_grid.lambda_min_ratio, "smallest lambda / lambda_max")
        ->capture_default_str();
    genes_cmd->add_option("--thetas", genes_grid.thetas, "theta grid")->delimiter(',')->capture_default_str();
    genes_cmd->add_option("--eigen-scale", genes_solver.eigen_scale, "gram | per_observation")->capture_default_str();

    // simulate
    auto* sim_cmd = app.add_subcommand("simulate", "write one simulated dataset");
    sim_cmd->configurable();
    std::string sim_scenario = "example1";
    Index sim_n = 200;
    Index sim_p = 600;
    double sim_sigma = 1.0;
    double sim_rho = 0.5;
    std::string sim_background = "ar1";
    sim_cmd->add_option("--scenario", sim_scenario, "example1 | example2")->capture_default_str();
    sim_cmd->add_option("--n", sim_n, "observations")->capture_default_str();
    sim_cmd->add_option("--p", sim_p, "predictors")->capture_default_str();
    sim_cmd->add_option("--sigma", sim_sigma, "noise standard deviation")->capture_default_str();
    sim_cmd->add_option("--rho", sim_rho, "example2 background correlation")->capture_default_str();
    sim_cmd->add_option("--background", sim_background, "ar1 | compound_symmetry")->capture_default_str();

    auto fail = [](const std::string& kind, const std::string& message, int code) {
        std::cerr << json{{"error", {{"kind", kind}, {"message", message}}}}.dump() << '\n';
        return code;
    };

    try {
        app.parse(argc, argv);
    } catch (const CLI::CallForHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForAllHelp& e) {
        return app.exit(e);
    } catch (const CLI::CallForVersion& e) {
        return app.exit(e);
    } catch (const CLI::ParseError& e) {
        return fail("Usage", e.what(), 2);
    }

    CLI::App* active = app.get_subcommands().front();
    const std::string sub = active->get_name();
    const int threads = resolve_threads(common.threads);
    const fs::path out(common.out_dir);
    std::vector<std::string> outputs;
    json summary;

    auto write = [&](const std::string& name, const std::string& content) {
        io::write_text(out / name, content);
        outputs.push_back(name);
    };

    try {
        if (sub == "fit") {
            const MethodConfig cfg = fit_solver.config();
            require_theta(cfg, fit_theta_opt);
            const Dataset data = load_data(fit_data);
            const FitResult fit = fit_method(data, cfg, fit_lambda, cfg.uses_theta() ? fit_theta : 0.5);
            write("coefficients.csv", coefficients_csv(data, fit.beta));
            summary = fit_json(fit);
            summary["lambda"] = fit_lambda;
            summary["theta"] = cfg.uses_theta() ? json(fit_theta) : json(nullptr);
            summary["lambda_max"] = lambda_max(data.X, data.y);
            summary["intercept"] = raw_intercept(data, fit.beta);
            write("summary.json", summary.dump(2) + '\n');
        } else if (sub == "cv") {
            const MethodConfig cfg = cv_solver.config();
            const Dataset data = load_data(cv_data);
            const Vector grid = lambda_grid(data, cfg, cv_grid);
            const CVResult res = cross_validate(data, cfg, grid, cv_grid.thetas, cv_folds, common.seed, threads);
            std::string curve = "lambda,theta,mean_mse,std_mse\n";
            for (const auto& pt : res.curve) {
                curve += io::format_double(pt.lambda) + ',' + io::format_double(pt.theta) + ',' +
                         io::format_double(pt.mean_mse) + ',' + io::format_double(pt.std_mse) + '\n';
            }
            write("cv_curve.csv", curve);
            summary = {{"best_lambda", res.best_lambda},
                       {"best_theta", theta_json(res.best_theta)},
                       {"best_mean_mse", res.curve[res.best_index].mean_mse},
                       {"best_std_mse", res.curve[res.best_index].std_mse},
                       {"grid_points", res.curve.size()},
                       {"failed_fits", res.failed_fits}};
            if (cv_refit) {
                const double theta = cfg.uses_theta() ? res.best_theta : 0.5;
                const FitResult fit = fit_method(data, cfg, res.best_lambda, theta);
                write("coefficients.csv", coefficients_csv(data, fit.beta));
                summary["refit"] = fit_json(fit);
                summary["refit"]["intercept"] = raw_intercept(data, fit.beta);
                if (cfg.uses_theta() && !fit.reduced_to_lasso) {
                    const FitResult stage1 =
                        cd_fit(data.X, data.y, PenaltySpec::lasso(res.best_lambda), Vector::Zero(data.p()),
                               {cfg.tol, cfg.max_iter, 0.0});
                    const SppcsoPenalty pen = build_penalty(data, stage1.support, theta, cfg.scale);
                    const auto diag = noise_condition(pen, fit.beta, res.best_lambda, static_cast<double>(data.n()));
                    summary["noise_condition"] = {
                        {"lhs", diag.lhs}, {"rhs", diag.rhs}, {"satisfied", diag.satisfied}};
                }
            }
            write("cv_best.json", summary.dump(2) + '\n');
        } else if (sub == "path") {
            const MethodConfig cfg = path_solver.config();
            require_theta(cfg, path_theta_opt);
            if (cfg.uses_theta()) check_theta(path_theta);
            const Dataset data = load_data(path_data);
            const Vector grid = lambda_grid(data, cfg, path_grid);
            const auto fits = fit_grid(data, cfg, grid, {path_theta});
            std::vector<Index> order(static_cast<std::size_t>(grid.size()));
            for (std::size_t i = 0; i < order.size(); ++i) order[i] = static_cast<Index>(i);
            std::stable_sort(order.begin(), order.end(), [&](Index a, Index b) { return grid[a] > grid[b]; });
            std::string csv = "lambda,index,value\n";
            std::size_t rows = 0;
            for (Index l : order) {
                const FitResult& f = fits.front()[static_cast<std::size_t>(l)];
                for (Index j : f.support) {
                    csv += io::format_double(grid[l]) + ',' + std::to_string(j) + ',' + io::format_double(f.beta[j]) +
                           '\n';
                    ++rows;
                }
            }
            write("path.csv", csv);
            summary = {{"lambdas", grid.size()}, {"rows", rows}};
        } else if (sub == "benchmark") {
            std::vector<BenchmarkMethod> methods;
            for (const auto& m : bench_methods) methods.push_back(BenchmarkMethod::from_name(m));
            const EigenScale scale = parse_eigen_scale(bench_solver.eigen_scale);
            for (auto& m : methods) {
                m.config.scale = scale;
                m.config.tol = bench_solver.tol;
            }
            const Scenario kind = parse_scenario(bench_scenario);
            std::vector<double> sigmas = bench_sigmas;
            if (sigmas.empty()) sigmas = kind == Scenario::example1 ? std::vector<double>{0.5, 1.0, 2.0} : std::vector<double>{1.0};
            std::vector<ScenarioConfig> scenarios;
            const std::vector<double> rhos = kind == Scenario::example1 ? std::vector<double>{0.5} : bench_rhos;
            for (double rho : rhos) {
                for (double sigma : sigmas) {
                    ScenarioConfig sc;
                    sc.kind = kind;
                    sc.n = bench_n;
                    sc.p = bench_p;
                    sc.sigma = sigma;
                    sc.rho = rho;
                    if (bench_background == "compound_symmetry") {
                        sc.background = BackgroundCorrelation::compound_symmetry;
                    } else if (bench_background != "ar1") {
                        throw Error(ErrorKind::Usage, "unknown background '" + bench_background +
                                                          "' (ar1 | compound_symmetry)");
                    }
                    scenarios.push_back(sc);
                }
            }
            BenchmarkOptions opt;
            opt.n_reps = bench_reps;
            opt.master_seed = common.seed;
            opt.threads = threads;
            opt.folds = bench_folds;
            opt.n_lambda = bench_grid.n_lambda;
            opt.lambda_min_ratio = bench_grid.lambda_min_ratio;
            opt.thetas = bench_grid.thetas;
            const BenchmarkReport report = run_benchmark(methods, scenarios, opt);
            for (const auto& w : report.warnings) std::cerr << "warning: " << w << '\n';
            write("benchmark.csv", benchmark_csv(report));
            write("benchmark.json", benchmark_json(report).dump(2) + '\n');
            write("repetitions.csv", repetitions_csv(report));
            summary = {{"rows", report.rows.size()}, {"warnings", report.warnings}};
        } else if (sub == "genes") {
            GeneExperimentOptions opt;
            for (const auto& m : genes_methods) {
                MethodConfig cfg;
                cfg.method = parse_method(m);
                cfg.scale = parse_eigen_scale(genes_solver.eigen_scale);
                opt.methods.push_back(cfg);
            }
            if (genes_split != "disjoint" && genes_split != "resample") {
                throw Error(ErrorKind::Usage, "unknown split '" + genes_split + "' (disjoint | resample)");
            }
            if (genes_delim.size() > 1) throw Error(ErrorKind::Usage, "delimiter must be a single character");
            const char delim = genes_delim.empty() ? '\0' : genes_delim[0];
            const TargetedExpression loaded = load_expression(genes_path, genes_target, delim);
            std::vector<std::string> warnings;
            FilterOptions filter;
            filter.max_quantile = genes_quantile;
            filter.fold_change = genes_fold_change;
            filter.spread_fallback = genes_spread;
            const ExpressionMatrix filtered = filter_probes(loaded.predictors, filter, &warnings);
            const ExpressionMatrix screened = top_variance(filtered, std::min(genes_top, filtered.probes()));
            for (const auto& w : warnings) std::cerr << "warning: " << w << '\n';

            opt.reps = genes_reps;
            opt.n_train = genes_train;
            opt.seed = common.seed;
            opt.folds = genes_folds;
            opt.n_lambda = genes_grid.n_lambda;
            opt.lambda_min_ratio = genes_grid.lambda_min_ratio;
            opt.thetas = genes_grid.thetas;
            opt.threads = threads;
            opt.split = genes_split == "resample" ? SplitMode::resample : SplitMode::disjoint;
            const GeneReport report = run_gene_experiment(screened.values, loaded.target, opt);
            write("genes_summary.csv", gene_summary_csv(report));
            write("genes_repetitions.csv", gene_repetitions_csv(report));
            std::string probes;
            for (const auto& id : screened.probe_ids) probes += id + '\n';
            write("genes_probes.txt", probes);
            summary = {{"samples", screened.samples()},
                       {"probes_loaded", loaded.predictors.probes()},
                       {"probes_after_filter", filtered.probes()},
                       {"probes_screened", screened.probes()},
                       {"warnings", warnings}};
        } else if (sub == "simulate") {
            ScenarioConfig sc;
            sc.kind = parse_scenario(sim_scenario);
            sc.n = sim_n;
            sc.p = sim_p;
            sc.sigma = sim_sigma;
            sc.rho = sim_rho;
            if (sim_background == "compound_symmetry") {
                sc.background = BackgroundCorrelation::compound_symmetry;
            } else if (sim_background != "ar1") {
                throw Error(ErrorKind::Usage, "unknown background '" + sim_background + "' (ar1 | compound_symmetry)");
            }
            const SimulatedDataset sim = generate(sc, common.seed);
            std::vector<std::string> header;
            for (Index j = 0; j < sim.raw.p(); ++j) header.push_back("x" + std::to_string(j));
            write("X.csv", io::matrix_csv(sim.raw.X, header));
            write("y.csv", io::matrix_csv(sim.raw.y, {"y"}));
            std::string beta = "index,beta\n";
            for (Index j = 0; j < sim.beta_true.size(); ++j) {
                beta += std::to_string(j) + ',' + io::format_double(sim.beta_true[j]) + '\n';
            }
            write("beta.csv", beta);
            summary = {{"scenario", sc.label()}};
        }

        // The manifest doubles as a config file: `sppcso --config manifest.toml`
        // repeats the run.
        std::vector<std::string> other_prefixes;
        for (const auto* s : app.get_subcommands({})) {
            if (s->get_name() != sub) other_prefixes.push_back(s->get_name() + ".");
        }
        std::istringstream all(app.config_to_str(true, false));
        std::string global_part;
        std::string sub_part;
        std::string section;
        for (std::string line; std::getline(all, line);) {
            if (line.empty()) continue;
            if (line.front() == '[') {
                section = line.substr(1, line.find(']') - 1);
                continue;
            }
            const bool foreign = std::any_of(other_prefixes.begin(), other_prefixes.end(),
                                             [&](const std::string& pre) { return line.rfind(pre, 0) == 0; });
            // Unset options serialize as "" and would read back as a value.
            const bool unset = line.size() >= 3 && line.compare(line.size() - 3, 3, "=\"\"") == 0;
            if (foreign || unset) continue;
            if (section == sub) {
                sub_part += line + '\n';
            } else if (section.empty() && line.rfind("threads=", 0) != 0 && line.rfind("config=", 0) != 0) {
                global_part += line + '\n';
            }
        }
        const std::string manifest_toml =
            "# sppcso " + std::string(SPPCSO_VERSION) + "\n" + global_part + "[" + sub + "]\n" + sub_part;
        write("manifest.toml", manifest_toml);
        std::vector<std::string> args(argv + 1, argv + argc);
        const json manifest = {{"tool", "sppcso"},
                               {"version", SPPCSO_VERSION},
                               {"subcommand", sub},
                               {"seed", common.seed},
                               {"threads", threads},
                               {"arguments", args},
                               {"config", manifest_toml},
                               {"outputs", outputs},
                               {"summary", summary}};
        io::write_text(out / "manifest.json", manifest.dump(2) + '\n');
    } catch (const Error& e) {
        return fail(std::string(to_string(e.kind())), e.what(), e.kind() == ErrorKind::Usage ? 2 : 1);
    } catch (const std::exception& e) {
        return fail("Internal", e.what(), 1);
    }
    return 0;
}
