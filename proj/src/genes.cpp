#include <sppcso/genes.hpp>
#include <sppcso/error.hpp>
#include <sppcso/io.hpp>
#include <sppcso/parallel.hpp>
#include <sppcso/sim_bench.hpp>

#include <algorithm>
#include <charconv>
#include <cmath>
#include <iostream>
#include <numeric>
#include <random>
#include <set>
#include <sstream>

namespace sppcso {

namespace {

ExpressionMatrix keep_columns(const ExpressionMatrix& expr, const IndexSet& cols)
{
    ExpressionMatrix out;
    out.values = select_columns(expr.values, cols);
    out.sample_ids = expr.sample_ids;
    for (Index j : cols) out.probe_ids.push_back(expr.probe_ids[static_cast<std::size_t>(j)]);
    return out;
}

} // namespace

ExpressionMatrix parse_expression(std::istream& in, char delimiter)
{
    std::string line;
    std::size_t line_no = 0;
    ExpressionMatrix expr;
    std::vector<std::vector<double>> rows;
    bool have_header = false;

    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.find_first_not_of(" \t") == std::string::npos) continue;
        if (delimiter == '\0') delimiter = line.find('\t') != std::string::npos ? '\t' : ',';
        auto cells = io::split_line(line, delimiter);

        if (!have_header) {
            if (cells.size() < 2) throw Error(ErrorKind::MalformedFile, "line " + std::to_string(line_no) + ": no probes");
            expr.probe_ids.assign(cells.begin() + 1, cells.end());
            std::set<std::string> seen;
            for (const auto& id : expr.probe_ids) {
                if (!seen.insert(id).second) {
                    throw Error(ErrorKind::MalformedFile,
                                "line " + std::to_string(line_no) + ": duplicate probe id '" + id + "'");
                }
            }
            have_header = true;
            continue;
        }
        if (cells.size() != expr.probe_ids.size() + 1) {
            throw Error(ErrorKind::MalformedFile, "line " + std::to_string(line_no) + ": expected " +
                                                      std::to_string(expr.probe_ids.size() + 1) + " fields, found " +
                                                      std::to_string(cells.size()));
        }
        std::vector<double> row(expr.probe_ids.size());
        for (std::size_t c = 1; c < cells.size(); ++c) {
            const std::string& cell = cells[c];
            double v = 0.0;
            const char* first = cell.data();
            const char* last = cell.data() + cell.size();
            if (first != last && *first == '+') ++first;
            const auto res = std::from_chars(first, last, v);
            if (cell.empty() || res.ec != std::errc() || res.ptr != last || !std::isfinite(v)) {
                throw Error(ErrorKind::NonNumericValue, "row " + std::to_string(line_no) + ", column " +
                                                            std::to_string(c + 1) + ": '" + cell + "'");
            }
            row[c - 1] = v;
        }
        expr.sample_ids.push_back(cells[0]);
        rows.push_back(std::move(row));
    }
    if (!have_header || rows.empty()) throw Error(ErrorKind::MalformedFile, "no samples in expression file");

    expr.values.resize(static_cast<Index>(rows.size()), static_cast<Index>(expr.probe_ids.size()));
    for (std::size_t i = 0; i < rows.size(); ++i)
        for (std::size_t j = 0; j < rows[i].size(); ++j)
            expr.values(static_cast<Index>(i), static_cast<Index>(j)) = rows[i][j];
    return expr;
}

TargetedExpression split_target(const ExpressionMatrix& expr, const std::string& target_probe_id)
{
    const auto it = std::find(expr.probe_ids.begin(), expr.probe_ids.end(), target_probe_id);
    if (it == expr.probe_ids.end()) throw Error(ErrorKind::MissingTarget, "probe '" + target_probe_id + "' not found");
    const Index target_col = static_cast<Index>(it - expr.probe_ids.begin());
    IndexSet rest;
    for (Index j = 0; j < expr.probes(); ++j) {
        if (j != target_col) rest.push_back(j);
    }
    TargetedExpression out;
    out.predictors = keep_columns(expr, rest);
    out.target = expr.values.col(target_col);
    out.target_id = target_probe_id;
    return out;
}

TargetedExpression load_expression(const std::filesystem::path& path, const std::string& target_probe_id,
                                   char delimiter)
{
    std::istringstream in(io::read_file(path));
    return split_target(parse_expression(in, delimiter), target_probe_id);
}

double quantile_type7(std::vector<double> values, double q)
{
    if (values.empty()) throw Error(ErrorKind::EmptyData, "quantile of an empty set");
    std::sort(values.begin(), values.end());
    const double h = (static_cast<double>(values.size()) - 1.0) * q;
    const auto lo = static_cast<std::size_t>(std::floor(h));
    const std::size_t hi = std::min(lo + 1, values.size() - 1);
    return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

ExpressionMatrix filter_probes(const ExpressionMatrix& expr, const FilterOptions& options,
                               std::vector<std::string>* warnings)
{
    if (!(options.max_quantile > 0.0 && options.max_quantile < 1.0)) {
        throw Error(ErrorKind::Usage, "max_quantile must lie in (0, 1)");
    }
    if (!(options.fold_change >= 1.0)) throw Error(ErrorKind::Usage, "fold_change must be >= 1");

    const std::vector<double> all(expr.values.data(), expr.values.data() + expr.values.size());
    const double floor_value = quantile_type7(all, options.max_quantile);

    IndexSet kept;
    bool used_spread = false;
    for (Index j = 0; j < expr.probes(); ++j) {
        const double hi = expr.values.col(j).maxCoeff();
        const double lo = expr.values.col(j).minCoeff();
        if (hi < floor_value) continue;
        if (lo <= 0.0) {
            if (!options.spread_fallback) {
                throw Error(ErrorKind::NonpositiveValue, "probe '" + expr.probe_ids[static_cast<std::size_t>(j)] +
                                                             "' has minimum <= 0; fold change is undefined");
            }
            used_spread = true;
            if (hi - lo >= std::log2(options.fold_change)) kept.push_back(j);
            continue;
        }
        if (hi / lo >= options.fold_change) kept.push_back(j);
    }
    if (used_spread) {
        const std::string msg = "fold change computed as max - min >= log2(fold_change) for probes with values <= 0";
        if (warnings != nullptr) {
            warnings->push_back(msg);
        } else {
            std::cerr << "warning: " << msg << '\n';
        }
    }
    if (kept.empty()) throw Error(ErrorKind::EmptyAfterFilter, "no probe survived filtering");
    return keep_columns(expr, kept);
}

ExpressionMatrix top_variance(const ExpressionMatrix& expr, Index k)
{
    if (k < 0 || k > expr.probes()) {
        throw Error(ErrorKind::KTooLarge,
                    "k=" + std::to_string(k) + " exceeds probe count " + std::to_string(expr.probes()));
    }
    const Index n = expr.samples();
    std::vector<double> var(static_cast<std::size_t>(expr.probes()));
    for (Index j = 0; j < expr.probes(); ++j) {
        const double mean = expr.values.col(j).mean();
        var[static_cast<std::size_t>(j)] =
            n > 1 ? (expr.values.col(j).array() - mean).square().sum() / static_cast<double>(n - 1) : 0.0;
    }
    IndexSet order(var.size());
    std::iota(order.begin(), order.end(), Index{0});
    std::sort(order.begin(), order.end(), [&](Index a, Index b) {
        const auto ua = static_cast<std::size_t>(a);
        const auto ub = static_cast<std::size_t>(b);
        if (var[ua] != var[ub]) return var[ua] > var[ub];
        return expr.probe_ids[ua] < expr.probe_ids[ub];
    });
    order.resize(static_cast<std::size_t>(k));
    std::sort(order.begin(), order.end());
    return keep_columns(expr, order);
}

TrainTestSplit split_train_test(Index n, Index n_train, std::uint64_t seed, SplitMode mode)
{
    if (n_train < 1 || n_train >= n) {
        throw Error(ErrorKind::BadSplit, "need 1 <= n_train < n, got n_train=" + std::to_string(n_train) +
                                             " n=" + std::to_string(n));
    }
    std::mt19937_64 rng(seed);
    IndexSet perm(static_cast<std::size_t>(n));
    std::iota(perm.begin(), perm.end(), Index{0});
    std::shuffle(perm.begin(), perm.end(), rng);

    TrainTestSplit s;
    s.train.assign(perm.begin(), perm.begin() + n_train);
    if (mode == SplitMode::disjoint) {
        s.test.assign(perm.begin() + n_train, perm.end());
    } else {
        std::shuffle(perm.begin(), perm.end(), rng);
        s.test.assign(perm.begin(), perm.begin() + (n - n_train));
    }
    std::sort(s.train.begin(), s.train.end());
    std::sort(s.test.begin(), s.test.end());
    return s;
}

double mape(const Vector& y_hat, const Vector& y)
{
    if (y_hat.size() != y.size() || y.size() == 0) {
        throw Error(ErrorKind::DimensionMismatch, "mape needs equal, nonempty lengths");
    }
    return (y_hat - y).cwiseAbs().mean();
}

std::size_t nnz(const Vector& beta)
{
    return static_cast<std::size_t>((beta.array() != 0.0).count());
}

GeneReport run_gene_experiment(const Matrix& predictors, const Vector& target, const GeneExperimentOptions& options)
{
    if (predictors.rows() != target.size()) {
        throw Error(ErrorKind::DimensionMismatch, "predictor rows and target length differ");
    }
    if (options.reps < 1) throw Error(ErrorKind::BadSplit, "reps must be >= 1");
    const std::size_t n_methods = options.methods.size();
    const std::size_t reps = static_cast<std::size_t>(options.reps);
    std::vector<GeneRepRow> rows(reps * n_methods);

    parallel_for(reps, options.threads, [&](std::size_t rep) {
        const std::uint64_t seed = derive_seed(options.seed, rep);
        const TrainTestSplit split = split_train_test(target.size(), options.n_train, seed, options.split);
        const Matrix X_train = select_rows(predictors, split.train);
        const Vector y_train = select_rows(target, split.train);
        const Matrix X_test = select_rows(predictors, split.test);
        const Vector y_test = select_rows(target, split.test);
        const Dataset train = standardize(Dataset::raw(X_train, y_train));

        for (std::size_t m = 0; m < n_methods; ++m) {
            const MethodConfig& cfg = options.methods[m];
            const Vector grid = default_lambda_grid(train, cfg, options.n_lambda, options.lambda_min_ratio);
            // Folds are taken over the standardized training rows; cross_validate
            // re-standardizes within each fold.
            const CVResult cv =
                cross_validate(train, cfg, grid, options.thetas, options.folds, derive_seed(seed, 1), 1);
            const FitResult fit = fit_method(train, cfg, cv.best_lambda, cv.best_theta);

            GeneRepRow& row = rows[rep * n_methods + m];
            row.method = std::string(to_string(cfg.method));
            row.rep = static_cast<int>(rep);
            row.mape_train = mape(predict_raw(train, fit.beta, X_train), y_train);
            row.mape_test = mape(predict_raw(train, fit.beta, X_test), y_test);
            row.nnz = nnz(fit.beta);
            row.lambda = cv.best_lambda;
            row.theta = cv.best_theta;
        }
    });

    GeneReport report;
    report.repetitions = rows;
    for (std::size_t m = 0; m < n_methods; ++m) {
        GeneSummaryRow s;
        s.method = std::string(to_string(options.methods[m].method));
        for (std::size_t rep = 0; rep < reps; ++rep) {
            const GeneRepRow& r = rows[rep * n_methods + m];
            s.mape_train += r.mape_train;
            s.mape_test += r.mape_test;
            s.nnz += static_cast<double>(r.nnz);
        }
        s.mape_train /= static_cast<double>(reps);
        s.mape_test /= static_cast<double>(reps);
        s.nnz /= static_cast<double>(reps);
        report.summary.push_back(s);
    }
    return report;
}

std::string gene_summary_csv(const GeneReport& report)
{
    std::string out = "method,mape_train,mape_test,nnz\n";
    for (const auto& s : report.summary) {
        out += s.method + ',' + io::format_double(s.mape_train) + ',' + io::format_double(s.mape_test) + ',' +
               io::format_double(s.nnz) + '\n';
    }
    return out;
}

std::string gene_repetitions_csv(const GeneReport& report)
{
    std::string out = "method,rep,mape_train,mape_test,nnz,lambda,theta\n";
    for (const auto& r : report.repetitions) {
        out += r.method + ',' + std::to_string(r.rep) + ',' + io::format_double(r.mape_train) + ',' +
               io::format_double(r.mape_test) + ',' + std::to_string(r.nnz) + ',' + io::format_double(r.lambda) +
               ',' + io::format_double(r.theta) + '\n';
    }
    return out;
}

} // namespace sppcso
