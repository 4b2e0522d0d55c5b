#pragma once

#include <sppcso/linalg.hpp>
#include <sppcso/model_selection.hpp>

#include <cstdint>
#include <filesystem>
#include <istream>
#include <string>
#include <vector>

namespace sppcso {

/// samples x probes expression values with identifiers.
struct ExpressionMatrix
{
    Matrix values;
    std::vector<std::string> probe_ids;
    std::vector<std::string> sample_ids;

    Index probes() const { return values.cols(); }
    Index samples() const { return values.rows(); }
};

struct TargetedExpression
{
    ExpressionMatrix predictors;  // every probe except the target
    Vector target;
    std::string target_id;
};

/**
 * Parses a delimiter-separated expression table: the first row holds probe
 * ids (its first cell labels the sample column), every following row is a
 * sample id followed by one value per probe. '\0' auto-detects tab or comma.
 */
ExpressionMatrix parse_expression(std::istream& in, char delimiter = '\0');

/// Reads a (optionally gzip-compressed) file and splits off `target_probe_id`.
TargetedExpression load_expression(const std::filesystem::path& path, const std::string& target_probe_id,
                                   char delimiter = '\0');

/// Separates an already loaded matrix into predictors and target.
TargetedExpression split_target(const ExpressionMatrix& expr, const std::string& target_probe_id);

/// Type-7 (linear interpolation) sample quantile.
double quantile_type7(std::vector<double> values, double q);

struct FilterOptions
{
    double max_quantile = 0.25;
    double fold_change = 2.0;
    // When a probe's minimum is <= 0, compare max - min with log2(fold_change)
    // instead of failing.
    bool spread_fallback = false;
};

/**
 * Drops probes whose maximum is below the max_quantile quantile of all
 * values in the matrix, then keeps probes with max / min >= fold_change.
 * Survivors keep their original order.
 */
ExpressionMatrix filter_probes(const ExpressionMatrix& expr, const FilterOptions& options = {},
                               std::vector<std::string>* warnings = nullptr);

/// The k probes with the largest sample variance; ties go to the
/// lexicographically smaller probe id. Survivors keep their original order.
ExpressionMatrix top_variance(const ExpressionMatrix& expr, Index k);

enum class SplitMode { disjoint, resample };

struct TrainTestSplit
{
    IndexSet train;
    IndexSet test;
};

/// Random n_train / (n - n_train) split, both sorted. In resample mode the
/// test set is drawn from all n samples and may overlap the training set.
TrainTestSplit split_train_test(Index n, Index n_train, std::uint64_t seed, SplitMode mode = SplitMode::disjoint);

/// mean |y_hat - y|
double mape(const Vector& y_hat, const Vector& y);

std::size_t nnz(const Vector& beta);

struct GeneExperimentOptions
{
    std::vector<MethodConfig> methods;
    int reps = 100;
    Index n_train = 60;
    std::uint64_t seed = 1;
    int folds = 5;
    int n_lambda = 50;
    double lambda_min_ratio = 0.01;
    std::vector<double> thetas = theta_grid();
    int threads = 1;
    SplitMode split = SplitMode::disjoint;
};

struct GeneRepRow
{
    std::string method;
    int rep = 0;
    double mape_train = 0.0;
    double mape_test = 0.0;
    std::size_t nnz = 0;
    double lambda = 0.0;
    double theta = 0.0;
};

struct GeneSummaryRow
{
    std::string method;
    double mape_train = 0.0;
    double mape_test = 0.0;
    double nnz = 0.0;
};

struct GeneReport
{
    std::vector<GeneSummaryRow> summary;
    std::vector<GeneRepRow> repetitions;  // rep-major, methods in request order
};

/**
 * Repeated train/test evaluation. Each repetition splits the samples with a
 * seed derived from options.seed, standardizes the training part, tunes each
 * method by cross-validation on it, and scores raw-scale predictions by MAPE.
 */
GeneReport run_gene_experiment(const Matrix& predictors, const Vector& target, const GeneExperimentOptions& options);

std::string gene_summary_csv(const GeneReport& report);
std::string gene_repetitions_csv(const GeneReport& report);

} // namespace sppcso
