#include <gtest/gtest.h>

#include <nlohmann/json.hpp>

#include <algorithm>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <vector>

namespace fs = std::filesystem;

namespace {

struct CliRun
{
    int code = -1;
    std::string err;
};

class CliTest : public ::testing::Test
{
protected:
    void SetUp() override
    {
        const auto* info = ::testing::UnitTest::GetInstance()->current_test_info();
        dir_ = fs::temp_directory_path() / (std::string("sppcso_cli_") + info->name());
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }

    void TearDown() override { fs::remove_all(dir_); }

    CliRun run(const std::string& args) const
    {
        const fs::path err = dir_ / "stderr.txt";
        const std::string cmd = "cd '" + dir_.string() + "' && '" + std::string(SPPCSO_CLI_PATH) + "' " + args +
                                " > /dev/null 2> '" + err.string() + "'";
        const int status = std::system(cmd.c_str());
        CliRun r;
        r.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
        r.err = read(err);
        return r;
    }

    std::string read(const fs::path& rel) const
    {
        std::ifstream in(rel.is_absolute() ? rel : dir_ / rel, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    std::vector<std::string> lines(const fs::path& rel) const
    {
        std::vector<std::string> out;
        std::istringstream in(read(rel));
        for (std::string line; std::getline(in, line);) out.push_back(line);
        return out;
    }

    void simulate(int n = 50, int p = 30) const
    {
        ASSERT_EQ(run("--out-dir sim --seed 3 simulate --n " + std::to_string(n) + " --p " + std::to_string(p) +
                      " --sigma 0.5")
                      .code,
                  0);
    }

    fs::path dir_;
};

std::vector<std::string> split(const std::string& line)
{
    std::vector<std::string> cells;
    std::istringstream in(line);
    for (std::string c; std::getline(in, c, ',');) cells.push_back(c);
    return cells;
}

} // namespace

TEST_F(CliTest, SimulateWritesDataAndManifest)
{
    simulate();
    EXPECT_EQ(lines("sim/X.csv").size(), 51u);
    EXPECT_EQ(lines("sim/y.csv").size(), 51u);
    EXPECT_EQ(lines("sim/beta.csv").size(), 31u);
    const auto manifest = nlohmann::json::parse(read("sim/manifest.json"));
    EXPECT_EQ(manifest["tool"], "sppcso");
    EXPECT_EQ(manifest["version"], SPPCSO_VERSION);
    EXPECT_EQ(manifest["seed"], 3);
    EXPECT_EQ(manifest["subcommand"], "simulate");
}

TEST_F(CliTest, FitAboveLambdaMaxIsAllZero)
{
    simulate();
    ASSERT_EQ(run("--out-dir f fit --x sim/X.csv --y sim/y.csv --lambda 1e6").code, 0);
    const auto rows = lines("f/coefficients.csv");
    ASSERT_EQ(rows.size(), 31u);
    EXPECT_EQ(rows[0], "index,value,raw_value");
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_EQ(split(rows[i])[1], "0") << rows[i];
    const auto summary = nlohmann::json::parse(read("f/summary.json"));
    EXPECT_EQ(summary["nnz"], 0);

    ASSERT_EQ(run("--out-dir s fit --x sim/X.csv --y sim/y.csv --lambda 1e6 --method sppcso --theta 0.5").code, 0);
    EXPECT_TRUE(nlohmann::json::parse(read("s/summary.json"))["reduced_to_lasso"].get<bool>());
}

TEST_F(CliTest, SppcsoWithoutThetaIsUsageError)
{
    simulate();
    const CliRun r = run("--out-dir f fit --x sim/X.csv --y sim/y.csv --lambda 0.1 --method sppcso");
    EXPECT_EQ(r.code, 2);
    const auto err = nlohmann::json::parse(r.err);
    EXPECT_EQ(err["error"]["kind"], "Usage");
    EXPECT_NE(err["error"]["message"].get<std::string>().find("--theta"), std::string::npos);
}

TEST_F(CliTest, RerunsAreByteIdentical)
{
    simulate();
    const std::string args = "cv --x sim/X.csv --y sim/y.csv --method sppcso --n-lambda 5 --thetas 0.3,0.6 --folds 3";
    ASSERT_EQ(run("--out-dir a --threads 1 " + args).code, 0);
    ASSERT_EQ(run("--out-dir b --threads 3 " + args).code, 0);
    EXPECT_EQ(read("a/cv_curve.csv"), read("b/cv_curve.csv"));
    EXPECT_EQ(read("a/cv_best.json"), read("b/cv_best.json"));
}

TEST_F(CliTest, CvSingleGridPointAndCurveSize)
{
    simulate();
    ASSERT_EQ(run("--out-dir one cv --x sim/X.csv --y sim/y.csv --method sppcso --lambdas 0.2 --thetas 0.4").code, 0);
    EXPECT_EQ(lines("one/cv_curve.csv").size(), 2u);
    const auto best = nlohmann::json::parse(read("one/cv_best.json"));
    EXPECT_EQ(best["best_lambda"], 0.2);
    EXPECT_EQ(best["best_theta"], 0.4);

    ASSERT_EQ(run("--out-dir grid cv --x sim/X.csv --y sim/y.csv --method sppcso --n-lambda 4 --thetas 0.2,0.5,0.8 "
                  "--refit")
                  .code,
              0);
    EXPECT_EQ(lines("grid/cv_curve.csv").size(), 1u + 4u * 3u);
    EXPECT_EQ(lines("grid/cv_curve.csv")[0], "lambda,theta,mean_mse,std_mse");
    EXPECT_TRUE(fs::exists(dir_ / "grid/coefficients.csv"));

    ASSERT_EQ(run("--out-dir lasso cv --x sim/X.csv --y sim/y.csv --n-lambda 4").code, 0);
    EXPECT_EQ(lines("lasso/cv_curve.csv").size(), 5u);
    EXPECT_TRUE(nlohmann::json::parse(read("lasso/cv_best.json"))["best_theta"].is_null());
}

TEST_F(CliTest, PathIsSortedAndStartsEmpty)
{
    simulate();
    ASSERT_EQ(run("--out-dir p path --x sim/X.csv --y sim/y.csv --n-lambda 6").code, 0);
    const auto rows = lines("p/path.csv");
    ASSERT_GT(rows.size(), 1u);
    EXPECT_EQ(rows[0], "lambda,index,value");
    double prev_lambda = 1e300;
    int prev_index = -1;
    for (std::size_t i = 1; i < rows.size(); ++i) {
        const auto c = split(rows[i]);
        const double l = std::stod(c[0]);
        const int j = std::stoi(c[1]);
        EXPECT_NE(std::stod(c[2]), 0.0);
        EXPECT_LE(l, prev_lambda);
        if (l == prev_lambda) EXPECT_GT(j, prev_index);
        prev_lambda = l;
        prev_index = j;
    }
    // The largest grid value is lambda_max, where the model is empty.
    ASSERT_EQ(run("--out-dir f fit --x sim/X.csv --y sim/y.csv --lambda 1").code, 0);
    const double top = nlohmann::json::parse(read("f/summary.json"))["lambda_max"];
    for (std::size_t i = 1; i < rows.size(); ++i) EXPECT_LT(std::stod(split(rows[i])[0]), top);
}

TEST_F(CliTest, BenchmarkRows)
{
    ASSERT_EQ(run("--out-dir b1 benchmark --methods lasso --n 40 --p 30 --sigmas 1 --reps 1 --n-lambda 6 --folds 3")
                  .code,
              0);
    const auto one = lines("b1/benchmark.csv");
    ASSERT_EQ(one.size(), 2u);
    EXPECT_EQ(split(one[1])[3], "0");
    EXPECT_TRUE(fs::exists(dir_ / "b1/benchmark.json"));
    EXPECT_TRUE(fs::exists(dir_ / "b1/repetitions.csv"));

    ASSERT_EQ(run("--out-dir b3 benchmark --methods lasso --n 40 --p 30 --reps 1 --n-lambda 6 --folds 3").code, 0);
    EXPECT_EQ(lines("b3/benchmark.csv").size(), 4u);

    const CliRun bad = run("--out-dir bx benchmark --methods lasso,ridge --reps 1");
    EXPECT_EQ(bad.code, 2);
    EXPECT_NE(bad.err.find("ridge"), std::string::npos);
}

TEST_F(CliTest, GenesUnknownMethodListsValidNames)
{
    std::ofstream(dir_ / "expr.csv") << "id,a,b\ns1,1,2\ns2,3,4\n";
    const CliRun r = run("--out-dir g genes --expression expr.csv --target a --methods lasso,magic");
    EXPECT_EQ(r.code, 2);
    for (const char* name : {"lasso", "enet", "mcp", "scad", "mnet", "sppcso"}) {
        EXPECT_NE(r.err.find(name), std::string::npos) << name;
    }
}

TEST_F(CliTest, GenesPipelineOutputs)
{
    {
        std::ofstream out(dir_ / "expr.tsv");
        out << "sample";
        for (int j = 0; j < 20; ++j) out << "\tg" << j;
        out << '\n';
        unsigned state = 7;
        auto next = [&] {
            state = state * 1103515245u + 12345u;
            return 10.0 + 90.0 * ((state >> 8) & 0xffff) / 65535.0;
        };
        for (int i = 0; i < 30; ++i) {
            out << 's' << i;
            std::vector<double> row(20);
            for (double& v : row) v = next();
            row[0] = 0.5 * row[1] + 0.5 * row[2];
            for (double v : row) out << '\t' << v;
            out << '\n';
        }
    }
    const CliRun r = run("--out-dir g genes --expression expr.tsv --target g0 --reps 2 --n-train 15 --top-k 10 "
                      "--n-lambda 6 --folds 3");
    ASSERT_EQ(r.code, 0) << r.err;
    const auto summary = lines("g/genes_summary.csv");
    ASSERT_EQ(summary.size(), 3u);
    EXPECT_EQ(summary[0], "method,mape_train,mape_test,nnz");
    EXPECT_EQ(lines("g/genes_repetitions.csv").size(), 5u);
    const auto probes = lines("g/genes_probes.txt");
    EXPECT_LE(probes.size(), 10u);
    EXPECT_EQ(std::count(probes.begin(), probes.end(), "g0"), 0);
}

TEST_F(CliTest, ManifestReproducesRun)
{
    simulate();
    ASSERT_EQ(run("--out-dir a --seed 9 cv --x sim/X.csv --y sim/y.csv --method sppcso --n-lambda 5 --thetas 0.3,0.7 "
                  "--folds 4 --refit")
                  .code,
              0);
    ASSERT_EQ(run("--config a/manifest.toml --out-dir b").code, 0);
    EXPECT_EQ(read("a/cv_curve.csv"), read("b/cv_curve.csv"));
    EXPECT_EQ(read("a/coefficients.csv"), read("b/coefficients.csv"));
    const auto manifest = nlohmann::json::parse(read("b/manifest.json"));
    EXPECT_EQ(manifest["subcommand"], "cv");
    EXPECT_EQ(manifest["seed"], 9);
}

TEST_F(CliTest, ExitCodes)
{
    EXPECT_EQ(run("").code, 2);
    EXPECT_EQ(run("nonsense").code, 2);
    EXPECT_EQ(run("fit --x missing.csv --y missing.csv --lambda 1").code, 1);
    EXPECT_EQ(run("--help").code, 0);
    const CliRun r = run("fit --x missing.csv --y missing.csv --lambda 1");
    EXPECT_EQ(nlohmann::json::parse(r.err)["error"]["kind"], "Io");
}
