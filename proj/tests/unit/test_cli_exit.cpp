// Runs the command-line binary end to end and checks exit codes and outputs.

#include "json.hpp"

#include <gtest/gtest.h>

#include <sys/wait.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>

namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string err;
};

class CliRun : public ::testing::Test {
protected:
    void SetUp() override
    {
        dir_ = fs::temp_directory_path() /
               ("contagion_cli_" + std::string(::testing::UnitTest::GetInstance()->current_test_info()->name()));
        fs::remove_all(dir_);
        fs::create_directories(dir_);
    }
    void TearDown() override { fs::remove_all(dir_); }

    std::string write_config(const std::string& text)
    {
        const auto path = dir_ / "config.json";
        std::ofstream(path) << text;
        return path.string();
    }

    CliResult run(const std::string& args)
    {
        const auto err = dir_ / "stderr.txt";
        const std::string cmd = std::string(CONTAGION_CLI_PATH) + " " + args + " --output " +
                                (dir_ / "out").string() + " 2> " + err.string() + " > /dev/null";
        const int status = std::system(cmd.c_str());
        std::ifstream in(err);
        std::stringstream ss;
        ss << in.rdbuf();
        return {WIFEXITED(status) ? WEXITSTATUS(status) : -1, ss.str()};
    }

    std::string read_output(const std::string& name)
    {
        std::ifstream in(dir_ / "out" / name);
        std::stringstream ss;
        ss << in.rdbuf();
        return ss.str();
    }

    fs::path dir_;
};

}  // namespace

TEST_F(CliRun, PriceWritesCsvWithProvenance)
{
    const auto cfg = write_config(R"({"base_case": true})");
    const auto r = run("price --config " + cfg);
    ASSERT_EQ(r.code, 0) << r.err;
    const auto csv = read_output("price.csv");
    EXPECT_EQ(csv.rfind("# contagion ", 0), 0u);
    EXPECT_NE(csv.find("\"n_firms\":50"), std::string::npos);
    EXPECT_NE(csv.find("\nmode,tranche_attach,tranche_detach,T_years,spread_table_units"), std::string::npos);
    EXPECT_NE(csv.find("\ndynamic,0,0.07,3,"), std::string::npos) << csv;
}

TEST_F(CliRun, ModeFlagSelectsComparisonModel)
{
    const auto cfg = write_config(R"({"base_case": true})");
    ASSERT_EQ(run("price --mode poisson --config " + cfg).code, 0);
    EXPECT_NE(read_output("price.csv").find("\npoisson,0,0.07,3,"), std::string::npos);
}

TEST_F(CliRun, ConfigErrorsExitTwo)
{
    EXPECT_EQ(run("price --config " + (dir_ / "missing.json").string()).code, 2);
    EXPECT_EQ(run("price").code, 2);
    EXPECT_EQ(run("price --mode gaussian --config " + write_config(R"({"base_case": true})")).code, 2);
    EXPECT_EQ(run("price --jobs 0 --config " + write_config(R"({"base_case": true})")).code, 2);

    const auto r = run("price --config " + write_config(R"({"base_case": true, "tranches": []})"));
    EXPECT_EQ(r.code, 2);
    const auto line = nlohmann::json::parse(r.err.substr(0, r.err.find('\n')));
    EXPECT_EQ(line["error"], "config");
    EXPECT_EQ(line["fields"][0]["field"], "tranches");

    EXPECT_EQ(run("price --config " + write_config("{not json")).code, 2);
}

TEST_F(CliRun, ValidateNeedsUsableSimulationSection)
{
    EXPECT_EQ(run("validate --config " + write_config(R"({"base_case": true})")).code, 2);
    EXPECT_EQ(run("validate --config " +
                  write_config(R"({"base_case": true, "simulation": {"n_paths": 0}})")).code,
              2);
}

TEST_F(CliRun, DeadTrancheExitsThree)
{
    // Every name defaults almost surely before the first coupon.
    const auto cfg = write_config(R"({
      "base_case": true,
      "model": {"n_firms": 10, "recovery": 0.0, "firm": {"d": 1.0, "ell": 1.0},
                "idio":   {"lambda0": 60, "delta": 2, "eta": 1.5, "sigma": 0.4, "beta": 1.5},
                "common": {"lambda0": 0, "delta": 2, "eta": 0, "sigma": 0, "beta": 1.5},
                "r": 0.03, "horizon": 1}
    })");
    const auto r = run("price --config " + cfg);
    EXPECT_EQ(r.code, 3) << r.err;
    EXPECT_NE(r.err.find("\"numerical\""), std::string::npos);
}

TEST_F(CliRun, DistWritesBothDistributions)
{
    ASSERT_EQ(run("dist --config " + write_config(R"({"base_case": true})")).code, 0);
    EXPECT_NE(read_output("dist_events.csv").find("\nn,probability\n0,"), std::string::npos);
    EXPECT_NE(read_output("dist_defaults.csv").find("\nj,probability,loss_fraction\n0,"), std::string::npos);
}

TEST_F(CliRun, SimulateIsReproducible)
{
    const auto cfg = write_config(
        R"({"base_case": true, "simulation": {"n_paths": 500, "seed": 3}})");
    ASSERT_EQ(run("simulate --config " + cfg).code, 0);
    const auto first = read_output("simulate_counts.csv");
    ASSERT_EQ(run("simulate --jobs 2 --config " + cfg).code, 0);
    EXPECT_EQ(read_output("simulate_counts.csv"), first);
    ASSERT_EQ(run("simulate --seed 4 --config " + cfg).code, 0);
    EXPECT_NE(read_output("simulate_counts.csv"), first);
}
