#include <gtest/gtest.h>

#include <filesystem>
#include <fstream>

#include "lerw/config.hpp"
#include "lerw/erasure.hpp"

using namespace lerw;

namespace {

std::string message_of(const std::vector<std::string>& args) {
    try {
        parse_config(args);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string json_message(std::string_view text) {
    try {
        parse_config_json(text);
    } catch (const ConfigError& e) {
        return e.what();
    }
    return "";
}

std::string temp_config(const std::string& name, const std::string& text) {
    const auto path = std::filesystem::temp_directory_path() / name;
    std::ofstream(path) << text;
    return path.string();
}

}  // namespace

TEST(Config, FlagsOnly) {
    const ExperimentConfig c =
        parse_config({"clt", "--N", "16384", "--alpha", "0.4", "--replicas", "10000", "--seed", "42"});
    EXPECT_EQ(c.experiment, Experiment::clt);
    EXPECT_EQ(c.N, 16384);
    EXPECT_EQ(c.alpha, 0.4);
    EXPECT_EQ(c.replicas, 10000);
    EXPECT_EQ(c.master_seed, 42u);
    EXPECT_EQ(c.dim, 3);
    EXPECT_EQ(c.window(), 48);
    EXPECT_EQ(c.margin_steps(), 48);
}

TEST(Config, NegativeAlphaNamesKey) {
    const std::string m = message_of({"clt", "--alpha", "-1"});
    EXPECT_NE(m.find("alpha"), std::string::npos) << m;
}

TEST(Config, FlagsOverrideFile) {
    const std::string path = temp_config("lerw_config_precedence.json", R"({"replicas": 100, "N": 64})");
    const ExperimentConfig c = parse_config({"survival", "--config", path, "--replicas", "500"});
    EXPECT_EQ(c.replicas, 500);
    EXPECT_EQ(c.N, 64);
}

TEST(Config, FileKeysMirrorFields) {
    const ExperimentConfig c = parse_config_json(R"({
        "experiment": "z-decay", "N": 2048, "alpha": "inf", "dim": 2, "replicas": 7,
        "master_seed": 18446744073709551615, "n_grid": [1, 2, 3], "beta_grid": [0.5, 0.75],
        "margin_factor": 2.5, "workers": 3, "out_dir": "x/y", "max_path_len": 1000,
        "max_points": 99, "zeta_hat": 0.3, "bootstrap_resamples": 200, "ci_level": 0.9})");
    EXPECT_EQ(c.experiment, Experiment::z_decay);
    EXPECT_TRUE(c.infinite_alpha());
    EXPECT_EQ(c.dim, 2);
    EXPECT_EQ(c.master_seed, 18446744073709551615ULL);
    EXPECT_EQ(c.n_grid, (std::vector<std::int64_t>{1, 2, 3}));
    EXPECT_EQ(c.beta_grid, (std::vector<double>{0.5, 0.75}));
    EXPECT_EQ(c.margin_factor, 2.5);
    EXPECT_EQ(c.workers, 3);
    EXPECT_EQ(c.out_dir, "x/y");
    EXPECT_EQ(c.zeta_hat, 0.3);
    EXPECT_EQ(c.ci_level, 0.9);
}

TEST(Config, UnknownKeyNamed) {
    EXPECT_NE(json_message(R"({"replicsa": 3})").find("replicsa"), std::string::npos);
    EXPECT_NE(message_of({"clt", "--bogus", "1"}).find("bogus"), std::string::npos);
}

TEST(Config, TypeErrorsNameKeyPath) {
    EXPECT_NE(json_message(R"({"N": "abc"})").find("N:"), std::string::npos);
    EXPECT_NE(json_message(R"({"n_grid": [1, 2, "x"]})").find("n_grid[2]"), std::string::npos);
    EXPECT_NE(json_message(R"({"master_seed": -4})").find("master_seed"), std::string::npos);
    EXPECT_NE(json_message("[1, 2]").find("object"), std::string::npos);
    EXPECT_NE(json_message("{").find("JSON"), std::string::npos);
    EXPECT_NE(message_of({"survival", "--n-grid", "1,x,3"}).find("n_grid[1]"), std::string::npos);
}

TEST(Config, ListFlags) {
    const ExperimentConfig c = parse_config({"zeta", "--n-grid", "8,16,32", "--beta-grid", "0.5,0.6"});
    EXPECT_EQ(c.n_grid, (std::vector<std::int64_t>{8, 16, 32}));
    EXPECT_EQ(c.beta_grid, (std::vector<double>{0.5, 0.6}));
}

TEST(Config, InfiniteAlphaOnlyWhereMeaningful) {
    EXPECT_NO_THROW(parse_config({"erase", "--alpha", "inf"}));
    EXPECT_NO_THROW(parse_config({"compare-lew", "--alpha", "inf"}));
    EXPECT_NE(message_of({"clt", "--alpha", "inf"}).find("alpha"), std::string::npos);
}

TEST(Config, RangeErrors) {
    EXPECT_NE(message_of({"clt", "--N", "0"}).find("N"), std::string::npos);
    EXPECT_NE(message_of({"clt", "--replicas", "0"}).find("replicas"), std::string::npos);
    EXPECT_NE(message_of({"clt", "--dim", "0"}).find("dim"), std::string::npos);
    EXPECT_NE(message_of({"clt", "--workers", "0"}).find("workers"), std::string::npos);
    EXPECT_NE(message_of({"clt", "--margin", "-1"}).find("margin_factor"), std::string::npos);
    EXPECT_NE(message_of({"clt", "--ci-level", "1"}).find("ci_level"), std::string::npos);
    EXPECT_NE(message_of({"clt", "--bootstrap", "10"}).find("bootstrap_resamples"), std::string::npos);
}

TEST(Config, ExperimentNames) {
    EXPECT_NE(message_of({"nope"}).find("experiment"), std::string::npos);
    EXPECT_FALSE(message_of({}).empty());
    for (const char* n : {"survival", "rho-ratio", "sigma-scaling", "clt", "tau-clt", "compare-lew", "zeta", "z-decay",
                          "walk", "erase"}) {
        const auto e = experiment_from_string(n);
        ASSERT_TRUE(e.has_value()) << n;
        EXPECT_EQ(to_string(*e), n);
    }
}

TEST(Config, MissingFileIsConfigError) {
    EXPECT_NE(message_of({"clt", "--config", "/nonexistent/lerw.json"}).find("config"), std::string::npos);
}
