#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>

#include "unlearn/experiment.hpp"
#include "unlearn/idx.hpp"

using namespace unlearn;
namespace fs = std::filesystem;

namespace {

int run_cli(const std::string& args) {
    const std::string cmd = std::string(UNLEARN_CLI_PATH) + " " + args + " > /dev/null 2>&1";
    const int status = std::system(cmd.c_str());
    return WEXITSTATUS(status);
}

struct CliFixture {
    fs::path dir;
    fs::path config;

    CliFixture() {
        dir = fs::temp_directory_path() / "unlearn_cli_test";
        fs::remove_all(dir);
        fs::create_directories(dir);
        config = dir / "config.json";

        ExperimentConfig cfg;
        cfg.dataset.synth = SynthSpec{4, 4, 15, 6, 0.05, 33};
        cfg.layer_dims = {4, 8, 4};
        cfg.train.epochs = 3;
        cfg.strategies = {Strategy::Naive, Strategy::Normalization};
        cfg.attacks = {AttackKind::Knn};
        cfg.shadow.models_per_pool = 2;
        cfg.shadow.directions = 8;
        cfg.shadow.threads = 2;
        cfg.inversion.steps = 10;
        cfg.out_dir = (dir / "out").string();
        save_config(cfg, config);
    }
};

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

} // namespace

TEST_CASE("cli: staged subcommands chain through their artifacts") {
    const CliFixture fx;
    const std::string base = "--config " + fx.config.string();

    CHECK(run_cli("synth-data " + base) == 0);
    const Dataset train_ds = load_idx(fx.dir / "out" / "train-images.idx",
                                      fx.dir / "out" / "train-labels.idx");
    CHECK(train_ds.size() == 60);
    CHECK(train_ds.num_classes == 4);

    CHECK(run_cli("train " + base) == 0);
    CHECK(fs::exists(fx.dir / "out" / "model.json"));

    CHECK(run_cli("unlearn --strategy naive " + base) == 0);
    CHECK(run_cli("unlearn --strategy normalization " + base) == 0);
    CHECK(run_cli("label-audit " + base) == 0);

    const std::string labels = slurp(fx.dir / "out" / "labels.csv");
    CHECK(labels.find("naive_vs_normalization,0,0,0") != std::string::npos);

    CHECK(run_cli("shadow-run " + base) == 0);
    CHECK(run_cli("attack " + base) == 0);
    CHECK(run_cli("ks " + base) == 0);
    CHECK(run_cli("invert " + base) == 0);
    for (const char* name : {"records.csv", "advantage.csv", "ks.csv"})
        CHECK(fs::exists(fx.dir / "out" / name));
}

TEST_CASE("cli: flag overrides reach the pipeline") {
    const CliFixture fx;
    const fs::path other_out = fx.dir / "other";
    CHECK(run_cli("synth-data --config " + fx.config.string() + " --out " +
                  other_out.string()) == 0);
    CHECK(fs::exists(other_out / "train-images.idx"));
}

TEST_CASE("cli: bad invocations exit nonzero") {
    const CliFixture fx;
    CHECK(run_cli("") != 0);                       // missing subcommand
    CHECK(run_cli("attack --config " + fx.config.string() + " --out /nonexistent/dir") !=
          0);                                      // missing upstream artifact
    CHECK(run_cli("train --config /no/such/config.json") != 0);
    CHECK(run_cli("unlearn --strategy bogus --config " + fx.config.string()) != 0);
}
