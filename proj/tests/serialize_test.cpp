#include <doctest.h>

#include <filesystem>
#include <fstream>

#include "test_support.hpp"
#include "unlearn/dataset.hpp"
#include "unlearn/errors.hpp"
#include "unlearn/serialize.hpp"

using namespace unlearn;
namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
    const fs::path dir = fs::temp_directory_path() / "unlearn_serialize_test";
    fs::create_directories(dir);
    return dir;
}

} // namespace

TEST_CASE("model save/load reproduces logits exactly") {
    const fs::path path = temp_dir() / "model.json";
    const MlpClassifier model = init_model({7, 12, 5}, 130);
    save_model(model, path);
    const MlpClassifier loaded = load_model(path);

    CHECK(loaded == model); // bit-exact weights, stronger than the 1e-12 contract

    std::mt19937_64 rng(131);
    for (int trial = 0; trial < 50; ++trial) {
        const auto x = testsupport::random_vector(7, -3, 3, rng);
        CHECK(testsupport::max_abs_diff(forward(loaded, x).logits,
                                        forward(model, x).logits) == 0.0);
    }
}

TEST_CASE("model load: error taxonomy") {
    const fs::path dir = temp_dir();
    CHECK_THROWS_AS(load_model(dir / "nope.json"), IoError);

    const fs::path garbage = dir / "garbage.json";
    std::ofstream(garbage) << "{ not json";
    CHECK_THROWS_AS(load_model(garbage), ConfigError);

    const fs::path wrong = dir / "wrong.json";
    std::ofstream(wrong) << R"({"format_version": 2, "layer_dims": [2,2],)"
                         << R"( "activation": "relu", "layers": []})";
    CHECK_THROWS_AS(load_model(wrong), ConfigError);
}

TEST_CASE("plan save/load round trip") {
    const fs::path path = temp_dir() / "plan.json";
    ClassMeans means;
    std::mt19937_64 rng(132);
    means.a = testsupport::random_well_conditioned(5, rng);
    means.counts.assign(5, 20);

    const FiltrationPlan plan = build_filtration(means, {1, 3}, Strategy::Randomization, 77);
    save_plan(plan, path);
    const FiltrationPlan loaded = load_plan(path);

    CHECK(loaded.deleted == plan.deleted);
    CHECK(loaded.strategy == plan.strategy);
    CHECK(loaded.seed == plan.seed);
    CHECK(loaded.b == plan.b);
    CHECK(loaded.f == plan.f);
}
