#include <doctest.h>

#include <filesystem>
#include <fstream>
#include <map>
#include <sstream>

#include "unlearn/errors.hpp"
#include "unlearn/experiment.hpp"
#include "unlearn/records.hpp"

using namespace unlearn;
namespace fs = std::filesystem;

namespace {

// Small enough that `full` completes in a couple of seconds.
ExperimentConfig tiny_config(const std::string& out_name) {
    ExperimentConfig cfg;
    cfg.dataset.synth = SynthSpec{4, 4, 20, 8, 0.05, 9};
    cfg.layer_dims = {4, 8, 4};
    cfg.train.epochs = 4;
    cfg.strategies = {Strategy::Naive, Strategy::Normalization, Strategy::Zeroing};
    cfg.attacks = {AttackKind::Knn};
    cfg.shadow.models_per_pool = 2;
    cfg.shadow.directions = 16;
    cfg.shadow.baseline_pool = true;
    cfg.shadow.threads = 2;
    cfg.inversion.steps = 30;
    cfg.out_dir = (fs::temp_directory_path() / out_name).string();
    cfg.base_seed = 500;
    return cfg;
}

std::string slurp(const fs::path& path) {
    std::ifstream in(path, std::ios::binary);
    REQUIRE(in);
    return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

std::size_t line_count(const std::string& text) {
    return std::count(text.begin(), text.end(), '\n');
}

} // namespace

TEST_CASE("config: round trip through JSON is lossless") {
    const fs::path path = fs::temp_directory_path() / "unlearn_cfg_roundtrip.json";
    const ExperimentConfig cfg = tiny_config("unlearn_cfg_rt_out");
    save_config(cfg, path);
    CHECK(load_config(path) == cfg);

    // and once more through the serialized form
    const ExperimentConfig again = load_config(path);
    save_config(again, path);
    CHECK(load_config(path) == again);
}

TEST_CASE("config: validation errors") {
    const fs::path path = fs::temp_directory_path() / "unlearn_cfg_bad.json";
    std::ofstream(path) << R"({"strategies": []})";
    CHECK_THROWS_AS(load_config(path), ConfigError);
    std::ofstream(path) << R"({"dataset": {"type": "nonsense"}})";
    CHECK_THROWS_AS(load_config(path), ConfigError);
    std::ofstream(path) << "{ broken";
    CHECK_THROWS_AS(load_config(path), ConfigError);
    CHECK_THROWS_AS(load_config(fs::temp_directory_path() / "unlearn_no_such.json"),
                    IoError);
}

TEST_CASE("full pipeline: artifacts exist and reruns are byte-identical") {
    ExperimentConfig cfg = tiny_config("unlearn_full_out");
    fs::remove_all(cfg.out_dir);
    run_full(cfg);

    const std::vector<std::string> artifacts = {
        "train-images.idx", "train-labels.idx", "test-images.idx", "test-labels.idx",
        "model.json",       "metrics.csv",      "accuracy.csv",    "records.csv",
        "advantage.csv",    "ks.csv",           "labels.csv",      "model_naive.json",
        "plan_naive.json",  "model_normalization.json",            "model_zeroing.json",
    };
    for (const auto& name : artifacts)
        CHECK_MESSAGE(fs::exists(fs::path(cfg.out_dir) / name), name);
    CHECK(fs::exists(fs::path(cfg.out_dir) / "inversions" / "class_0_original.pgm"));
    CHECK(fs::exists(fs::path(cfg.out_dir) / "inversions" / "class_1_naive.pgm"));
    CHECK(!fs::exists(fs::path(cfg.out_dir) / "inversions" / "class_0_naive.pgm"));

    std::map<std::string, std::string> first;
    for (const auto& entry : fs::recursive_directory_iterator(cfg.out_dir))
        if (entry.is_regular_file())
            first[entry.path().string()] = slurp(entry.path());

    run_full(cfg);
    for (const auto& [path, content] : first)
        CHECK_MESSAGE(slurp(path) == content, path);
}

TEST_CASE("full pipeline: report shapes") {
    ExperimentConfig cfg = tiny_config("unlearn_full_out");
    if (!fs::exists(fs::path(cfg.out_dir) / "advantage.csv")) run_full(cfg);

    // advantage.csv: header + kinds * (classes + 2 aggregates)
    const std::string adv = slurp(fs::path(cfg.out_dir) / "advantage.csv");
    CHECK(line_count(adv) == 1 + 1 * (4 + 2));
    CHECK(adv.find("attack,class_scope,advantage") == 0);
    CHECK(adv.find("knn,unlearned,") != std::string::npos);
    CHECK(adv.find("knn,remaining,") != std::string::npos);

    // ks.csv: header + per-class + 2 aggregates + 2 baseline rows
    const std::string ks = slurp(fs::path(cfg.out_dir) / "ks.csv");
    CHECK(line_count(ks) == 1 + 4 + 2 + 2);
    CHECK(ks.find("scope,statistic,num_directions,seed") == 0);
    CHECK(ks.find("baseline_unlearned,") != std::string::npos);

    // labels.csv: header + one row per non-naive strategy
    const std::string labels = slurp(fs::path(cfg.out_dir) / "labels.csv");
    CHECK(line_count(labels) == 1 + 2);
    // normalization cannot move any label
    CHECK(labels.find("naive_vs_normalization,0,0,0") != std::string::npos);

    // accuracy.csv: header + before + retrained + strategies
    const std::string acc = slurp(fs::path(cfg.out_dir) / "accuracy.csv");
    CHECK(line_count(acc) == 1 + 2 + 3);

    // records.csv rows: (2 pools + baseline) * N * test size
    const auto records = read_records_csv(fs::path(cfg.out_dir) / "records.csv");
    CHECK(records.size() == 3 * 2 * 32);
}

TEST_CASE("attack stage: identical origin distributions give near-zero advantage") {
    ExperimentConfig cfg = tiny_config("unlearn_null_attack_out");
    fs::remove_all(cfg.out_dir);
    fs::create_directories(cfg.out_dir);

    // Craft records where both origins carry identical logit multisets for
    // every class: 4 models per side, 3 classes, 40 vectors per class/model.
    std::vector<LogitRecord> records;
    std::mt19937_64 rng(7);
    std::normal_distribution<double> dist(0.0, 1.0);
    cfg.shadow.models_per_pool = 4;
    for (int cls = 0; cls < 3; ++cls)
        for (int rep = 0; rep < 40; ++rep) {
            std::vector<double> logits = {dist(rng), dist(rng), dist(rng)};
            for (int m = 0; m < 4; ++m) {
                records.push_back({logits, cls, Origin::Seen, m});
                records.push_back({logits, cls, Origin::NotSeen, 4 + m});
            }
        }
    write_records_csv(records, fs::path(cfg.out_dir) / "records.csv");

    run_attack(cfg);
    const std::string adv = slurp(fs::path(cfg.out_dir) / "advantage.csv");
    std::stringstream ss(adv);
    std::string line;
    std::getline(ss, line); // header
    while (std::getline(ss, line)) {
        const auto last_comma = line.rfind(',');
        const double value = std::stod(line.substr(last_comma + 1));
        CHECK(std::abs(value) <= 0.1);
    }
}

TEST_CASE("stage dependencies produce typed errors") {
    ExperimentConfig cfg = tiny_config("unlearn_missing_out");
    fs::remove_all(cfg.out_dir);
    CHECK_THROWS_AS(run_attack(cfg), IoError);
    CHECK_THROWS_AS(run_ks(cfg), IoError);
    CHECK_THROWS_AS(run_unlearn(cfg, Strategy::Naive), IoError);
    CHECK_THROWS_AS(run_label_audit(cfg), IoError);
    CHECK_THROWS_AS(run_invert(cfg), IoError);

    cfg.dataset.type = "mnist";
    cfg.dataset.mnist.train_images = "/no/such/file";
    CHECK_THROWS_AS(run_synth_data(cfg), ConfigError);
}
