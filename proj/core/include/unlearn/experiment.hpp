#pragma once

#include <cstdint>
#include <filesystem>
#include <set>
#include <string>
#include <vector>

#include "unlearn/attack.hpp"
#include "unlearn/dataset.hpp"
#include "unlearn/filtration.hpp"
#include "unlearn/mlp.hpp"
#include "unlearn/shadow.hpp"

namespace unlearn {

struct SynthSpec {
    int k = 10;
    int d = 8;
    int train_per_class = 120;
    int test_per_class = 40;
    double spread = 0.05;
    std::uint64_t seed = 42;

    bool operator==(const SynthSpec&) const = default;
};

struct MnistSpec {
    std::string train_images;
    std::string train_labels;
    std::string test_images;
    std::string test_labels;

    bool operator==(const MnistSpec&) const = default;
};

struct DatasetSpec {
    std::string type = "synth"; // "synth" | "mnist"
    SynthSpec synth;
    MnistSpec mnist;

    bool operator==(const DatasetSpec&) const = default;
};

struct ShadowSpec {
    Strategy strategy = Strategy::Naive; // the strategy under adversarial evaluation
    int models_per_pool = 20;
    double model_split = 0.7;
    std::size_t sample_size = 0; // 0 = estimate class means from all rows
    std::size_t directions = 200;
    bool baseline_pool = true;
    bool estimate_on_test = false;
    int threads = 0; // 0 = hardware concurrency

    bool operator==(const ShadowSpec&) const = default;
};

struct InversionSpec {
    int steps = 500;
    double step_size = 0.1;
    std::string objective = "log_prob"; // "log_prob" | "logit"

    bool operator==(const InversionSpec&) const = default;
};

/// Everything a batch run needs; every stochastic choice point is seeded
/// from base_seed, so all artifacts are reproducible from this struct.
struct ExperimentConfig {
    DatasetSpec dataset;
    std::vector<std::size_t> layer_dims; // empty -> [d, 50, k]
    TrainConfig train;
    std::set<int> deleted{0};
    std::vector<Strategy> strategies{Strategy::Naive, Strategy::Normalization,
                                     Strategy::Randomization, Strategy::Zeroing};
    std::vector<AttackKind> attacks{AttackKind::Knn, AttackKind::RandomForest,
                                    AttackKind::AdaBoostStumps};
    ShadowSpec shadow;
    InversionSpec inversion;
    std::string out_dir = "out";
    std::uint64_t base_seed = 1000;

    bool operator==(const ExperimentConfig&) const = default;
};

ExperimentConfig load_config(const std::filesystem::path& path);
void save_config(const ExperimentConfig& cfg, const std::filesystem::path& path);

struct LoadedData {
    Dataset train;
    Dataset test;
};

/// Synthesizes or loads the configured dataset pair.
LoadedData prepare_dataset(const ExperimentConfig& cfg);

/// Effective layer dims: the configured ones, or [d, 50, k].
std::vector<std::size_t> effective_layer_dims(const ExperimentConfig& cfg,
                                              const Dataset& train_ds);

ShadowParams shadow_params(const ExperimentConfig& cfg, const Dataset& train_ds);

// Pipeline stages. Each writes its artifacts under cfg.out_dir; stages that
// consume another stage's artifact read it back from disk, so any report
// can be regenerated from its upstream file plus the config.
void run_synth_data(const ExperimentConfig& cfg);
void run_train(const ExperimentConfig& cfg);
void run_unlearn(const ExperimentConfig& cfg, Strategy strategy);
void run_shadow(const ExperimentConfig& cfg);
void run_attack(const ExperimentConfig& cfg);
void run_ks(const ExperimentConfig& cfg);
void run_label_audit(const ExperimentConfig& cfg);
void run_invert(const ExperimentConfig& cfg);
void run_full(const ExperimentConfig& cfg);

} // namespace unlearn
