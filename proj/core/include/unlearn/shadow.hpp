#pragma once

#include <cstdint>
#include <set>
#include <vector>

#include "unlearn/dataset.hpp"
#include "unlearn/filtration.hpp"
#include "unlearn/mlp.hpp"
#include "unlearn/records.hpp"

namespace unlearn {

/// Configuration of the shadow-model pipeline. Model m (0-based, across all
/// pools) trains with seed base_seed + m, which makes the record set a pure
/// function of this struct regardless of execution order or thread count.
struct ShadowParams {
    std::vector<std::size_t> layer_dims;
    TrainConfig train; // template; per-model seed is derived
    std::set<int> deleted;
    Strategy strategy = Strategy::Naive;
    int models_per_pool = 20;
    double model_split = 0.7;          // attack train fraction, by model
    std::size_t sample_cap = kFullSample; // s for class-mean estimation
    std::uint64_t base_seed = 0;
    bool baseline_pool = false;  // third pool for the KS baseline
    bool estimate_on_test = false;
    int threads = 1; // <=1 serial; training order never affects results
};

/// Trained pools: `full` saw all classes (ids 0..N-1), `retrained` saw the
/// data without the deleted classes (ids N..2N-1), `baseline` is a second
/// retrained pool (ids 2N..3N-1, empty unless requested).
struct ModelPools {
    std::vector<MlpClassifier> full;
    std::vector<MlpClassifier> retrained;
    std::vector<MlpClassifier> baseline;
};

ModelPools train_model_pools(const Dataset& train_ds, const ShadowParams& params);

/// Applies the configured unlearning to the full pool, predicts the entire
/// test split with every model, and labels the predictions. true_class
/// carries the original class index of each test input.
std::vector<LogitRecord> records_from_pools(const ModelPools& pools,
                                            const Dataset& train_ds,
                                            const Dataset& test_ds,
                                            const ShadowParams& params);

/// train_model_pools + records_from_pools.
std::vector<LogitRecord> shadow_experiment(const Dataset& train_ds, const Dataset& test_ds,
                                           const ShadowParams& params);

/// Splits records into the primary pools and the baseline pool by model id;
/// the baseline ids start at 2 * models_per_pool.
struct RecordGroups {
    std::vector<LogitRecord> primary;
    std::vector<LogitRecord> baseline;
};
RecordGroups split_baseline_records(const std::vector<LogitRecord>& records,
                                    int models_per_pool);

/// Fraction of test inputs whose argmax label differs between the two
/// models, for all inputs, for inputs of the deleted classes, and for
/// inputs of retained classes that `reference` predicts correctly.
struct LabelChangeReport {
    double all = 0.0;
    double unlearned = 0.0;
    double correct_remaining = 0.0;
};
LabelChangeReport label_change_report(const MlpClassifier& reference,
                                      const MlpClassifier& other, const Dataset& test_ds,
                                      const std::set<int>& deleted);

} // namespace unlearn
