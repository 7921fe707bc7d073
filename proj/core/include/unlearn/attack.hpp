#pragma once

#include <cstdint>
#include <memory>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "unlearn/records.hpp"

namespace unlearn {

enum class AttackKind { Knn, RandomForest, AdaBoostStumps };

std::string to_string(AttackKind k);
AttackKind attack_kind_from_string(const std::string& name);

/// Fixed, seeded defaults so reports are reproducible.
struct AttackConfig {
    int knn_k = 5;
    int rf_trees = 100;
    int rf_max_depth = 8;
    int ada_rounds = 50;
    std::uint64_t seed = 0;
};

/// A fitted binary classifier mapping a logit vector to its origin.
class AttackModel {
public:
    virtual ~AttackModel() = default;
    virtual Origin predict(std::span<const double> logits) const = 0;
};

/// Fits one of the three attack families on labeled records. Both origins
/// must be present.
std::unique_ptr<AttackModel> fit_attack(AttackKind kind,
                                        std::span<const LogitRecord> train_records,
                                        const AttackConfig& cfg = {});

/// Empirical classifier advantage 2*(accuracy - 1/2) on test records.
double classifier_advantage(const AttackModel& attack,
                            std::span<const LogitRecord> test_records);

/// One advantage estimate per (attack kind, class scope). Scopes are
/// "class_<orig>" per original class, plus "unlearned" and "remaining"
/// aggregates (mean of the per-class advantages in each group).
struct AdvantageReport {
    struct Row {
        AttackKind kind;
        std::string scope;
        double advantage;
    };
    std::vector<Row> rows;

    double value(AttackKind kind, const std::string& scope) const;
};

/// Deterministic split of the model ids behind `records` into attack-train
/// and attack-test sides; no model contributes records to both.
struct ModelSplit {
    std::set<int> train_ids;
    std::set<int> test_ids;
};
ModelSplit split_models_by_id(const std::vector<LogitRecord>& records, double train_fraction,
                              std::uint64_t seed);

/// Partitions records by the true original class of the predicted input,
/// fits one attack per (class, kind) on the train-side models' records, and
/// reports advantage on the test side.
AdvantageReport per_class_advantage(const std::vector<LogitRecord>& records,
                                    const std::vector<AttackKind>& kinds,
                                    const std::set<int>& deleted_classes,
                                    double model_split, std::uint64_t seed);

} // namespace unlearn
