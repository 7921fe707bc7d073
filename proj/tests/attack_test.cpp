#include <doctest.h>

#include <random>

#include "test_support.hpp"
#include "unlearn/attack.hpp"
#include "unlearn/errors.hpp"

using namespace unlearn;

namespace {

// Two Gaussian clouds; with `shift` = 0 they are the same distribution.
std::vector<LogitRecord> gaussian_records(std::size_t per_origin, std::size_t dim,
                                          double shift, std::uint64_t seed,
                                          int first_model_id = 0) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<LogitRecord> records;
    for (std::size_t i = 0; i < 2 * per_origin; ++i) {
        LogitRecord rec;
        rec.origin = i < per_origin ? Origin::Seen : Origin::NotSeen;
        rec.model_id = first_model_id + int(i % 10);
        rec.true_class = 0;
        rec.logits.resize(dim);
        for (double& v : rec.logits) v = dist(rng);
        if (rec.origin == Origin::Seen) rec.logits[0] += shift;
        records.push_back(std::move(rec));
    }
    return records;
}

// A stub attack with a fixed decision rule, for exercising the advantage
// formula without any fitting.
class ThresholdAttack final : public AttackModel {
public:
    explicit ThresholdAttack(bool flipped = false) : flipped_(flipped) {}
    Origin predict(std::span<const double> logits) const override {
        const bool seen = logits[0] > 0.0;
        return seen != flipped_ ? Origin::Seen : Origin::NotSeen;
    }

private:
    bool flipped_;
};

} // namespace

TEST_CASE("all three attack kinds separate linearly separated origins") {
    const auto train_recs = gaussian_records(200, 4, 10.0, 1);
    const auto test_recs = gaussian_records(200, 4, 10.0, 2);
    for (AttackKind kind :
         {AttackKind::Knn, AttackKind::RandomForest, AttackKind::AdaBoostStumps}) {
        const auto attack = fit_attack(kind, train_recs);
        CHECK(classifier_advantage(*attack, test_recs) == doctest::Approx(1.0));
    }
}

TEST_CASE("null distributions give advantage near zero") {
    const auto train_recs = gaussian_records(1000, 4, 0.0, 3);
    const auto test_recs = gaussian_records(1000, 4, 0.0, 4);
    for (AttackKind kind :
         {AttackKind::Knn, AttackKind::RandomForest, AttackKind::AdaBoostStumps}) {
        const auto attack = fit_attack(kind, train_recs);
        CHECK(std::abs(classifier_advantage(*attack, test_recs)) <= 0.1);
    }
}

TEST_CASE("random forest predictions are seed-deterministic") {
    const auto train_recs = gaussian_records(150, 3, 0.8, 5);
    const auto test_recs = gaussian_records(150, 3, 0.8, 6);

    AttackConfig cfg;
    cfg.seed = 11;
    const auto a = fit_attack(AttackKind::RandomForest, train_recs, cfg);
    const auto b = fit_attack(AttackKind::RandomForest, train_recs, cfg);
    for (const auto& rec : test_recs)
        CHECK(a->predict(rec.logits) == b->predict(rec.logits));
}

TEST_CASE("degenerate training data raises") {
    auto records = gaussian_records(50, 3, 1.0, 7);
    records.erase(records.begin() + 50, records.end()); // drop all NotSeen
    CHECK_THROWS_AS(fit_attack(AttackKind::Knn, records), DegenerateData);
    CHECK_THROWS_AS(fit_attack(AttackKind::Knn, std::vector<LogitRecord>{}),
                    DegenerateData);
}

TEST_CASE("knn ties resolve to NotSeen") {
    // two train points at the same location with opposite origins; k=2
    std::vector<LogitRecord> train_recs(2);
    train_recs[0].logits = {0.0};
    train_recs[0].origin = Origin::Seen;
    train_recs[1].logits = {0.0};
    train_recs[1].origin = Origin::NotSeen;

    AttackConfig cfg;
    cfg.knn_k = 2;
    const auto attack = fit_attack(AttackKind::Knn, train_recs, cfg);
    CHECK(attack->predict(std::vector<double>{0.0}) == Origin::NotSeen);
}

TEST_CASE("classifier_advantage: endpoints and the 0.7965 reference point") {
    // 2000 records, logits[0] sign matches origin for exactly 1593 of them:
    // accuracy 0.7965, advantage 0.593
    std::vector<LogitRecord> records(2000);
    std::size_t marked = 0;
    for (std::size_t i = 0; i < records.size(); ++i) {
        records[i].origin = i < 1000 ? Origin::Seen : Origin::NotSeen;
        const bool make_correct = marked < 1593;
        marked += make_correct ? 1 : 0;
        records[i].logits = {
            (records[i].origin == Origin::Seen) == make_correct ? 1.0 : -1.0};
    }

    const ThresholdAttack attack;
    CHECK(classifier_advantage(attack, records) == doctest::Approx(0.593));

    // endpoints: all correct -> 1, half correct -> 0
    std::vector<LogitRecord> perfect(100), half(100);
    for (std::size_t i = 0; i < 100; ++i) {
        perfect[i].origin = i < 50 ? Origin::Seen : Origin::NotSeen;
        perfect[i].logits = {perfect[i].origin == Origin::Seen ? 1.0 : -1.0};
        half[i].origin = i < 50 ? Origin::Seen : Origin::NotSeen;
        half[i].logits = {1.0}; // predicts Seen for all: half right
    }
    CHECK(classifier_advantage(attack, perfect) == doctest::Approx(1.0));
    CHECK(classifier_advantage(attack, half) == doctest::Approx(0.0));

    CHECK_THROWS_AS(classifier_advantage(attack, std::vector<LogitRecord>{}), EmptyInput);
}

TEST_CASE("advantage is antisymmetric under prediction flipping") {
    const auto records = gaussian_records(300, 2, 0.7, 8);
    const ThresholdAttack attack, flipped(true);
    CHECK(classifier_advantage(attack, records) ==
          doctest::Approx(-classifier_advantage(flipped, records)));
}

TEST_CASE("split_models_by_id: disjoint, both pools represented, deterministic") {
    auto records = gaussian_records(400, 2, 0.0, 9);
    // model ids 0..9 seen, 100..109 not seen
    for (auto& rec : records)
        rec.model_id += rec.origin == Origin::NotSeen ? 100 : 0;

    const ModelSplit split = split_models_by_id(records, 0.7, 3);
    CHECK(split.train_ids.size() == 14);
    CHECK(split.test_ids.size() == 6);
    for (int id : split.train_ids) CHECK(!split.test_ids.count(id));

    const auto per_pool = [&](const std::set<int>& ids, bool seen) {
        return std::count_if(ids.begin(), ids.end(),
                             [&](int id) { return (id < 100) == seen; });
    };
    CHECK(per_pool(split.train_ids, true) == 7);
    CHECK(per_pool(split.train_ids, false) == 7);

    const ModelSplit again = split_models_by_id(records, 0.7, 3);
    CHECK(again.train_ids == split.train_ids);
}

TEST_CASE("per_class_advantage: report shape and no model-id leakage") {
    std::mt19937_64 rng(10);
    std::normal_distribution<double> dist(0.0, 1.0);
    std::vector<LogitRecord> records;
    const int num_models = 10, num_classes = 10;
    for (int m = 0; m < 2 * num_models; ++m)
        for (int cls = 0; cls < num_classes; ++cls)
            for (int rep = 0; rep < 4; ++rep) {
                LogitRecord rec;
                rec.model_id = m;
                rec.origin = m < num_models ? Origin::Seen : Origin::NotSeen;
                rec.true_class = cls;
                rec.logits = {dist(rng), dist(rng)};
                if (cls == 0 && rec.origin == Origin::Seen) rec.logits[0] += 6.0;
                records.push_back(std::move(rec));
            }

    const std::vector<AttackKind> kinds = {AttackKind::Knn, AttackKind::RandomForest,
                                           AttackKind::AdaBoostStumps};
    const AdvantageReport report = per_class_advantage(records, kinds, {0}, 0.7, 4);

    CHECK(report.rows.size() == kinds.size() * (num_classes + 2));
    for (AttackKind kind : kinds) {
        // the shifted class is perfectly separable, the rest are noise
        CHECK(report.value(kind, "unlearned") == doctest::Approx(1.0));
        CHECK(report.value(kind, "class_0") == doctest::Approx(1.0));
        CHECK(std::abs(report.value(kind, "remaining")) < 0.35);
    }

    // advantages live in [-1, 1]
    for (const auto& row : report.rows) {
        CHECK(row.advantage >= -1.0);
        CHECK(row.advantage <= 1.0);
    }
}
