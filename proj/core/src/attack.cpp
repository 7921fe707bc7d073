#include "unlearn/attack.hpp"

#include <algorithm>
#include <cmath>
#include <map>
#include <numeric>
#include <random>

#include "unlearn/errors.hpp"

namespace unlearn {

std::string to_string(AttackKind k) {
    switch (k) {
        case AttackKind::Knn: return "knn";
        case AttackKind::RandomForest: return "random_forest";
        case AttackKind::AdaBoostStumps: return "adaboost";
    }
    throw InvalidParam("unknown attack kind");
}

AttackKind attack_kind_from_string(const std::string& name) {
    if (name == "knn") return AttackKind::Knn;
    if (name == "random_forest") return AttackKind::RandomForest;
    if (name == "adaboost") return AttackKind::AdaBoostStumps;
    throw InvalidParam("unknown attack kind '" + name + "'");
}

namespace {

void check_train_records(std::span<const LogitRecord> records) {
    if (records.empty())
        throw DegenerateData("attack training data is empty");
    const bool has_seen = std::any_of(records.begin(), records.end(),
                                      [](const auto& r) { return r.origin == Origin::Seen; });
    const bool has_not = std::any_of(records.begin(), records.end(),
                                     [](const auto& r) { return r.origin == Origin::NotSeen; });
    if (!has_seen || !has_not)
        throw DegenerateData("attack training data contains a single origin only");
}

// ---------------------------------------------------------------- knn ----

class KnnAttack final : public AttackModel {
public:
    KnnAttack(std::span<const LogitRecord> records, int k) : k_(k) {
        for (const auto& r : records) {
            points_.push_back(r.logits);
            seen_.push_back(r.origin == Origin::Seen);
        }
    }

    Origin predict(std::span<const double> x) const override {
        std::vector<std::pair<double, std::size_t>> dist(points_.size());
        for (std::size_t i = 0; i < points_.size(); ++i) {
            double d2 = 0.0;
            for (std::size_t j = 0; j < x.size(); ++j) {
                const double diff = points_[i][j] - x[j];
                d2 += diff * diff;
            }
            dist[i] = {d2, i};
        }
        const std::size_t k = std::min<std::size_t>(k_, dist.size());
        std::partial_sort(dist.begin(), dist.begin() + k, dist.end());
        int votes = 0; // +1 seen, -1 not seen
        for (std::size_t i = 0; i < k; ++i)
            votes += seen_[dist[i].second] ? 1 : -1;
        return votes > 0 ? Origin::Seen : Origin::NotSeen; // tie -> NotSeen
    }

private:
    std::vector<std::vector<double>> points_;
    std::vector<bool> seen_;
    int k_;
};

// ------------------------------------------------------- random forest ----

struct TreeNode {
    bool leaf = true;
    Origin label = Origin::NotSeen;
    std::size_t feature = 0;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
};

class DecisionTree {
public:
    void fit(const std::vector<std::vector<double>>& xs, const std::vector<bool>& seen,
             std::vector<std::size_t> rows, int max_depth, std::size_t features_per_node,
             std::mt19937_64& rng) {
        nodes_.clear();
        grow(xs, seen, std::move(rows), max_depth, features_per_node, rng);
    }

    Origin predict(std::span<const double> x) const {
        int node = 0;
        while (!nodes_[node].leaf)
            node = x[nodes_[node].feature] <= nodes_[node].threshold ? nodes_[node].left
                                                                     : nodes_[node].right;
        return nodes_[node].label;
    }

private:
    int grow(const std::vector<std::vector<double>>& xs, const std::vector<bool>& seen,
             std::vector<std::size_t> rows, int depth_left, std::size_t features_per_node,
             std::mt19937_64& rng) {
        const int index = static_cast<int>(nodes_.size());
        nodes_.emplace_back();

        std::size_t n_seen = 0;
        for (std::size_t r : rows) n_seen += seen[r] ? 1 : 0;
        nodes_[index].label = n_seen * 2 > rows.size() ? Origin::Seen : Origin::NotSeen;

        if (depth_left == 0 || rows.size() < 2 || n_seen == 0 || n_seen == rows.size())
            return index;

        // Candidate features: a fresh subsample per node.
        const std::size_t dim = xs[rows.front()].size();
        std::vector<std::size_t> features(dim);
        std::iota(features.begin(), features.end(), 0);
        std::shuffle(features.begin(), features.end(), rng);
        features.resize(std::min(features_per_node, dim));

        double best_gini = 2.0;
        std::size_t best_feature = 0;
        double best_threshold = 0.0;

        std::vector<std::size_t> sorted = rows;
        for (std::size_t f : features) {
            std::sort(sorted.begin(), sorted.end(), [&](std::size_t a, std::size_t b) {
                return xs[a][f] < xs[b][f];
            });
            std::size_t left_seen = 0;
            for (std::size_t i = 0; i + 1 < sorted.size(); ++i) {
                left_seen += seen[sorted[i]] ? 1 : 0;
                if (xs[sorted[i]][f] == xs[sorted[i + 1]][f]) continue;
                const double nl = double(i + 1), nr = double(sorted.size() - i - 1);
                const double pl = double(left_seen) / nl;
                const double pr = double(n_seen - left_seen) / nr;
                const double gini =
                    (nl * 2.0 * pl * (1.0 - pl) + nr * 2.0 * pr * (1.0 - pr)) /
                    double(sorted.size());
                if (gini < best_gini) {
                    best_gini = gini;
                    best_feature = f;
                    best_threshold = (xs[sorted[i]][f] + xs[sorted[i + 1]][f]) / 2.0;
                }
            }
        }
        if (best_gini >= 2.0) return index; // no usable split in the subsample

        std::vector<std::size_t> left, right;
        for (std::size_t r : rows)
            (xs[r][best_feature] <= best_threshold ? left : right).push_back(r);
        if (left.empty() || right.empty()) return index;

        nodes_[index].leaf = false;
        nodes_[index].feature = best_feature;
        nodes_[index].threshold = best_threshold;
        nodes_[index].left =
            grow(xs, seen, std::move(left), depth_left - 1, features_per_node, rng);
        nodes_[index].right =
            grow(xs, seen, std::move(right), depth_left - 1, features_per_node, rng);
        return index;
    }

    std::vector<TreeNode> nodes_;
};

class RandomForestAttack final : public AttackModel {
public:
    RandomForestAttack(std::span<const LogitRecord> records, const AttackConfig& cfg) {
        std::vector<std::vector<double>> xs;
        std::vector<bool> seen;
        for (const auto& r : records) {
            xs.push_back(r.logits);
            seen.push_back(r.origin == Origin::Seen);
        }
        const std::size_t dim = xs.front().size();
        const auto features_per_node =
            static_cast<std::size_t>(std::ceil(std::sqrt(double(dim))));

        std::mt19937_64 rng(cfg.seed);
        std::uniform_int_distribution<std::size_t> pick(0, xs.size() - 1);
        trees_.resize(cfg.rf_trees);
        for (auto& tree : trees_) {
            std::vector<std::size_t> bootstrap(xs.size());
            for (auto& r : bootstrap) r = pick(rng);
            tree.fit(xs, seen, std::move(bootstrap), cfg.rf_max_depth, features_per_node, rng);
        }
    }

    Origin predict(std::span<const double> x) const override {
        int votes = 0;
        for (const auto& tree : trees_)
            votes += tree.predict(x) == Origin::Seen ? 1 : -1;
        return votes > 0 ? Origin::Seen : Origin::NotSeen;
    }

private:
    std::vector<DecisionTree> trees_;
};

// ------------------------------------------------------------ adaboost ----

// Depth-1 threshold stump: predicts +1 (seen) on one side of a threshold.
struct Stump {
    std::size_t feature = 0;
    double threshold = 0.0;
    int polarity = 1; // +1: x > threshold -> seen; -1: x <= threshold -> seen
    double alpha = 0.0;

    int predict(std::span<const double> x) const {
        const int above = x[feature] > threshold ? 1 : -1;
        return polarity * above;
    }
};

class AdaBoostAttack final : public AttackModel {
public:
    AdaBoostAttack(std::span<const LogitRecord> records, const AttackConfig& cfg) {
        std::vector<std::vector<double>> xs;
        std::vector<int> ys; // +1 seen, -1 not seen
        for (const auto& r : records) {
            xs.push_back(r.logits);
            ys.push_back(r.origin == Origin::Seen ? 1 : -1);
        }
        const std::size_t n = xs.size();
        const std::size_t dim = xs.front().size();

        // Per-feature sort orders are reused across rounds.
        std::vector<std::vector<std::size_t>> order(dim);
        for (std::size_t f = 0; f < dim; ++f) {
            order[f].resize(n);
            std::iota(order[f].begin(), order[f].end(), 0);
            std::sort(order[f].begin(), order[f].end(),
                      [&](std::size_t a, std::size_t b) { return xs[a][f] < xs[b][f]; });
        }

        std::vector<double> w(n, 1.0 / double(n));
        for (int round = 0; round < cfg.ada_rounds; ++round) {
            Stump best;
            double best_err = 1.0;
            for (std::size_t f = 0; f < dim; ++f) {
                // err(threshold before index i, polarity +1)
                //   = sum_{left} w*[y==+1] + sum_{right} w*[y==-1]
                double err = 0.0;
                for (std::size_t i = 0; i < n; ++i)
                    if (ys[i] == -1) err += w[i];
                auto consider = [&](double err_pos, double threshold) {
                    if (err_pos < best_err) {
                        best_err = err_pos;
                        best = Stump{f, threshold, 1, 0.0};
                    }
                    if (1.0 - err_pos < best_err) {
                        best_err = 1.0 - err_pos;
                        best = Stump{f, threshold, -1, 0.0};
                    }
                };
                consider(err, -std::numeric_limits<double>::infinity());
                for (std::size_t i = 0; i < n; ++i) {
                    const std::size_t r = order[f][i];
                    err += ys[r] == 1 ? w[r] : -w[r];
                    if (i + 1 < n && xs[order[f][i]][f] == xs[order[f][i + 1]][f]) continue;
                    if (i + 1 == n) break; // all rows on the left: constant already covered
                    consider(err, (xs[order[f][i]][f] + xs[order[f][i + 1]][f]) / 2.0);
                }
            }

            const double eps = std::clamp(best_err, 1e-12, 1.0 - 1e-12);
            if (eps >= 0.5) break; // no stump better than chance
            best.alpha = 0.5 * std::log((1.0 - eps) / eps);
            stumps_.push_back(best);
            if (best_err <= 1e-12) break; // perfect stump

            double sum = 0.0;
            for (std::size_t i = 0; i < n; ++i) {
                w[i] *= std::exp(-best.alpha * double(ys[i] * best.predict(xs[i])));
                sum += w[i];
            }
            for (double& v : w) v /= sum;
        }
    }

    Origin predict(std::span<const double> x) const override {
        double score = 0.0;
        for (const auto& stump : stumps_)
            score += stump.alpha * double(stump.predict(x));
        return score > 0.0 ? Origin::Seen : Origin::NotSeen;
    }

private:
    std::vector<Stump> stumps_;
};

} // namespace

std::unique_ptr<AttackModel> fit_attack(AttackKind kind,
                                        std::span<const LogitRecord> train_records,
                                        const AttackConfig& cfg) {
    check_train_records(train_records);
    switch (kind) {
        case AttackKind::Knn:
            return std::make_unique<KnnAttack>(train_records, cfg.knn_k);
        case AttackKind::RandomForest:
            return std::make_unique<RandomForestAttack>(train_records, cfg);
        case AttackKind::AdaBoostStumps:
            return std::make_unique<AdaBoostAttack>(train_records, cfg);
    }
    throw InvalidParam("unknown attack kind");
}

double classifier_advantage(const AttackModel& attack,
                            std::span<const LogitRecord> test_records) {
    if (test_records.empty())
        throw EmptyInput("classifier_advantage: no test records");
    std::size_t correct = 0;
    for (const auto& r : test_records)
        if (attack.predict(r.logits) == r.origin) ++correct;
    return 2.0 * (double(correct) / double(test_records.size()) - 0.5);
}

double AdvantageReport::value(AttackKind kind, const std::string& scope) const {
    for (const auto& row : rows)
        if (row.kind == kind && row.scope == scope) return row.advantage;
    throw InvalidParam("no advantage row for scope '" + scope + "'");
}

ModelSplit split_models_by_id(const std::vector<LogitRecord>& records, double train_fraction,
                              std::uint64_t seed) {
    if (!(train_fraction > 0.0 && train_fraction < 1.0))
        throw InvalidParam("split_models_by_id: train_fraction must be in (0,1)");

    std::set<int> seen_ids, not_seen_ids;
    for (const auto& r : records)
        (r.origin == Origin::Seen ? seen_ids : not_seen_ids).insert(r.model_id);
    if (seen_ids.empty() || not_seen_ids.empty())
        throw DegenerateData("split_models_by_id: need both origins");

    std::mt19937_64 rng(seed);
    ModelSplit split;
    for (const auto* pool : {&seen_ids, &not_seen_ids}) {
        std::vector<int> ids(pool->begin(), pool->end());
        if (ids.size() < 2)
            throw DegenerateData("split_models_by_id: need >= 2 models per pool");
        std::shuffle(ids.begin(), ids.end(), rng);
        auto n_train = static_cast<std::size_t>(std::llround(train_fraction * ids.size()));
        n_train = std::clamp<std::size_t>(n_train, 1, ids.size() - 1);
        split.train_ids.insert(ids.begin(), ids.begin() + n_train);
        split.test_ids.insert(ids.begin() + n_train, ids.end());
    }
    return split;
}

AdvantageReport per_class_advantage(const std::vector<LogitRecord>& records,
                                    const std::vector<AttackKind>& kinds,
                                    const std::set<int>& deleted_classes,
                                    double model_split, std::uint64_t seed) {
    const ModelSplit split = split_models_by_id(records, model_split, seed);

    std::map<int, std::vector<LogitRecord>> train_by_class, test_by_class;
    for (const auto& r : records) {
        if (split.train_ids.count(r.model_id))
            train_by_class[r.true_class].push_back(r);
        else
            test_by_class[r.true_class].push_back(r);
    }

    AdvantageReport report;
    for (AttackKind kind : kinds) {
        double deleted_sum = 0.0, retained_sum = 0.0;
        std::size_t deleted_n = 0, retained_n = 0;
        for (const auto& [cls, train] : train_by_class) {
            if (!test_by_class.count(cls))
                throw DegenerateData("per_class_advantage: class " + std::to_string(cls) +
                                     " has no test-side records");
            AttackConfig cfg;
            cfg.seed = seed + 7919 * std::uint64_t(cls) + std::uint64_t(kind);
            const auto attack = fit_attack(kind, train, cfg);
            const double adv = classifier_advantage(*attack, test_by_class.at(cls));
            report.rows.push_back({kind, "class_" + std::to_string(cls), adv});
            if (deleted_classes.count(cls)) {
                deleted_sum += adv;
                ++deleted_n;
            } else {
                retained_sum += adv;
                ++retained_n;
            }
        }
        if (deleted_n > 0)
            report.rows.push_back({kind, "unlearned", deleted_sum / double(deleted_n)});
        if (retained_n > 0)
            report.rows.push_back({kind, "remaining", retained_sum / double(retained_n)});
    }
    return report;
}

} // namespace unlearn
