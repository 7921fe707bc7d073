#include "unlearn/shadow.hpp"

#include <atomic>
#include <thread>

#include "unlearn/errors.hpp"

namespace unlearn {

namespace {

void check_params(const ShadowParams& params) {
    if (params.models_per_pool < 2)
        throw InvalidParam("shadow: need at least 2 models per pool");
    if (!(params.model_split > 0.0 && params.model_split < 1.0))
        throw InvalidParam("shadow: model_split must be in (0,1)");
    if (params.layer_dims.size() < 2)
        throw InvalidParam("shadow: layer_dims missing");
}

// Runs fn(i) for i in [0, count), possibly on several threads. Each index
// is processed exactly once; results must be written to disjoint slots.
template <typename Fn>
void parallel_for(int count, int threads, Fn&& fn) {
    if (threads <= 1) {
        for (int i = 0; i < count; ++i) fn(i);
        return;
    }
    std::atomic<int> next{0};
    auto worker = [&] {
        for (int i = next.fetch_add(1); i < count; i = next.fetch_add(1)) fn(i);
    };
    std::vector<std::jthread> pool;
    for (int t = 0; t < std::min(threads, count); ++t)
        pool.emplace_back(worker);
}

} // namespace

ModelPools train_model_pools(const Dataset& train_ds, const ShadowParams& params) {
    check_params(params);

    const Dataset reduced = remove_classes(train_ds, params.deleted);
    std::vector<std::size_t> reduced_dims = params.layer_dims;
    reduced_dims.back() = static_cast<std::size_t>(reduced.num_classes);

    const int N = params.models_per_pool;
    ModelPools pools;
    pools.full.resize(N);
    pools.retrained.resize(N);
    if (params.baseline_pool) pools.baseline.resize(N);

    const int total = params.baseline_pool ? 3 * N : 2 * N;
    parallel_for(total, params.threads, [&](int m) {
        TrainConfig cfg = params.train;
        cfg.seed = params.base_seed + std::uint64_t(m);
        if (m < N) {
            pools.full[m] = train(init_model(params.layer_dims, cfg.seed), train_ds, cfg);
        } else {
            auto& slot = m < 2 * N ? pools.retrained[m - N] : pools.baseline[m - 2 * N];
            slot = train(init_model(reduced_dims, cfg.seed), reduced, cfg);
        }
    });
    return pools;
}

std::vector<LogitRecord> records_from_pools(const ModelPools& pools,
                                            const Dataset& train_ds,
                                            const Dataset& test_ds,
                                            const ShadowParams& params) {
    check_params(params);
    const int N = params.models_per_pool;
    if (static_cast<int>(pools.full.size()) != N ||
        static_cast<int>(pools.retrained.size()) != N)
        throw ShapeMismatch("records_from_pools: pools do not match models_per_pool");

    const Dataset& estimation_ds = params.estimate_on_test ? test_ds : train_ds;

    // Unlearned view of the full pool; per-model seed keeps estimation
    // sampling and randomization reproducible.
    std::vector<MlpClassifier> filtered(N);
    parallel_for(N, params.threads, [&](int m) {
        filtered[m] = unlearn_classes(pools.full[m], estimation_ds, params.deleted,
                                      params.strategy, params.sample_cap,
                                      params.base_seed + std::uint64_t(m));
    });

    const std::size_t t = test_ds.size();
    const int total_models = N * (pools.baseline.empty() ? 2 : 3);
    std::vector<LogitRecord> records(std::size_t(total_models) * t);

    parallel_for(total_models, params.threads, [&](int m) {
        const MlpClassifier& model = m < N ? filtered[m]
                                   : m < 2 * N ? pools.retrained[m - N]
                                               : pools.baseline[m - 2 * N];
        const Origin origin = m < N ? Origin::Seen : Origin::NotSeen;
        for (std::size_t i = 0; i < t; ++i) {
            LogitRecord& rec = records[std::size_t(m) * t + i];
            rec.logits = forward(model, test_ds.input(i)).logits;
            rec.true_class = test_ds.labels[i];
            rec.origin = origin;
            rec.model_id = m;
        }
    });
    return records;
}

std::vector<LogitRecord> shadow_experiment(const Dataset& train_ds, const Dataset& test_ds,
                                           const ShadowParams& params) {
    const ModelPools pools = train_model_pools(train_ds, params);
    return records_from_pools(pools, train_ds, test_ds, params);
}

RecordGroups split_baseline_records(const std::vector<LogitRecord>& records,
                                    int models_per_pool) {
    RecordGroups groups;
    for (const auto& rec : records)
        (rec.model_id < 2 * models_per_pool ? groups.primary : groups.baseline)
            .push_back(rec);
    return groups;
}

LabelChangeReport label_change_report(const MlpClassifier& reference,
                                      const MlpClassifier& other, const Dataset& test_ds,
                                      const std::set<int>& deleted) {
    if (reference.output_dim() != other.output_dim())
        throw ShapeMismatch("label_change_report: models have different output counts");

    std::size_t n_all = 0, n_changed = 0;
    std::size_t n_del = 0, n_del_changed = 0;
    std::size_t n_cor = 0, n_cor_changed = 0;

    for (std::size_t i = 0; i < test_ds.size(); ++i) {
        const int ref_label = predict_class(reference, test_ds.input(i));
        const int other_label = predict_class(other, test_ds.input(i));
        const bool changed = ref_label != other_label;

        ++n_all;
        n_changed += changed;
        if (deleted.count(test_ds.labels[i])) {
            ++n_del;
            n_del_changed += changed;
        } else if (ref_label == remap_label(test_ds.labels[i], deleted)) {
            ++n_cor;
            n_cor_changed += changed;
        }
    }

    LabelChangeReport report;
    report.all = n_all ? double(n_changed) / double(n_all) : 0.0;
    report.unlearned = n_del ? double(n_del_changed) / double(n_del) : 0.0;
    report.correct_remaining = n_cor ? double(n_cor_changed) / double(n_cor) : 0.0;
    return report;
}

} // namespace unlearn
