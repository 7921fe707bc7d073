#include "unlearn/filtration.hpp"

#include <algorithm>

#include "unlearn/errors.hpp"

namespace unlearn {

std::string to_string(Strategy s) {
    switch (s) {
        case Strategy::Naive: return "naive";
        case Strategy::Normalization: return "normalization";
        case Strategy::Randomization: return "randomization";
        case Strategy::Zeroing: return "zeroing";
    }
    throw InvalidParam("unknown strategy");
}

Strategy strategy_from_string(const std::string& name) {
    if (name == "naive") return Strategy::Naive;
    if (name == "normalization") return Strategy::Normalization;
    if (name == "randomization") return Strategy::Randomization;
    if (name == "zeroing") return Strategy::Zeroing;
    throw InvalidParam("unknown strategy '" + name + "'");
}

std::vector<double> projection(std::span<const double> v, const std::set<int>& deleted) {
    const int k = static_cast<int>(v.size());
    for (int c : deleted)
        if (c < 0 || c >= k) throw InvalidClassSet("projection: class index out of range");
    if (static_cast<int>(deleted.size()) >= k)
        throw InvalidClassSet("projection: cannot drop every coordinate");

    std::vector<double> out;
    out.reserve(v.size() - deleted.size());
    for (int i = 0; i < k; ++i)
        if (!deleted.count(i)) out.push_back(v[i]);
    return out;
}

ClassMeans estimate_class_means(const MlpClassifier& model, const Dataset& ds,
                                std::size_t s, std::uint64_t seed) {
    const int k = static_cast<int>(model.output_dim());
    if (ds.num_classes != k)
        throw ShapeMismatch("estimate_class_means: dataset classes do not match model");

    const Dataset sampled = sample_per_class(ds, s, seed);

    std::vector<std::vector<double>> sums(k, std::vector<double>(k, 0.0));
    std::vector<std::size_t> counts(k, 0);
    for (std::size_t i = 0; i < sampled.size(); ++i) {
        const auto logits = forward(model, sampled.input(i)).logits;
        const int label = sampled.labels[i];
        for (int j = 0; j < k; ++j) sums[label][j] += logits[j];
        ++counts[label];
    }
    for (int c = 0; c < k; ++c)
        if (counts[c] == 0)
            throw MissingClass("estimate_class_means: class " + std::to_string(c) +
                               " has no samples");

    ClassMeans means;
    means.a = Matrix(k, k);
    means.counts = counts;
    for (int c = 0; c < k; ++c)
        for (int j = 0; j < k; ++j)
            means.a(j, c) = sums[c][j] / double(counts[c]);
    return means;
}

std::vector<double> replacement_column(const ClassMeans& means, int j,
                                       const std::set<int>& deleted, Strategy strategy,
                                       std::mt19937_64& rng) {
    if (!deleted.count(j))
        throw InvalidClass("replacement_column: class is not being deleted");
    const int k = means.num_classes();
    const std::size_t out_dim = k - deleted.size();

    switch (strategy) {
        case Strategy::Naive:
            return projection(means.a.column(j), deleted);

        case Strategy::Normalization: {
            // Shift the projected column so its mean matches the grand mean
            // of the retained projected columns.
            std::vector<double> z = projection(means.a.column(j), deleted);
            double own_mean = 0.0;
            for (double v : z) own_mean += v;
            own_mean /= double(z.size());

            double grand = 0.0;
            std::size_t entries = 0;
            for (int r = 0; r < k; ++r) {
                if (deleted.count(r)) continue;
                for (double v : projection(means.a.column(r), deleted)) {
                    grand += v;
                    ++entries;
                }
            }
            grand /= double(entries);

            for (double& v : z) v += grand - own_mean;
            return z;
        }

        case Strategy::Randomization: {
            std::normal_distribution<double> dist(0.0, 1.0);
            std::vector<double> z(out_dim);
            for (double& v : z) v = dist(rng);
            return z;
        }

        case Strategy::Zeroing:
            return std::vector<double>(out_dim, 0.0);
    }
    throw InvalidParam("unknown strategy");
}

FiltrationPlan build_filtration(const ClassMeans& means, const std::set<int>& deleted,
                                Strategy strategy, std::uint64_t seed) {
    const int k = means.num_classes();
    for (int c : deleted)
        if (c < 0 || c >= k)
            throw InvalidClassSet("build_filtration: class index out of range");
    if (deleted.empty() || static_cast<int>(deleted.size()) >= k)
        throw InvalidClassSet("build_filtration: need 0 < |C| < k deleted classes");

    FiltrationPlan plan;
    plan.deleted.assign(deleted.begin(), deleted.end());
    plan.strategy = strategy;
    plan.seed = seed;

    // One generator per plan, consumed in ascending deleted-index order.
    std::mt19937_64 rng(seed);
    plan.b = Matrix(k - deleted.size(), k);
    for (int c = 0; c < k; ++c) {
        const std::vector<double> col =
            deleted.count(c) ? replacement_column(means, c, deleted, strategy, rng)
                             : projection(means.a.column(c), deleted);
        plan.b.set_column(c, col);
    }

    Matrix a_inv;
    try {
        a_inv = invert(means.a);
    } catch (const SingularMatrix&) {
        throw SingularMatrix("build_filtration: class means linearly dependent");
    }
    plan.f = matmul(plan.b, a_inv);
    return plan;
}

MlpClassifier apply_filtration(const FiltrationPlan& plan, const MlpClassifier& model) {
    if (plan.f.cols() != model.output_dim())
        throw ShapeMismatch("apply_filtration: plan was built for a different class count");
    Matrix new_w = matmul(plan.f, model.output_layer().weights);
    std::vector<double> new_b = matvec(plan.f, model.output_layer().bias);
    return replace_output_layer(model, std::move(new_w), std::move(new_b));
}

MlpClassifier unlearn_classes(const MlpClassifier& model, const Dataset& ds,
                              const std::set<int>& deleted, Strategy strategy,
                              std::size_t s, std::uint64_t seed) {
    const ClassMeans means = estimate_class_means(model, ds, s, seed);
    const FiltrationPlan plan = build_filtration(means, deleted, strategy, seed);
    return apply_filtration(plan, model);
}

} // namespace unlearn
