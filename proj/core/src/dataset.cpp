#include "unlearn/dataset.hpp"

#include <algorithm>
#include <numeric>
#include <random>

#include "unlearn/errors.hpp"

namespace unlearn {

Dataset synth_blobs(int k, int d, int per_class, double spread, std::uint64_t seed) {
    if (k < 3) throw InvalidParam("synth_blobs: need k >= 3 classes");
    if (d < 1) throw InvalidParam("synth_blobs: need d >= 1");
    if (per_class < 1) throw InvalidParam("synth_blobs: need per_class >= 1");
    if (!(spread > 0.0)) throw InvalidParam("synth_blobs: spread must be positive");

    std::mt19937_64 rng(seed);
    std::uniform_real_distribution<double> center_dist(0.2, 0.8);
    std::normal_distribution<double> noise(0.0, spread);

    Matrix centers(static_cast<std::size_t>(k), static_cast<std::size_t>(d));
    for (int c = 0; c < k; ++c)
        for (int j = 0; j < d; ++j)
            centers(c, j) = center_dist(rng);

    const std::size_t n = static_cast<std::size_t>(k) * per_class;
    Dataset ds;
    ds.inputs = Matrix(n, static_cast<std::size_t>(d));
    ds.labels.resize(n);
    ds.num_classes = k;
    ds.name = "synth";
    ds.img_rows = 1;
    ds.img_cols = d;

    std::size_t row = 0;
    for (int c = 0; c < k; ++c) {
        for (int p = 0; p < per_class; ++p, ++row) {
            for (int j = 0; j < d; ++j)
                ds.inputs(row, j) = std::clamp(centers(c, j) + noise(rng), 0.0, 1.0);
            ds.labels[row] = c;
        }
    }
    return ds;
}

namespace {

void check_class_set(const std::set<int>& deleted, int k) {
    for (int c : deleted)
        if (c < 0 || c >= k)
            throw InvalidClassSet("class index out of range");
    if (static_cast<int>(deleted.size()) >= k)
        throw InvalidClassSet("cannot delete every class");
}

Dataset select_rows(const Dataset& ds, const std::vector<std::size_t>& rows) {
    Dataset out;
    out.inputs = Matrix(rows.size(), ds.dim());
    out.labels.resize(rows.size());
    out.num_classes = ds.num_classes;
    out.name = ds.name;
    out.img_rows = ds.img_rows;
    out.img_cols = ds.img_cols;
    for (std::size_t i = 0; i < rows.size(); ++i) {
        const auto src = ds.input(rows[i]);
        for (std::size_t j = 0; j < ds.dim(); ++j) out.inputs(i, j) = src[j];
        out.labels[i] = ds.labels[rows[i]];
    }
    return out;
}

} // namespace

int remap_label(int original, const std::set<int>& deleted) {
    int idx = 0;
    for (int c = 0; c < original; ++c)
        if (!deleted.count(c)) ++idx;
    return idx;
}

Dataset remove_classes(const Dataset& ds, const std::set<int>& deleted) {
    check_class_set(deleted, ds.num_classes);

    std::vector<std::size_t> keep;
    keep.reserve(ds.size());
    for (std::size_t i = 0; i < ds.size(); ++i)
        if (!deleted.count(ds.labels[i])) keep.push_back(i);

    Dataset out = select_rows(ds, keep);
    for (int& label : out.labels) label = remap_label(label, deleted);
    out.num_classes = ds.num_classes - static_cast<int>(deleted.size());
    return out;
}

Dataset sample_per_class(const Dataset& ds, std::size_t s, std::uint64_t seed) {
    std::vector<std::vector<std::size_t>> by_class(ds.num_classes);
    for (std::size_t i = 0; i < ds.size(); ++i)
        by_class[ds.labels[i]].push_back(i);
    for (int c = 0; c < ds.num_classes; ++c)
        if (by_class[c].empty())
            throw MissingClass("sample_per_class: class " + std::to_string(c) + " has no examples");

    std::mt19937_64 rng(seed);
    std::vector<std::size_t> chosen;
    for (int c = 0; c < ds.num_classes; ++c) {
        auto& idx = by_class[c];
        if (s < idx.size()) {
            std::shuffle(idx.begin(), idx.end(), rng);
            idx.resize(s);
        }
        chosen.insert(chosen.end(), idx.begin(), idx.end());
    }
    std::sort(chosen.begin(), chosen.end());
    return select_rows(ds, chosen);
}

std::pair<Dataset, Dataset> split_per_class(const Dataset& ds, std::size_t n_train) {
    std::vector<std::size_t> train_rows, test_rows;
    std::vector<std::size_t> seen(ds.num_classes, 0);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        if (seen[ds.labels[i]]++ < n_train)
            train_rows.push_back(i);
        else
            test_rows.push_back(i);
    }
    return {select_rows(ds, train_rows), select_rows(ds, test_rows)};
}

} // namespace unlearn
