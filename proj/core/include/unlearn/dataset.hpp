#pragma once

#include <cstdint>
#include <set>
#include <span>
#include <string>
#include <vector>

#include "unlearn/matrix.hpp"

namespace unlearn {

/// Labeled input vectors in [0,1]^d. Immutable after construction.
struct Dataset {
    Matrix inputs;              // n x d
    std::vector<int> labels;    // length n, values in [0, num_classes)
    int num_classes = 0;
    std::string name;

    // Image geometry when the rows come from a raster source
    // (rows*cols == d); 1 x d for flat feature vectors.
    int img_rows = 0;
    int img_cols = 0;

    std::size_t size() const { return inputs.rows(); }
    std::size_t dim() const { return inputs.cols(); }
    std::span<const double> input(std::size_t i) const { return inputs.row(i); }
};

/// k Gaussian blobs in [0,1]^d: centers uniform in [0.2,0.8]^d, points
/// N(center, spread^2 I) clamped to the unit box. Deterministic given seed.
Dataset synth_blobs(int k, int d, int per_class, double spread, std::uint64_t seed);

/// Drops rows whose label is in `deleted` and remaps the remaining labels to
/// 0..k-|deleted|-1, preserving the ascending order of the original indices.
Dataset remove_classes(const Dataset& ds, const std::set<int>& deleted);

/// Uniformly samples min(s, available) rows per class without replacement.
/// Row order of the result follows the original dataset order.
Dataset sample_per_class(const Dataset& ds, std::size_t s, std::uint64_t seed);

/// Splits per class: the first n_train rows of each class go to the first
/// dataset, the rest to the second. Deterministic.
std::pair<Dataset, Dataset> split_per_class(const Dataset& ds, std::size_t n_train);

/// New label index of a retained original class after deleting `deleted`.
int remap_label(int original, const std::set<int>& deleted);

} // namespace unlearn
