#pragma once

#include <cstdint>
#include <random>
#include <set>
#include <string>
#include <vector>

#include "unlearn/dataset.hpp"
#include "unlearn/matrix.hpp"
#include "unlearn/mlp.hpp"

namespace unlearn {

/// Pass as the sample cap to estimate class means from all available rows.
inline constexpr std::size_t kFullSample = static_cast<std::size_t>(-1);

/// Rule for the replacement column of a deleted class.
enum class Strategy { Naive, Normalization, Randomization, Zeroing };

std::string to_string(Strategy s);
Strategy strategy_from_string(const std::string& name);

/// The k x k matrix whose column j is the mean logit vector of class j,
/// plus the per-class sample counts used for the estimate.
struct ClassMeans {
    Matrix a;
    std::vector<std::size_t> counts;

    int num_classes() const { return static_cast<int>(a.cols()); }
};

/// A built filtration: deleted classes, the replacement matrix B and the
/// filtration matrix F = B * A^-1, satisfying F*a_j == column j of B.
struct FiltrationPlan {
    std::vector<int> deleted; // ascending original class indices
    Strategy strategy = Strategy::Naive;
    std::uint64_t seed = 0;
    Matrix b; // (k-|C|) x k
    Matrix f; // (k-|C|) x k
};

/// Drops the coordinates listed in `deleted`, preserving the order of the
/// rest.
std::vector<double> projection(std::span<const double> v, const std::set<int>& deleted);

/// Mean pre-softmax logits per class over sample_per_class(ds, s, seed).
ClassMeans estimate_class_means(const MlpClassifier& model, const Dataset& ds,
                                std::size_t s, std::uint64_t seed);

/// Replacement column z for deleted class j, by strategy. `rng` is consumed
/// only by Randomization.
std::vector<double> replacement_column(const ClassMeans& means, int j,
                                       const std::set<int>& deleted, Strategy strategy,
                                       std::mt19937_64& rng);

/// Assembles B (projected retained columns, replacement columns for deleted
/// ones) and F = B * A^-1. One plan covers any number of concurrent
/// deletions with a single inversion.
FiltrationPlan build_filtration(const ClassMeans& means, const std::set<int>& deleted,
                                Strategy strategy, std::uint64_t seed);

/// Absorbs the plan into the output layer: W_z = F*W, b_z = F*b. The new
/// model predicts F * (old logits) and has k-|C| outputs.
MlpClassifier apply_filtration(const FiltrationPlan& plan, const MlpClassifier& model);

/// estimate_class_means + build_filtration + apply_filtration in one call.
MlpClassifier unlearn_classes(const MlpClassifier& model, const Dataset& ds,
                              const std::set<int>& deleted, Strategy strategy,
                              std::size_t s, std::uint64_t seed);

} // namespace unlearn
