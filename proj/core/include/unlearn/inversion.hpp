#pragma once

#include <optional>
#include <vector>

#include "unlearn/mlp.hpp"

namespace unlearn {

/// Projected gradient ascent on the input space.
struct InversionConfig {
    int target_class = 0;
    Objective objective = Objective::LogProb;
    int steps = 1000;
    double step_size = 0.1;
    std::optional<std::vector<double>> init; // default: constant 0.5
    bool box_clamp = true;                   // keep iterates in [0,1]^d
};

struct InversionResult {
    std::vector<double> input;
    std::vector<double> trace; // objective per iterate, steps+1 entries
};

/// Iterates x <- clamp(x + step_size * grad objective(x)); returns the final
/// iterate and the objective value at every iterate (including the start).
InversionResult invert_class(const MlpClassifier& model, const InversionConfig& cfg);

} // namespace unlearn
