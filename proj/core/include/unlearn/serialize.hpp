#pragma once

#include <filesystem>

#include "unlearn/filtration.hpp"
#include "unlearn/mlp.hpp"

namespace unlearn {

// Model file: a single JSON document
//   {format_version: 1, layer_dims, activation: "relu",
//    layers: [{rows, cols, weights: <flat row-major>, bias}]}
// Weights survive a save/load round trip exactly.

void save_model(const MlpClassifier& model, const std::filesystem::path& path);
MlpClassifier load_model(const std::filesystem::path& path);

// Plan file: {deleted, strategy, seed, b, f} with matrices stored as
// {rows, cols, entries}.

void save_plan(const FiltrationPlan& plan, const std::filesystem::path& path);
FiltrationPlan load_plan(const std::filesystem::path& path);

} // namespace unlearn
