#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "unlearn/dataset.hpp"
#include "unlearn/matrix.hpp"

namespace unlearn {

/// One dense layer: weights is (out x in), bias has length out.
struct Layer {
    Matrix weights;
    std::vector<double> bias;

    bool operator==(const Layer&) const = default;
};

/// Feedforward classifier h(x) = W*f(x) + b with rectifier hidden layers and
/// a raw-logit output layer. The penultimate activations are the features
/// f(x); for a single-layer net f is the identity.
class MlpClassifier {
public:
    MlpClassifier() = default;
    MlpClassifier(std::vector<std::size_t> layer_dims, std::vector<Layer> layers);

    const std::vector<std::size_t>& layer_dims() const { return layer_dims_; }
    std::size_t input_dim() const { return layer_dims_.front(); }
    std::size_t output_dim() const { return layer_dims_.back(); }
    std::size_t feature_dim() const { return layer_dims_[layer_dims_.size() - 2]; }
    std::size_t num_layers() const { return layers_.size(); }

    const std::vector<Layer>& layers() const { return layers_; }
    const Layer& layer(std::size_t i) const { return layers_[i]; }
    const Layer& output_layer() const { return layers_.back(); }

    bool operator==(const MlpClassifier&) const = default;

private:
    std::vector<std::size_t> layer_dims_;
    std::vector<Layer> layers_;
};

struct TrainConfig {
    double learning_rate = 0.01;
    double momentum = 0.9;
    int epochs = 10;
    int batch_size = 32;
    std::uint64_t seed = 0;

    bool operator==(const TrainConfig&) const = default;
};

struct ForwardResult {
    std::vector<double> features; // f(x), penultimate activations
    std::vector<double> logits;   // W*f(x) + b, no softmax
};

/// He-initialized weights (zero-mean Gaussian, sd sqrt(2/fan_in)), zero
/// biases. Deterministic given seed.
MlpClassifier init_model(const std::vector<std::size_t>& layer_dims, std::uint64_t seed);

ForwardResult forward(const MlpClassifier& model, std::span<const double> x);

/// Numerically stable softmax (max subtraction).
std::vector<double> softmax(std::span<const double> logits);

/// Minibatch SGD with momentum on mean cross-entropy. Shuffles each epoch
/// from cfg.seed; two calls with identical arguments produce bitwise
/// identical parameters.
MlpClassifier train(MlpClassifier model, const Dataset& ds, const TrainConfig& cfg);

struct Evaluation {
    double accuracy = 0.0;
    double loss = 0.0; // mean cross-entropy
};

Evaluation accuracy_and_loss(const MlpClassifier& model, const Dataset& ds);

/// Argmax with ties broken towards the lowest index.
int predict_class(const MlpClassifier& model, std::span<const double> x);

enum class Objective { Logit, LogProb };

/// Exact gradient of logit_c(x) or log softmax_c(x) with respect to x.
std::vector<double> input_gradient(const MlpClassifier& model, std::span<const double> x,
                                   int target_class, Objective objective);

/// Shares all feature layers and swaps the logit layer; the previous output
/// weights are not retained in the returned model.
MlpClassifier replace_output_layer(MlpClassifier model, Matrix weights,
                                   std::vector<double> bias);

} // namespace unlearn
