#include "unlearn/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "unlearn/errors.hpp"

namespace unlearn {

MlpClassifier::MlpClassifier(std::vector<std::size_t> layer_dims, std::vector<Layer> layers)
    : layer_dims_(std::move(layer_dims)), layers_(std::move(layers)) {
    if (layer_dims_.size() < 2 || layers_.size() != layer_dims_.size() - 1)
        throw InvalidParam("model needs layer_dims of length >= 2 with one layer per step");
    for (std::size_t i = 0; i < layers_.size(); ++i) {
        if (layers_[i].weights.rows() != layer_dims_[i + 1] ||
            layers_[i].weights.cols() != layer_dims_[i] ||
            layers_[i].bias.size() != layer_dims_[i + 1])
            throw ShapeMismatch("layer " + std::to_string(i) + " does not match layer_dims");
    }
    if (output_dim() < 2)
        throw InvalidParam("model needs at least 2 outputs");
}

MlpClassifier init_model(const std::vector<std::size_t>& layer_dims, std::uint64_t seed) {
    if (layer_dims.size() < 2)
        throw InvalidParam("init_model: need at least input and output dims");
    for (std::size_t d : layer_dims)
        if (d == 0) throw InvalidParam("init_model: zero layer width");

    std::mt19937_64 rng(seed);
    std::vector<Layer> layers;
    for (std::size_t i = 0; i + 1 < layer_dims.size(); ++i) {
        const std::size_t fan_in = layer_dims[i];
        const std::size_t fan_out = layer_dims[i + 1];
        std::normal_distribution<double> dist(0.0, std::sqrt(2.0 / double(fan_in)));
        Layer layer{Matrix(fan_out, fan_in), std::vector<double>(fan_out, 0.0)};
        for (std::size_t r = 0; r < fan_out; ++r)
            for (std::size_t c = 0; c < fan_in; ++c)
                layer.weights(r, c) = dist(rng);
        layers.push_back(std::move(layer));
    }
    return MlpClassifier(layer_dims, std::move(layers));
}

namespace {

// Forward pass keeping pre-activations and activations of every layer,
// needed by backprop. activations[0] is the input itself.
struct Trace {
    std::vector<std::vector<double>> pre;         // per layer, before ReLU (logits for last)
    std::vector<std::vector<double>> activations; // activations[i] feeds layer i
};

Trace traced_forward(const std::vector<Layer>& layers, std::span<const double> x) {
    Trace t;
    t.activations.emplace_back(x.begin(), x.end());
    for (std::size_t l = 0; l < layers.size(); ++l) {
        std::vector<double> z = matvec(layers[l].weights, t.activations.back());
        for (std::size_t i = 0; i < z.size(); ++i) z[i] += layers[l].bias[i];
        t.pre.push_back(z);
        if (l + 1 < layers.size()) {
            for (double& v : z) v = std::max(0.0, v);
            t.activations.push_back(std::move(z));
        }
    }
    return t;
}

// One step of the backward pass: propagate the gradient at the output of
// layer l to its input, applying the ReLU mask of the layer below.
std::vector<double> backprop_step(const std::vector<Layer>& layers, const Trace& t,
                                  std::size_t l, const std::vector<double>& grad) {
    std::vector<double> down(layers[l].weights.cols(), 0.0);
    for (std::size_t r = 0; r < layers[l].weights.rows(); ++r) {
        const double g = grad[r];
        if (g == 0.0) continue;
        const auto row = layers[l].weights.row(r);
        for (std::size_t c = 0; c < row.size(); ++c) down[c] += g * row[c];
    }
    if (l > 0) {
        const auto& pre = t.pre[l - 1];
        for (std::size_t i = 0; i < down.size(); ++i)
            if (pre[i] <= 0.0) down[i] = 0.0;
    }
    return down;
}

} // namespace

ForwardResult forward(const MlpClassifier& model, std::span<const double> x) {
    if (x.size() != model.input_dim())
        throw ShapeMismatch("forward: input length does not match model");
    Trace t = traced_forward(model.layers(), x);
    return {std::move(t.activations.back()), std::move(t.pre.back())};
}

std::vector<double> softmax(std::span<const double> logits) {
    const double hi = *std::max_element(logits.begin(), logits.end());
    std::vector<double> out(logits.size());
    double sum = 0.0;
    for (std::size_t i = 0; i < logits.size(); ++i) {
        out[i] = std::exp(logits[i] - hi);
        sum += out[i];
    }
    for (double& v : out) v /= sum;
    return out;
}

MlpClassifier train(MlpClassifier model, const Dataset& ds, const TrainConfig& cfg) {
    if (ds.num_classes != static_cast<int>(model.output_dim()))
        throw ShapeMismatch("train: dataset classes do not match model outputs");
    if (ds.dim() != model.input_dim())
        throw ShapeMismatch("train: dataset dim does not match model input");
    if (!(cfg.learning_rate > 0.0))
        throw InvalidParam("train: learning_rate must be positive");
    if (cfg.batch_size < 1)
        throw InvalidParam("train: batch_size must be >= 1");

    const std::size_t L = model.num_layers();
    std::vector<Layer> layers = model.layers();

    std::vector<Matrix> grad_w(L), vel_w(L);
    std::vector<std::vector<double>> grad_b(L), vel_b(L);
    for (std::size_t l = 0; l < L; ++l) {
        grad_w[l] = Matrix(layers[l].weights.rows(), layers[l].weights.cols());
        vel_w[l] = grad_w[l];
        grad_b[l].assign(layers[l].bias.size(), 0.0);
        vel_b[l] = grad_b[l];
    }

    std::mt19937_64 rng(cfg.seed);
    std::vector<std::size_t> order(ds.size());
    std::iota(order.begin(), order.end(), 0);

    for (int epoch = 0; epoch < cfg.epochs; ++epoch) {
        std::shuffle(order.begin(), order.end(), rng);
        for (std::size_t start = 0; start < order.size();
             start += static_cast<std::size_t>(cfg.batch_size)) {
            const std::size_t stop =
                std::min(order.size(), start + static_cast<std::size_t>(cfg.batch_size));
            const double inv_n = 1.0 / double(stop - start);

            for (std::size_t l = 0; l < L; ++l) {
                std::fill(grad_b[l].begin(), grad_b[l].end(), 0.0);
                grad_w[l] = Matrix(grad_w[l].rows(), grad_w[l].cols());
            }

            for (std::size_t s = start; s < stop; ++s) {
                const std::size_t row = order[s];
                Trace t = traced_forward(layers, ds.input(row));

                // d(mean CE)/d(logits) = (softmax - onehot) / batch
                std::vector<double> delta = softmax(t.pre.back());
                delta[ds.labels[row]] -= 1.0;
                for (double& v : delta) v *= inv_n;

                for (std::size_t l = L; l-- > 0;) {
                    const auto& input = t.activations[l];
                    for (std::size_t r = 0; r < grad_w[l].rows(); ++r) {
                        const double g = delta[r];
                        if (g == 0.0) continue;
                        grad_b[l][r] += g;
                        for (std::size_t c = 0; c < grad_w[l].cols(); ++c)
                            grad_w[l](r, c) += g * input[c];
                    }
                    if (l == 0) break;
                    delta = backprop_step(layers, t, l, delta);
                }
            }

            for (std::size_t l = 0; l < L; ++l) {
                for (std::size_t r = 0; r < layers[l].weights.rows(); ++r) {
                    for (std::size_t c = 0; c < layers[l].weights.cols(); ++c) {
                        double& v = vel_w[l](r, c);
                        v = cfg.momentum * v - cfg.learning_rate * grad_w[l](r, c);
                        layers[l].weights(r, c) += v;
                    }
                    double& vb = vel_b[l][r];
                    vb = cfg.momentum * vb - cfg.learning_rate * grad_b[l][r];
                    layers[l].bias[r] += vb;
                }
            }
        }
    }
    return MlpClassifier(model.layer_dims(), std::move(layers));
}

Evaluation accuracy_and_loss(const MlpClassifier& model, const Dataset& ds) {
    if (ds.dim() != model.input_dim() ||
        ds.num_classes != static_cast<int>(model.output_dim()))
        throw ShapeMismatch("accuracy_and_loss: dataset does not match model");
    if (ds.size() == 0)
        throw EmptyInput("accuracy_and_loss: empty dataset");

    std::size_t correct = 0;
    double loss = 0.0;
    for (std::size_t i = 0; i < ds.size(); ++i) {
        const auto logits = forward(model, ds.input(i)).logits;
        int best = 0;
        for (std::size_t j = 1; j < logits.size(); ++j)
            if (logits[j] > logits[best]) best = static_cast<int>(j);
        if (best == ds.labels[i]) ++correct;

        // -log softmax_label without forming the softmax
        const double hi = *std::max_element(logits.begin(), logits.end());
        double sum = 0.0;
        for (double v : logits) sum += std::exp(v - hi);
        loss -= logits[ds.labels[i]] - hi - std::log(sum);
    }
    return {double(correct) / double(ds.size()), loss / double(ds.size())};
}

int predict_class(const MlpClassifier& model, std::span<const double> x) {
    const auto logits = forward(model, x).logits;
    int best = 0;
    for (std::size_t j = 1; j < logits.size(); ++j)
        if (logits[j] > logits[best]) best = static_cast<int>(j);
    return best;
}

std::vector<double> input_gradient(const MlpClassifier& model, std::span<const double> x,
                                   int target_class, Objective objective) {
    if (target_class < 0 || target_class >= static_cast<int>(model.output_dim()))
        throw InvalidClass("input_gradient: target class out of range");
    if (x.size() != model.input_dim())
        throw ShapeMismatch("input_gradient: input length does not match model");
    Trace t = traced_forward(model.layers(), x);

    std::vector<double> grad(model.output_dim(), 0.0);
    if (objective == Objective::Logit) {
        grad[target_class] = 1.0;
    } else {
        // d log softmax_c / d logits = e_c - softmax
        grad = softmax(t.pre.back());
        for (double& v : grad) v = -v;
        grad[target_class] += 1.0;
    }
    for (std::size_t l = model.num_layers(); l-- > 0;)
        grad = backprop_step(model.layers(), t, l, grad);
    return grad;
}

MlpClassifier replace_output_layer(MlpClassifier model, Matrix weights,
                                   std::vector<double> bias) {
    if (weights.cols() != model.feature_dim())
        throw ShapeMismatch("replace_output_layer: weights do not match feature dim");
    if (bias.size() != weights.rows())
        throw ShapeMismatch("replace_output_layer: bias does not match weights");

    std::vector<std::size_t> dims = model.layer_dims();
    dims.back() = weights.rows();
    std::vector<Layer> layers = model.layers();
    layers.back() = Layer{std::move(weights), std::move(bias)};
    return MlpClassifier(std::move(dims), std::move(layers));
}

} // namespace unlearn
