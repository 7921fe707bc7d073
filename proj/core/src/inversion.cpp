#include "unlearn/inversion.hpp"

#include <algorithm>
#include <cmath>

#include "unlearn/errors.hpp"

namespace unlearn {

namespace {

double objective_value(const MlpClassifier& model, std::span<const double> x,
                       const InversionConfig& cfg) {
    const auto logits = forward(model, x).logits;
    if (cfg.objective == Objective::Logit)
        return logits[cfg.target_class];
    const double hi = *std::max_element(logits.begin(), logits.end());
    double sum = 0.0;
    for (double v : logits) sum += std::exp(v - hi);
    return logits[cfg.target_class] - hi - std::log(sum);
}

} // namespace

InversionResult invert_class(const MlpClassifier& model, const InversionConfig& cfg) {
    if (cfg.target_class < 0 || cfg.target_class >= static_cast<int>(model.output_dim()))
        throw InvalidClass("invert_class: target class out of range");
    if (cfg.steps < 0)
        throw InvalidParam("invert_class: steps must be >= 0");
    if (!(cfg.step_size > 0.0))
        throw InvalidParam("invert_class: step_size must be positive");

    std::vector<double> x =
        cfg.init ? *cfg.init : std::vector<double>(model.input_dim(), 0.5);
    if (x.size() != model.input_dim())
        throw ShapeMismatch("invert_class: init length does not match model input");

    InversionResult result;
    result.trace.reserve(cfg.steps + 1);
    result.trace.push_back(objective_value(model, x, cfg));

    for (int step = 0; step < cfg.steps; ++step) {
        const auto grad = input_gradient(model, x, cfg.target_class, cfg.objective);
        for (std::size_t i = 0; i < x.size(); ++i) {
            x[i] += cfg.step_size * grad[i];
            if (cfg.box_clamp) x[i] = std::clamp(x[i], 0.0, 1.0);
        }
        result.trace.push_back(objective_value(model, x, cfg));
    }
    result.input = std::move(x);
    return result;
}

} // namespace unlearn
