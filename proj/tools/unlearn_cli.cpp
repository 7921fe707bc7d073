#include <cstdint>
#include <iostream>
#include <map>
#include <optional>
#include <string>
#include <vector>

#include <CLI11.hpp>

#include "unlearn/errors.hpp"
#include "unlearn/experiment.hpp"

namespace {

struct CommonFlags {
    std::string config_path;
    std::optional<std::uint64_t> seed;
    std::optional<std::string> out;
    std::optional<std::string> strategy;
    std::optional<std::vector<int>> classes;
    std::optional<int> models;
    std::optional<std::size_t> sample_size;
    std::optional<std::size_t> directions;
};

void add_common_flags(CLI::App* cmd, CommonFlags& flags) {
    cmd->add_option("--config", flags.config_path, "Experiment config (JSON)");
    cmd->add_option("--seed", flags.seed, "Override base_seed");
    cmd->add_option("--out", flags.out, "Override output directory");
    cmd->add_option("--strategy", flags.strategy,
                    "Override strategy (naive|normalization|randomization|zeroing)")
        ->check(CLI::IsMember({"naive", "normalization", "randomization", "zeroing"}));
    cmd->add_option("--classes", flags.classes, "Override deleted classes")->delimiter(',');
    cmd->add_option("--models", flags.models, "Override shadow models per pool");
    cmd->add_option("--sample-size", flags.sample_size,
                    "Override class-mean sample size (0 = all rows)");
    cmd->add_option("--directions", flags.directions, "Override KS direction count");
}

unlearn::ExperimentConfig resolve_config(const CommonFlags& flags) {
    unlearn::ExperimentConfig cfg;
    if (!flags.config_path.empty()) cfg = unlearn::load_config(flags.config_path);
    if (flags.seed) cfg.base_seed = *flags.seed;
    if (flags.out) cfg.out_dir = *flags.out;
    if (flags.strategy)
        cfg.shadow.strategy = unlearn::strategy_from_string(*flags.strategy);
    if (flags.classes) cfg.deleted = {flags.classes->begin(), flags.classes->end()};
    if (flags.models) cfg.shadow.models_per_pool = *flags.models;
    if (flags.sample_size) cfg.shadow.sample_size = *flags.sample_size;
    if (flags.directions) cfg.shadow.directions = *flags.directions;
    return cfg;
}

} // namespace

int main(int argc, char** argv) {
    CLI::App app{"Class-wide unlearning by linear filtration of the output layer"};
    app.require_subcommand(1);

    struct Sub {
        CLI::App* cmd = nullptr;
        CommonFlags flags;
    };
    std::map<std::string, Sub> subs;
    const std::pair<const char*, const char*> commands[] = {
        {"synth-data", "Generate the synthetic dataset and write it as IDX files"},
        {"train", "Train one model and report accuracy/loss"},
        {"unlearn", "Filter a trained model with the chosen strategy"},
        {"shadow-run", "Run the shadow-model pipeline and dump prediction records"},
        {"attack", "Fit attack classifiers on the records and report advantage"},
        {"ks", "Random-direction KS statistics over the records"},
        {"label-audit", "Report label changes of each strategy versus naive"},
        {"invert", "Model inversion images for saved models"},
        {"full", "Everything: data, training, unlearning, evaluation, inversion"},
    };
    for (const auto& [name, desc] : commands) {
        Sub& sub = subs[name]; // options bind to fields, so the slot must exist first
        sub.cmd = app.add_subcommand(name, desc);
        add_common_flags(sub.cmd, sub.flags);
    }

    CLI11_PARSE(app, argc, argv);

    try {
        for (auto& [name, sub] : subs) {
            if (!sub.cmd->parsed()) continue;
            const unlearn::ExperimentConfig cfg = resolve_config(sub.flags);
            if (name == "synth-data") {
                unlearn::run_synth_data(cfg);
            } else if (name == "train") {
                unlearn::run_train(cfg);
            } else if (name == "unlearn") {
                const unlearn::Strategy strategy =
                    sub.flags.strategy ? unlearn::strategy_from_string(*sub.flags.strategy)
                                       : cfg.strategies.front();
                unlearn::run_unlearn(cfg, strategy);
            } else if (name == "shadow-run") {
                unlearn::run_shadow(cfg);
            } else if (name == "attack") {
                unlearn::run_attack(cfg);
            } else if (name == "ks") {
                unlearn::run_ks(cfg);
            } else if (name == "label-audit") {
                unlearn::run_label_audit(cfg);
            } else if (name == "invert") {
                unlearn::run_invert(cfg);
            } else if (name == "full") {
                unlearn::run_full(cfg);
            }
        }
    } catch (const unlearn::Error& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    } catch (const std::exception& e) {
        std::cerr << "unexpected error: " << e.what() << "\n";
        return 2;
    }
    return 0;
}
