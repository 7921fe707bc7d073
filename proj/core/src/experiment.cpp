#include "unlearn/experiment.hpp"

#include <fstream>
#include <map>
#include <thread>

#include <json.hpp>

#include "unlearn/errors.hpp"
#include "unlearn/idx.hpp"
#include "unlearn/inversion.hpp"
#include "unlearn/pgm.hpp"
#include "unlearn/serialize.hpp"
#include "unlearn/stats.hpp"

namespace unlearn {

namespace {

using nlohmann::json;
namespace fs = std::filesystem;

// ------------------------------------------------------------- config ----

json to_json(const ExperimentConfig& cfg) {
    json doc;
    doc["dataset"]["type"] = cfg.dataset.type;
    if (cfg.dataset.type == "synth") {
        const auto& s = cfg.dataset.synth;
        doc["dataset"]["k"] = s.k;
        doc["dataset"]["d"] = s.d;
        doc["dataset"]["train_per_class"] = s.train_per_class;
        doc["dataset"]["test_per_class"] = s.test_per_class;
        doc["dataset"]["spread"] = s.spread;
        doc["dataset"]["seed"] = s.seed;
    } else {
        const auto& m = cfg.dataset.mnist;
        doc["dataset"]["train_images"] = m.train_images;
        doc["dataset"]["train_labels"] = m.train_labels;
        doc["dataset"]["test_images"] = m.test_images;
        doc["dataset"]["test_labels"] = m.test_labels;
    }
    doc["layer_dims"] = cfg.layer_dims;
    doc["train"] = {{"learning_rate", cfg.train.learning_rate},
                    {"momentum", cfg.train.momentum},
                    {"epochs", cfg.train.epochs},
                    {"batch_size", cfg.train.batch_size}};
    doc["deleted_classes"] = cfg.deleted;
    doc["strategies"] = json::array();
    for (Strategy s : cfg.strategies) doc["strategies"].push_back(to_string(s));
    doc["attacks"] = json::array();
    for (AttackKind k : cfg.attacks) doc["attacks"].push_back(to_string(k));
    doc["shadow"] = {{"strategy", to_string(cfg.shadow.strategy)},
                     {"models_per_pool", cfg.shadow.models_per_pool},
                     {"model_split", cfg.shadow.model_split},
                     {"sample_size", cfg.shadow.sample_size},
                     {"directions", cfg.shadow.directions},
                     {"baseline_pool", cfg.shadow.baseline_pool},
                     {"estimate_on_test", cfg.shadow.estimate_on_test},
                     {"threads", cfg.shadow.threads}};
    doc["inversion"] = {{"steps", cfg.inversion.steps},
                        {"step_size", cfg.inversion.step_size},
                        {"objective", cfg.inversion.objective}};
    doc["out_dir"] = cfg.out_dir;
    doc["base_seed"] = cfg.base_seed;
    return doc;
}

ExperimentConfig config_from_json(const json& doc) {
    ExperimentConfig cfg;
    try {
        if (doc.contains("dataset")) {
            const json& d = doc["dataset"];
            cfg.dataset.type = d.value("type", "synth");
            if (cfg.dataset.type == "synth") {
                cfg.dataset.synth.k = d.value("k", cfg.dataset.synth.k);
                cfg.dataset.synth.d = d.value("d", cfg.dataset.synth.d);
                cfg.dataset.synth.train_per_class =
                    d.value("train_per_class", cfg.dataset.synth.train_per_class);
                cfg.dataset.synth.test_per_class =
                    d.value("test_per_class", cfg.dataset.synth.test_per_class);
                cfg.dataset.synth.spread = d.value("spread", cfg.dataset.synth.spread);
                cfg.dataset.synth.seed = d.value("seed", cfg.dataset.synth.seed);
            } else if (cfg.dataset.type == "mnist") {
                cfg.dataset.mnist.train_images = d.at("train_images").get<std::string>();
                cfg.dataset.mnist.train_labels = d.at("train_labels").get<std::string>();
                cfg.dataset.mnist.test_images = d.at("test_images").get<std::string>();
                cfg.dataset.mnist.test_labels = d.at("test_labels").get<std::string>();
            } else {
                throw ConfigError("unknown dataset type '" + cfg.dataset.type + "'");
            }
        }
        cfg.layer_dims = doc.value("layer_dims", cfg.layer_dims);
        if (doc.contains("train")) {
            const json& t = doc["train"];
            cfg.train.learning_rate = t.value("learning_rate", cfg.train.learning_rate);
            cfg.train.momentum = t.value("momentum", cfg.train.momentum);
            cfg.train.epochs = t.value("epochs", cfg.train.epochs);
            cfg.train.batch_size = t.value("batch_size", cfg.train.batch_size);
        }
        if (doc.contains("deleted_classes"))
            cfg.deleted = doc["deleted_classes"].get<std::set<int>>();
        if (doc.contains("strategies")) {
            cfg.strategies.clear();
            for (const auto& s : doc["strategies"])
                cfg.strategies.push_back(strategy_from_string(s.get<std::string>()));
        }
        if (doc.contains("attacks")) {
            cfg.attacks.clear();
            for (const auto& a : doc["attacks"])
                cfg.attacks.push_back(attack_kind_from_string(a.get<std::string>()));
        }
        if (doc.contains("shadow")) {
            const json& s = doc["shadow"];
            if (s.contains("strategy"))
                cfg.shadow.strategy = strategy_from_string(s["strategy"].get<std::string>());
            cfg.shadow.models_per_pool =
                s.value("models_per_pool", cfg.shadow.models_per_pool);
            cfg.shadow.model_split = s.value("model_split", cfg.shadow.model_split);
            cfg.shadow.sample_size = s.value("sample_size", cfg.shadow.sample_size);
            cfg.shadow.directions = s.value("directions", cfg.shadow.directions);
            cfg.shadow.baseline_pool = s.value("baseline_pool", cfg.shadow.baseline_pool);
            cfg.shadow.estimate_on_test =
                s.value("estimate_on_test", cfg.shadow.estimate_on_test);
            cfg.shadow.threads = s.value("threads", cfg.shadow.threads);
        }
        if (doc.contains("inversion")) {
            const json& i = doc["inversion"];
            cfg.inversion.steps = i.value("steps", cfg.inversion.steps);
            cfg.inversion.step_size = i.value("step_size", cfg.inversion.step_size);
            cfg.inversion.objective = i.value("objective", cfg.inversion.objective);
        }
        cfg.out_dir = doc.value("out_dir", cfg.out_dir);
        cfg.base_seed = doc.value("base_seed", cfg.base_seed);
    } catch (const json::exception& e) {
        throw ConfigError(std::string("bad experiment config: ") + e.what());
    }
    if (cfg.strategies.empty())
        throw ConfigError("config lists no strategies");
    if (cfg.deleted.empty())
        throw ConfigError("config lists no deleted classes");
    return cfg;
}

fs::path out_path(const ExperimentConfig& cfg, const std::string& name) {
    fs::create_directories(cfg.out_dir);
    return fs::path(cfg.out_dir) / name;
}

std::ofstream open_csv(const fs::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    return out;
}

MlpClassifier load_stage_model(const ExperimentConfig& cfg, const std::string& name,
                               const std::string& producer) {
    const fs::path path = fs::path(cfg.out_dir) / name;
    if (!fs::exists(path))
        throw IoError("missing " + path.string() + "; run '" + producer + "' first");
    return load_model(path);
}

Objective objective_from_string(const std::string& name) {
    if (name == "log_prob") return Objective::LogProb;
    if (name == "logit") return Objective::Logit;
    throw ConfigError("unknown inversion objective '" + name + "'");
}

} // namespace

ExperimentConfig load_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open config " + path.string());
    json doc;
    try {
        doc = json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed config " + path.string() + ": " + e.what());
    }
    return config_from_json(doc);
}

void save_config(const ExperimentConfig& cfg, const fs::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << to_json(cfg).dump(2) << "\n";
}

LoadedData prepare_dataset(const ExperimentConfig& cfg) {
    if (cfg.dataset.type == "synth") {
        const auto& s = cfg.dataset.synth;
        const Dataset all = synth_blobs(s.k, s.d, s.train_per_class + s.test_per_class,
                                        s.spread, s.seed);
        auto [train_ds, test_ds] = split_per_class(all, s.train_per_class);
        return {std::move(train_ds), std::move(test_ds)};
    }
    const auto& m = cfg.dataset.mnist;
    return {load_idx(m.train_images, m.train_labels),
            load_idx(m.test_images, m.test_labels)};
}

std::vector<std::size_t> effective_layer_dims(const ExperimentConfig& cfg,
                                              const Dataset& train_ds) {
    if (!cfg.layer_dims.empty()) return cfg.layer_dims;
    return {train_ds.dim(), 50, std::size_t(train_ds.num_classes)};
}

ShadowParams shadow_params(const ExperimentConfig& cfg, const Dataset& train_ds) {
    ShadowParams params;
    params.layer_dims = effective_layer_dims(cfg, train_ds);
    params.train = cfg.train;
    params.deleted = cfg.deleted;
    params.strategy = cfg.shadow.strategy;
    params.models_per_pool = cfg.shadow.models_per_pool;
    params.model_split = cfg.shadow.model_split;
    params.sample_cap = cfg.shadow.sample_size == 0 ? kFullSample : cfg.shadow.sample_size;
    params.base_seed = cfg.base_seed;
    params.baseline_pool = cfg.shadow.baseline_pool;
    params.estimate_on_test = cfg.shadow.estimate_on_test;
    params.threads = cfg.shadow.threads > 0
                         ? cfg.shadow.threads
                         : int(std::max(1u, std::thread::hardware_concurrency()));
    return params;
}

void run_synth_data(const ExperimentConfig& cfg) {
    if (cfg.dataset.type != "synth")
        throw ConfigError("synth-data requires a synth dataset spec");
    const LoadedData data = prepare_dataset(cfg);
    save_idx(data.train, out_path(cfg, "train-images.idx"), out_path(cfg, "train-labels.idx"));
    save_idx(data.test, out_path(cfg, "test-images.idx"), out_path(cfg, "test-labels.idx"));
}

void run_train(const ExperimentConfig& cfg) {
    const LoadedData data = prepare_dataset(cfg);
    TrainConfig tc = cfg.train;
    tc.seed = cfg.base_seed;
    const MlpClassifier model =
        train(init_model(effective_layer_dims(cfg, data.train), cfg.base_seed),
              data.train, tc);
    save_model(model, out_path(cfg, "model.json"));

    auto csv = open_csv(out_path(cfg, "metrics.csv"));
    csv << "split,accuracy,loss\n";
    const Evaluation on_train = accuracy_and_loss(model, data.train);
    csv << "train," << format_double(on_train.accuracy) << ','
        << format_double(on_train.loss) << "\n";
    const Evaluation on_test = accuracy_and_loss(model, data.test);
    csv << "test," << format_double(on_test.accuracy) << ','
        << format_double(on_test.loss) << "\n";
}

void run_unlearn(const ExperimentConfig& cfg, Strategy strategy) {
    const LoadedData data = prepare_dataset(cfg);
    const MlpClassifier model = load_stage_model(cfg, "model.json", "train");

    const Dataset& est = cfg.shadow.estimate_on_test ? data.test : data.train;
    const std::size_t cap =
        cfg.shadow.sample_size == 0 ? kFullSample : cfg.shadow.sample_size;
    const ClassMeans means = estimate_class_means(model, est, cap, cfg.base_seed);
    const FiltrationPlan plan =
        build_filtration(means, cfg.deleted, strategy, cfg.base_seed);
    const MlpClassifier filtered = apply_filtration(plan, model);

    save_model(filtered, out_path(cfg, "model_" + to_string(strategy) + ".json"));
    save_plan(plan, out_path(cfg, "plan_" + to_string(strategy) + ".json"));
}

void run_shadow(const ExperimentConfig& cfg) {
    const LoadedData data = prepare_dataset(cfg);
    const auto records =
        shadow_experiment(data.train, data.test, shadow_params(cfg, data.train));
    write_records_csv(records, out_path(cfg, "records.csv"));
}

void run_attack(const ExperimentConfig& cfg) {
    const fs::path records_path = fs::path(cfg.out_dir) / "records.csv";
    if (!fs::exists(records_path))
        throw IoError("missing " + records_path.string() + "; run 'shadow-run' first");
    const auto records = read_records_csv(records_path);
    const auto groups = split_baseline_records(records, cfg.shadow.models_per_pool);

    const AdvantageReport report = per_class_advantage(
        groups.primary, cfg.attacks, cfg.deleted, cfg.shadow.model_split, cfg.base_seed);

    auto csv = open_csv(out_path(cfg, "advantage.csv"));
    csv << "attack,class_scope,advantage\n";
    for (const auto& row : report.rows)
        csv << to_string(row.kind) << ',' << row.scope << ','
            << format_double(row.advantage) << "\n";
}

void run_ks(const ExperimentConfig& cfg) {
    const fs::path records_path = fs::path(cfg.out_dir) / "records.csv";
    if (!fs::exists(records_path))
        throw IoError("missing " + records_path.string() + "; run 'shadow-run' first");
    const auto records = read_records_csv(records_path);
    const auto groups = split_baseline_records(records, cfg.shadow.models_per_pool);

    std::map<int, std::vector<std::vector<double>>> seen, not_seen, baseline;
    for (const auto& rec : groups.primary)
        (rec.origin == Origin::Seen ? seen : not_seen)[rec.true_class].push_back(rec.logits);
    for (const auto& rec : groups.baseline)
        baseline[rec.true_class].push_back(rec.logits);

    auto csv = open_csv(out_path(cfg, "ks.csv"));
    csv << "scope,statistic,num_directions,seed\n";
    auto emit = [&](const std::string& scope, double stat) {
        csv << scope << ',' << format_double(stat) << ',' << cfg.shadow.directions << ','
            << cfg.base_seed << "\n";
    };

    std::map<int, double> per_class, per_class_baseline;
    for (const auto& [cls, s1] : seen) {
        per_class[cls] = ks_phi(s1, not_seen.at(cls), cfg.shadow.directions, cfg.base_seed);
        if (!baseline.empty())
            per_class_baseline[cls] =
                ks_phi(baseline.at(cls), not_seen.at(cls), cfg.shadow.directions,
                       cfg.base_seed);
    }

    auto aggregate = [&](const std::map<int, double>& stats, bool deleted) {
        double sum = 0.0;
        std::size_t n = 0;
        for (const auto& [cls, v] : stats)
            if (cfg.deleted.count(cls) == (deleted ? 1u : 0u)) {
                sum += v;
                ++n;
            }
        return n ? sum / double(n) : 0.0;
    };

    for (const auto& [cls, v] : per_class) emit("class_" + std::to_string(cls), v);
    emit("unlearned", aggregate(per_class, true));
    emit("remaining", aggregate(per_class, false));
    if (!per_class_baseline.empty()) {
        emit("baseline_unlearned", aggregate(per_class_baseline, true));
        emit("baseline_remaining", aggregate(per_class_baseline, false));
    }
}

void run_label_audit(const ExperimentConfig& cfg) {
    const LoadedData data = prepare_dataset(cfg);
    const MlpClassifier naive =
        load_stage_model(cfg, "model_naive.json", "unlearn --strategy naive");

    auto csv = open_csv(out_path(cfg, "labels.csv"));
    csv << "comparison,all,unlearned,correct_remaining\n";
    for (Strategy strategy : cfg.strategies) {
        if (strategy == Strategy::Naive) continue;
        const MlpClassifier other =
            load_stage_model(cfg, "model_" + to_string(strategy) + ".json",
                             "unlearn --strategy " + to_string(strategy));
        const LabelChangeReport rep =
            label_change_report(naive, other, data.test, cfg.deleted);
        csv << "naive_vs_" << to_string(strategy) << ',' << format_double(rep.all) << ','
            << format_double(rep.unlearned) << ',' << format_double(rep.correct_remaining)
            << "\n";
    }
}

void run_invert(const ExperimentConfig& cfg) {
    const LoadedData data = prepare_dataset(cfg);
    const fs::path dir = out_path(cfg, "inversions");
    fs::create_directories(dir);

    InversionConfig inv;
    inv.steps = cfg.inversion.steps;
    inv.step_size = cfg.inversion.step_size;
    inv.objective = objective_from_string(cfg.inversion.objective);

    auto write_classes = [&](const MlpClassifier& model, const std::string& tag,
                             const std::vector<int>& original_classes) {
        for (std::size_t out = 0; out < original_classes.size(); ++out) {
            inv.target_class = static_cast<int>(out);
            const InversionResult res = invert_class(model, inv);
            save_pgm(res.input, data.train.img_cols, data.train.img_rows,
                     dir / ("class_" + std::to_string(original_classes[out]) + "_" + tag +
                            ".pgm"));
        }
    };

    bool wrote_any = false;
    const fs::path base_model = fs::path(cfg.out_dir) / "model.json";
    if (fs::exists(base_model)) {
        std::vector<int> all(data.train.num_classes);
        for (int c = 0; c < data.train.num_classes; ++c) all[c] = c;
        write_classes(load_model(base_model), "original", all);
        wrote_any = true;
    }
    // Unlearned models have no output unit for the deleted classes, so only
    // the retained classes can be reconstructed from them.
    std::vector<int> retained;
    for (int c = 0; c < data.train.num_classes; ++c)
        if (!cfg.deleted.count(c)) retained.push_back(c);
    for (Strategy strategy : cfg.strategies) {
        const fs::path path = fs::path(cfg.out_dir) / ("model_" + to_string(strategy) + ".json");
        if (!fs::exists(path)) continue;
        write_classes(load_model(path), to_string(strategy), retained);
        wrote_any = true;
    }
    if (!wrote_any)
        throw IoError("no model files under " + cfg.out_dir + "; run 'train'/'unlearn' first");
}

void run_full(const ExperimentConfig& cfg) {
    if (cfg.dataset.type == "synth") run_synth_data(cfg);
    run_train(cfg);
    for (Strategy strategy : cfg.strategies) run_unlearn(cfg, strategy);

    // Accuracy/loss per method, plus a from-scratch retrained reference.
    {
        const LoadedData data = prepare_dataset(cfg);
        const MlpClassifier model = load_stage_model(cfg, "model.json", "train");
        const Dataset reduced_train = remove_classes(data.train, cfg.deleted);
        const Dataset reduced_test = remove_classes(data.test, cfg.deleted);

        auto csv = open_csv(out_path(cfg, "accuracy.csv"));
        csv << "method,accuracy,loss\n";
        const Evaluation before = accuracy_and_loss(model, data.test);
        csv << "before," << format_double(before.accuracy) << ','
            << format_double(before.loss) << "\n";

        std::vector<std::size_t> dims = effective_layer_dims(cfg, data.train);
        dims.back() = std::size_t(reduced_train.num_classes);
        TrainConfig tc = cfg.train;
        tc.seed = cfg.base_seed;
        const Evaluation retrained =
            accuracy_and_loss(train(init_model(dims, cfg.base_seed), reduced_train, tc),
                              reduced_test);
        csv << "retrained," << format_double(retrained.accuracy) << ','
            << format_double(retrained.loss) << "\n";

        for (Strategy strategy : cfg.strategies) {
            const MlpClassifier filtered = load_stage_model(
                cfg, "model_" + to_string(strategy) + ".json", "unlearn");
            const Evaluation eval = accuracy_and_loss(filtered, reduced_test);
            csv << to_string(strategy) << ',' << format_double(eval.accuracy) << ','
                << format_double(eval.loss) << "\n";
        }
    }

    run_shadow(cfg);
    run_attack(cfg);
    run_ks(cfg);
    run_label_audit(cfg);
    run_invert(cfg);
}

} // namespace unlearn
