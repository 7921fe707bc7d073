#include "unlearn/serialize.hpp"

#include <fstream>

#include <json.hpp>

#include "unlearn/errors.hpp"

namespace unlearn {

namespace {

using nlohmann::json;

json parse_file(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in)
        throw IoError("cannot open " + path.string());
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ConfigError("malformed JSON in " + path.string() + ": " + e.what());
    }
}

void write_file(const json& doc, const std::filesystem::path& path) {
    std::ofstream out(path);
    if (!out)
        throw IoError("cannot write " + path.string());
    out << doc.dump(2) << "\n";
    if (!out)
        throw IoError("failed writing " + path.string());
}

json matrix_to_json(const Matrix& m) {
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"entries", m.entries()}};
}

Matrix matrix_from_json(const json& j) {
    return Matrix(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>(),
                  j.at("entries").get<std::vector<double>>());
}

} // namespace

void save_model(const MlpClassifier& model, const std::filesystem::path& path) {
    json doc;
    doc["format_version"] = 1;
    doc["layer_dims"] = model.layer_dims();
    doc["activation"] = "relu";
    doc["layers"] = json::array();
    for (const Layer& layer : model.layers())
        doc["layers"].push_back({{"rows", layer.weights.rows()},
                                 {"cols", layer.weights.cols()},
                                 {"weights", layer.weights.entries()},
                                 {"bias", layer.bias}});
    write_file(doc, path);
}

MlpClassifier load_model(const std::filesystem::path& path) {
    const json doc = parse_file(path);
    try {
        if (doc.at("format_version").get<int>() != 1)
            throw ConfigError("unsupported model format version in " + path.string());
        if (doc.at("activation").get<std::string>() != "relu")
            throw ConfigError("unsupported activation in " + path.string());

        auto dims = doc.at("layer_dims").get<std::vector<std::size_t>>();
        std::vector<Layer> layers;
        for (const json& jl : doc.at("layers")) {
            Layer layer;
            layer.weights = Matrix(jl.at("rows").get<std::size_t>(),
                                   jl.at("cols").get<std::size_t>(),
                                   jl.at("weights").get<std::vector<double>>());
            layer.bias = jl.at("bias").get<std::vector<double>>();
            layers.push_back(std::move(layer));
        }
        return MlpClassifier(std::move(dims), std::move(layers));
    } catch (const json::exception& e) {
        throw ConfigError("bad model file " + path.string() + ": " + e.what());
    }
}

void save_plan(const FiltrationPlan& plan, const std::filesystem::path& path) {
    json doc;
    doc["deleted"] = plan.deleted;
    doc["strategy"] = to_string(plan.strategy);
    doc["seed"] = plan.seed;
    doc["b"] = matrix_to_json(plan.b);
    doc["f"] = matrix_to_json(plan.f);
    write_file(doc, path);
}

FiltrationPlan load_plan(const std::filesystem::path& path) {
    const json doc = parse_file(path);
    try {
        FiltrationPlan plan;
        plan.deleted = doc.at("deleted").get<std::vector<int>>();
        plan.strategy = strategy_from_string(doc.at("strategy").get<std::string>());
        plan.seed = doc.at("seed").get<std::uint64_t>();
        plan.b = matrix_from_json(doc.at("b"));
        plan.f = matrix_from_json(doc.at("f"));
        return plan;
    } catch (const json::exception& e) {
        throw ConfigError("bad plan file " + path.string() + ": " + e.what());
    }
}

} // namespace unlearn
