#include "iidseval/classifier.hpp"

#include <chrono>
#include <numeric>

#include "iidseval/error.hpp"

namespace iidseval {

std::string_view to_string(ClassifierKind k) noexcept {
    switch (k) {
    case ClassifierKind::random_forest: return "random_forest";
    case ClassifierKind::linear_svm: return "linear_svm";
    case ClassifierKind::mlp: return "mlp";
    }
    return "?";
}

ClassifierKind parse_classifier_kind(std::string_view s) {
    if (s == "random_forest") return ClassifierKind::random_forest;
    if (s == "linear_svm") return ClassifierKind::linear_svm;
    if (s == "mlp") return ClassifierKind::mlp;
    throw ConfigError("unknown classifier kind '" + std::string(s) + "' (expected random_forest|linear_svm|mlp)");
}

ClassifierSpec ClassifierSpec::defaults(ClassifierKind kind, std::string id) {
    ClassifierSpec s;
    s.id = std::move(id);
    s.kind = kind;
    switch (kind) {
    case ClassifierKind::random_forest: s.params = ForestParams{}; break;
    case ClassifierKind::linear_svm: s.params = SvmParams{}; break;
    case ClassifierKind::mlp: s.params = MlpParams{}; break;
    }
    return s;
}

ClassifierSpec ClassifierSpec::profile(std::string_view name) {
    if (name == "rf") return defaults(ClassifierKind::random_forest, "rf");
    if (name == "svm") return defaults(ClassifierKind::linear_svm, "svm");
    if (name == "mlp") return defaults(ClassifierKind::mlp, "mlp");
    if (name == "mlp_window") {
        auto s = defaults(ClassifierKind::mlp, "mlp_window");
        std::get<MlpParams>(s.params).window = 5;
        return s;
    }
    throw ConfigError("unknown classifier profile '" + std::string(name) + "' (expected rf|svm|mlp|mlp_window)");
}

std::size_t ClassifierSpec::window() const {
    if (const auto* m = std::get_if<MlpParams>(&params)) return m->window;
    return 1;
}

nlohmann::ordered_json to_json(const ClassifierSpec& s) {
    nlohmann::ordered_json j;
    j["id"] = s.id;
    j["kind"] = to_string(s.kind);
    j["hyperparameters"] = std::visit([](const auto& p) { return to_json(p); }, s.params);
    j["seed"] = s.seed;
    return j;
}

ClassifierSpec classifier_spec_from_json(const nlohmann::json& j) {
    if (j.is_string()) return ClassifierSpec::profile(j.get<std::string>());
    try {
        for (const auto& [key, v] : j.items())
            if (key != "id" && key != "kind" && key != "hyperparameters" && key != "seed")
                throw ConfigError("unknown classifier field '" + key + "'");
        ClassifierSpec s;
        s.kind = parse_classifier_kind(j.at("kind").get<std::string>());
        s.id = j.value("id", std::string(to_string(s.kind)));
        if (s.id.empty() || s.id.find_first_of("/\\ ") != std::string::npos)
            throw ConfigError("classifier id '" + s.id + "' must be nonempty without slashes or spaces");
        s.seed = j.value("seed", std::uint64_t{0});
        const nlohmann::json hp = j.contains("hyperparameters") ? j["hyperparameters"] : nlohmann::json::object();
        switch (s.kind) {
        case ClassifierKind::random_forest: s.params = forest_params_from_json(hp); break;
        case ClassifierKind::linear_svm: s.params = svm_params_from_json(hp); break;
        case ClassifierKind::mlp: s.params = mlp_params_from_json(hp); break;
        }
        return s;
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("classifier spec: ") + e.what());
    }
}

TrainedModel train(const ClassifierSpec& spec, const Dataset& d, std::span<const std::size_t> train_rows,
                   std::uint64_t seed) {
    const auto start = std::chrono::steady_clock::now();
    std::vector<int> y(train_rows.size());
    std::size_t positives = 0;
    for (std::size_t r = 0; r < train_rows.size(); ++r) {
        y[r] = d.malicious(train_rows[r]) ? 1 : 0;
        positives += static_cast<std::size_t>(y[r]);
    }
    if (positives == 0 || positives == train_rows.size()) throw Error("degenerate training labels");

    TrainedModel m;
    m.spec = spec;
    m.train_size = train_rows.size();
    m.preprocessor = fit_preprocessor(d, train_rows, spec.window(), spec.kind != ClassifierKind::random_forest);
    const Matrix X = transform(m.preprocessor, d, train_rows);
    switch (spec.kind) {
    case ClassifierKind::random_forest:
        m.parameters = train_random_forest(std::get<ForestParams>(spec.params), X, y, seed);
        break;
    case ClassifierKind::linear_svm:
        m.parameters = train_linear_svm(std::get<SvmParams>(spec.params), X, y, seed);
        break;
    case ClassifierKind::mlp:
        m.parameters = train_mlp(std::get<MlpParams>(spec.params), X, y, seed);
        break;
    }
    m.wall_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
    return m;
}

TrainedModel train(const ClassifierSpec& spec, const SplitInstance& split, const Dataset& d) {
    return train(spec, d, split.train, spec.seed);
}

std::vector<Prediction> predict(const TrainedModel& m, const Dataset& d, std::span<const std::size_t> rows) {
    const Matrix X = transform(m.preprocessor, d, rows);
    std::vector<Prediction> out(rows.size());
    std::visit(
        [&](const auto& model) {
            for (std::size_t r = 0; r < rows.size(); ++r) {
                const double s = model.score(X.row(r));
                out[r] = {label_from_score(s), s};
            }
        },
        m.parameters);
    return out;
}

std::vector<Prediction> predict(const TrainedModel& m, const Dataset& d) {
    std::vector<std::size_t> rows(d.size());
    std::iota(rows.begin(), rows.end(), std::size_t{0});
    return predict(m, d, rows);
}

nlohmann::ordered_json model_to_json(const TrainedModel& m) {
    nlohmann::ordered_json j;
    j["format_version"] = kModelFormatVersion;
    j["kind"] = to_string(m.spec.kind);
    j["spec"] = to_json(m.spec);
    j["preprocessor"] = to_json(m.preprocessor);
    j["train_size"] = m.train_size;
    j["wall_seconds"] = m.wall_seconds;
    std::visit(
        [&](const auto& p) {
            using T = std::decay_t<decltype(p)>;
            if constexpr (std::is_same_v<T, LinearSvm>) {
                j["parameters"] = {{"weights", p.weights}, {"bias", p.bias}};
            } else {
                j["parameters"] = to_json(p);
            }
        },
        m.parameters);
    return j;
}

TrainedModel model_from_json(const nlohmann::json& j) {
    try {
        if (j.at("format_version").get<int>() != kModelFormatVersion)
            throw ParseError("unsupported model format version", 0);
        TrainedModel m;
        m.spec = classifier_spec_from_json(j.at("spec"));
        m.preprocessor = preprocessor_from_json(j.at("preprocessor"));
        m.train_size = j.value("train_size", std::size_t{0});
        m.wall_seconds = j.value("wall_seconds", 0.0);
        const auto& p = j.at("parameters");
        switch (m.spec.kind) {
        case ClassifierKind::random_forest: m.parameters = forest_from_json(p); break;
        case ClassifierKind::linear_svm:
            m.parameters = LinearSvm{p.at("weights").get<std::vector<double>>(), p.at("bias").get<double>()};
            break;
        case ClassifierKind::mlp: m.parameters = mlp_from_json(p); break;
        }
        return m;
    } catch (const nlohmann::json::exception& e) {
        throw ParseError(std::string("model file: ") + e.what(), 0);
    }
}

}  // namespace iidseval
