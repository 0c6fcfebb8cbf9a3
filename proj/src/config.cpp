#include "iidseval/config.hpp"

#include <cstdio>
#include <fstream>

#include "iidseval/error.hpp"
#include "iidseval/random.hpp"

namespace iidseval {

namespace fs = std::filesystem;

void ExperimentConfig::validate() const {
    if (k < 2) throw ConfigError("k must be at least 2");
    if (classifiers.empty()) throw ConfigError("classifiers must list at least one classifier");
    if (levels.empty()) throw ConfigError("levels must not be empty");
    if (workers == 0) throw ConfigError("workers must be positive");
    std::set<std::string> ids;
    for (const auto& c : classifiers)
        if (!ids.insert(c.id).second) throw ConfigError("classifier id '" + c.id + "' is duplicated");
    std::set<Level> seen;
    for (auto l : levels)
        if (!seen.insert(l).second) throw ConfigError("levels lists '" + std::string(to_string(l)) + "' twice");
    if (dataset.synthetic)
        dataset.synthetic->validate();
    else if (dataset.path.empty())
        throw ConfigError("dataset needs a path or a synthetic config");
}

namespace {

const std::set<std::string> kConfigKeys{"dataset", "k",     "strategy",   "seed",   "classifiers",
                                        "levels",  "modes", "output_dir", "workers"};
const std::set<std::string> kDatasetKeys{"path", "schema", "taxonomy", "synthetic"};

fs::path resolve(const fs::path& p, const fs::path& base) {
    if (p.empty() || p.is_absolute() || base.empty()) return p;
    return fs::absolute(base / p).lexically_normal();
}

bool is_keyword_schema(const std::string& s) { return s.empty() || s == "gas-pipeline" || s == "infer"; }

}  // namespace

ExperimentConfig experiment_config_from_json(const nlohmann::json& j, const fs::path& base_dir) {
    if (!j.is_object()) throw ConfigError("experiment config must be a JSON object");
    for (const auto& [key, _] : j.items())
        if (!kConfigKeys.contains(key)) throw ConfigError("unknown config key '" + key + "'");

    ExperimentConfig cfg;
    try {
        const auto& ds = j.at("dataset");
        if (!ds.is_object()) throw ConfigError("dataset must be an object");
        for (const auto& [key, _] : ds.items())
            if (!kDatasetKeys.contains(key)) throw ConfigError("unknown dataset key '" + key + "'");
        if (ds.contains("synthetic")) {
            if (ds.contains("path")) throw ConfigError("dataset takes either path or synthetic, not both");
            cfg.dataset.synthetic = synthetic_config_from_json(ds.at("synthetic"));
        } else {
            cfg.dataset.path = resolve(ds.at("path").get<std::string>(), base_dir);
        }
        cfg.dataset.schema = ds.value("schema", std::string{});
        if (!is_keyword_schema(cfg.dataset.schema)) cfg.dataset.schema = resolve(cfg.dataset.schema, base_dir).string();
        cfg.dataset.taxonomy = ds.value("taxonomy", std::string("builtin"));
        if (cfg.dataset.taxonomy != "builtin" && cfg.dataset.taxonomy != "gas-pipeline")
            cfg.dataset.taxonomy = resolve(cfg.dataset.taxonomy, base_dir).string();

        if (j.contains("k")) {
            const auto k = j.at("k").get<long long>();
            if (k < 2) throw ConfigError("k must be at least 2");
            cfg.k = static_cast<std::size_t>(k);
        }
        if (j.contains("strategy")) cfg.strategy = parse_strategy(j.at("strategy").get<std::string>());
        if (j.contains("seed")) cfg.seed = j.at("seed").get<std::uint64_t>();
        if (j.contains("classifiers")) {
            for (const auto& c : j.at("classifiers")) cfg.classifiers.push_back(classifier_spec_from_json(c));
        }
        if (j.contains("levels")) {
            cfg.levels.clear();
            for (const auto& l : j.at("levels")) cfg.levels.push_back(parse_level(l.get<std::string>()));
        }
        if (j.contains("modes")) {
            cfg.modes.clear();
            for (const auto& m : j.at("modes")) cfg.modes.insert(parse_mode(m.get<std::string>()));
        }
        cfg.modes.insert(Mode::baseline);
        if (j.contains("output_dir")) cfg.output_dir = resolve(j.at("output_dir").get<std::string>(), base_dir);
        if (j.contains("workers")) {
            const auto w = j.at("workers").get<long long>();
            if (w < 1) throw ConfigError("workers must be positive");
            cfg.workers = static_cast<std::size_t>(w);
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("experiment config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

ExperimentConfig load_experiment_config(const fs::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open config " + path.string());
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError(path.string() + ": " + e.what());
    }
    return experiment_config_from_json(j, fs::absolute(path).parent_path());
}

nlohmann::ordered_json to_json(const ExperimentConfig& cfg) {
    nlohmann::ordered_json j;
    nlohmann::ordered_json ds;
    if (cfg.dataset.synthetic) {
        ds["synthetic"] = to_json(*cfg.dataset.synthetic);
    } else {
        ds["path"] = cfg.dataset.path.string();
        ds["schema"] = cfg.dataset.schema;
        ds["taxonomy"] = cfg.dataset.taxonomy;
    }
    j["dataset"] = std::move(ds);
    j["k"] = cfg.k;
    j["strategy"] = to_string(cfg.strategy);
    j["seed"] = cfg.seed;
    auto cls = nlohmann::ordered_json::array();
    for (const auto& c : cfg.classifiers) cls.push_back(to_json(c));
    j["classifiers"] = std::move(cls);
    auto levels = nlohmann::ordered_json::array();
    for (auto l : cfg.levels) levels.push_back(to_string(l));
    j["levels"] = std::move(levels);
    auto modes = nlohmann::ordered_json::array();
    for (auto m : cfg.modes) modes.push_back(to_string(m));
    j["modes"] = std::move(modes);
    j["output_dir"] = cfg.output_dir.string();
    j["workers"] = cfg.workers;
    return j;
}

std::string config_hash(const ExperimentConfig& cfg) {
    auto j = to_json(cfg);
    j.erase("output_dir");
    j.erase("workers");
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(fnv1a(j.dump())));
    return buf;
}

Dataset load_experiment_dataset(const ExperimentConfig& cfg) {
    if (cfg.dataset.synthetic) return generate_synthetic(*cfg.dataset.synthetic);
    const auto tax = load_taxonomy(std::string_view(cfg.dataset.taxonomy));
    SchemaSource source = InferNumericSchema{};
    const auto& s = cfg.dataset.schema;
    if (s == "gas-pipeline") {
        source = GasPipelineSchema{};
    } else if (s == "infer") {
        source = InferNumericSchema{};
    } else if (!s.empty()) {
        source = SidecarSchema{s};
    } else {
        fs::path sidecar = cfg.dataset.path;
        sidecar += ".schema.csv";
        if (fs::exists(sidecar)) source = SidecarSchema{sidecar};
    }
    return load_dataset(cfg.dataset.path, source, tax);
}

}  // namespace iidseval
