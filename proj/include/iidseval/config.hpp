#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "iidseval/classifier.hpp"
#include "iidseval/splitting.hpp"
#include "iidseval/synthetic.hpp"

namespace iidseval {

/// Where the records come from: a CSV file or a synthetic generator config.
struct DatasetSource {
    std::filesystem::path path;
    /// "gas-pipeline", "infer", or a sidecar schema path. Empty picks a
    /// "<path>.schema.csv" sidecar when present, otherwise "infer".
    std::string schema;
    /// "builtin" or a taxonomy CSV path. Ignored for synthetic data.
    std::string taxonomy = "builtin";
    std::optional<SyntheticConfig> synthetic;

    bool operator==(const DatasetSource&) const = default;
};

struct ExperimentConfig {
    DatasetSource dataset;
    std::size_t k = 5;
    FoldStrategy strategy = FoldStrategy::stratified;
    std::uint64_t seed = 0;
    std::vector<ClassifierSpec> classifiers;
    std::vector<Level> levels{Level::category};
    /// Baseline cells always run; they supply the "none" row of every matrix.
    std::set<Mode> modes{Mode::baseline, Mode::omit, Mode::only};
    std::filesystem::path output_dir;
    std::size_t workers = 1;

    /// Throws ConfigError naming the offending field.
    void validate() const;

    bool operator==(const ExperimentConfig&) const = default;
};

/// Relative dataset, schema and taxonomy paths resolve against `base_dir`.
ExperimentConfig experiment_config_from_json(const nlohmann::json& j, const std::filesystem::path& base_dir = {});
ExperimentConfig load_experiment_config(const std::filesystem::path& path);
nlohmann::ordered_json to_json(const ExperimentConfig& cfg);

/// Hash of everything that affects results (output_dir and workers excluded).
std::string config_hash(const ExperimentConfig& cfg);

/// Load or generate the configured records.
Dataset load_experiment_dataset(const ExperimentConfig& cfg);

}  // namespace iidseval
