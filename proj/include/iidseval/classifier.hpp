#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include <json.hpp>

#include "iidseval/dataset.hpp"
#include "iidseval/forest.hpp"
#include "iidseval/mlp.hpp"
#include "iidseval/preprocess.hpp"
#include "iidseval/splitting.hpp"
#include "iidseval/svm.hpp"

namespace iidseval {

enum class ClassifierKind { random_forest, linear_svm, mlp };

std::string_view to_string(ClassifierKind k) noexcept;
ClassifierKind parse_classifier_kind(std::string_view s);

using Hyperparameters = std::variant<ForestParams, SvmParams, MlpParams>;

struct ClassifierSpec {
    /// Identifier used in results and output paths.
    std::string id;
    ClassifierKind kind = ClassifierKind::random_forest;
    Hyperparameters params = ForestParams{};
    std::uint64_t seed = 0;

    /// Default profiles: "rf", "svm", "mlp" (window 1) and "mlp_window"
    /// (window 5, the sequence-context profile).
    static ClassifierSpec profile(std::string_view name);
    static ClassifierSpec defaults(ClassifierKind kind, std::string id);

    std::size_t window() const;

    bool operator==(const ClassifierSpec&) const = default;
};

nlohmann::ordered_json to_json(const ClassifierSpec& s);
/// Accepts a full object or a bare profile name.
ClassifierSpec classifier_spec_from_json(const nlohmann::json& j);

using ModelParameters = std::variant<RandomForest, LinearSvm, Mlp>;

struct TrainedModel {
    ClassifierSpec spec;
    PreprocessorState preprocessor;
    ModelParameters parameters;
    std::size_t train_size = 0;
    double wall_seconds = 0.0;
};

struct Prediction {
    bool malicious = false;
    double score = 0.0;

    bool operator==(const Prediction&) const = default;
};

/// Label rule shared by every classifier: malicious iff score >= 0.5.
constexpr bool label_from_score(double score) noexcept { return score >= 0.5; }

/// Fit on `train_rows` of `d` with binary target attack_type != 0.
/// Throws Error("degenerate training labels") if only one class is present.
TrainedModel train(const ClassifierSpec& spec, const Dataset& d, std::span<const std::size_t> train_rows,
                   std::uint64_t seed);
TrainedModel train(const ClassifierSpec& spec, const SplitInstance& split, const Dataset& d);

std::vector<Prediction> predict(const TrainedModel& m, const Dataset& d, std::span<const std::size_t> rows);
/// Predictions for every row of `d`.
std::vector<Prediction> predict(const TrainedModel& m, const Dataset& d);

inline constexpr int kModelFormatVersion = 1;

nlohmann::ordered_json model_to_json(const TrainedModel& m);
TrainedModel model_from_json(const nlohmann::json& j);

}  // namespace iidseval
