#pragma once

#include <compare>
#include <filesystem>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iidseval/config.hpp"
#include "iidseval/metrics.hpp"
#include "iidseval/report.hpp"

namespace iidseval {

inline constexpr const char* kRunFormatVersion = "1";

/// One (classifier, scenario, fold) work unit.
struct CellKey {
    std::string classifier;
    ScenarioSpec scenario;
    std::size_t fold = 0;

    /// cells/<classifier>/<scenario-label>/<fold>.json
    std::filesystem::path relative_path() const;
    std::string describe() const;

    auto operator<=>(const CellKey&) const = default;
};

struct CellResult {
    CellKey key;
    std::uint64_t seed = 0;
    std::size_t train_size = 0;
    std::size_t test_size = 0;
    ConfusionCounts confusion;
    /// Group tallies for every configured level.
    std::map<Level, std::map<int, GroupTally>> groups;
    double train_seconds = 0.0;
    double predict_seconds = 0.0;

    /// Throws Error if `level` was not recorded.
    GroupRecallRow row(Level level) const;
};

struct AggregateEntry {
    std::string classifier;
    AggregatedRow row;
};

struct RunTiming {
    double wall_seconds = 0.0;
    std::size_t cells_computed = 0;
    std::size_t cells_reused = 0;
    std::size_t workers = 1;
};

struct RunArtifact {
    ExperimentConfig config;
    std::string config_hash;
    AttackTaxonomy taxonomy;
    FoldPlan folds;
    /// Sorted by schedule order: classifier, then scenario, then fold.
    std::vector<CellResult> cells;
    std::vector<AggregateEntry> aggregated;
    std::vector<MetricsMatrix> matrices;
    RunTiming timing;

    /// nullptr when absent.
    const MetricsMatrix* matrix(const std::string& classifier, Level level, Mode mode) const;
};

/// Seed of one cell, a pure function of the config seed and the cell key.
std::uint64_t cell_seed(std::uint64_t config_seed, const ClassifierSpec& spec, const ScenarioSpec& scenario,
                        std::size_t fold);

/// Every cell a config schedules for `d`, in schedule order. Scenarios whose
/// target unit has no records in `d` are left out; their matrix rows stay undefined.
std::vector<CellKey> schedule_cells(const ExperimentConfig& cfg, const Dataset& d);

/// Evaluate one cell. Pure given its inputs.
CellResult run_cell(const ClassifierSpec& spec, const CellKey& key, const Dataset& d, const FoldPlan& plan,
                    const std::vector<Level>& levels, std::uint64_t config_seed);

/// Runs every cell across `cfg.workers` threads. With a nonempty output_dir
/// the config snapshot, one file per cell and run.json are written there; an
/// INCOMPLETE marker stays behind if any cell fails. Throws Error naming the
/// failed cell.
RunArtifact run(const ExperimentConfig& cfg);

/// Recompute only the cells missing from `dir`. Throws Error when an existing
/// cell was produced under a different config.
RunArtifact resume(const std::filesystem::path& dir, std::optional<std::size_t> workers = std::nullopt);

/// Merge finished cells (any order) into the artifact.
RunArtifact assemble_artifact(const ExperimentConfig& cfg, const Dataset& d, const FoldPlan& plan,
                              std::vector<CellResult> cells, RunTiming timing);

nlohmann::ordered_json to_json(const RunArtifact& a);
RunArtifact artifact_from_json(const nlohmann::json& j);
RunArtifact load_run_artifact(const std::filesystem::path& dir);
/// run.json contents without the "timing" section.
std::string canonical_run_json(const RunArtifact& a);

nlohmann::ordered_json cell_to_json(const CellResult& c);
CellResult cell_from_json(const nlohmann::json& j);

/// Omit-mode recall of unit u in experiment a next to the only-mode recall of
/// u when b trained on unit v, for every v != u.
struct ComparisonRow {
    std::string classifier;
    Level level = Level::category;
    int unit = 0;
    std::string unit_label;
    std::optional<double> omit_recall;
    int trained_unit = 0;
    std::string trained_label;
    std::optional<double> only_recall;
    /// only_recall - omit_recall.
    std::optional<double> difference;
    /// Smallest |difference| among the rows of this (classifier, level, unit).
    bool closest = false;
};

/// Throws Error on differing taxonomies or classifier sets, or when no level
/// has an omit matrix in `a` and an only matrix in `b`.
std::vector<ComparisonRow> compare_experiments(const RunArtifact& a, const RunArtifact& b);
std::string comparison_to_csv(const std::vector<ComparisonRow>& rows);

std::vector<PrecisionRow> precision_report(const RunArtifact& a);

}  // namespace iidseval
