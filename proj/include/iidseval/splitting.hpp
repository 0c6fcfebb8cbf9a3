#pragma once

#include <compare>
#include <cstdint>
#include <optional>
#include <set>
#include <string>
#include <vector>

#include <json.hpp>

#include "iidseval/dataset.hpp"

namespace iidseval {

enum class FoldStrategy { stratified, contiguous };

std::string_view to_string(FoldStrategy s) noexcept;
FoldStrategy parse_strategy(std::string_view s);

/// Assignment of every record to one of k folds.
struct FoldPlan {
    std::size_t k = 0;
    std::vector<std::size_t> assignment;
    FoldStrategy strategy = FoldStrategy::stratified;
    std::uint64_t seed = 0;

    std::vector<std::size_t> fold_sizes() const;
};

/// Stratified: records of each attack type are shuffled by seed and dealt
/// round-robin, continuing the deal position across strata so overall fold
/// sizes also differ by at most one. Contiguous: record i goes to fold
/// floor(i*k/N). Throws ConfigError when k < 2 or k > N.
FoldPlan partition_folds(const Dataset& d, std::size_t k, FoldStrategy strategy, std::uint64_t seed);

enum class Mode { baseline, omit, only };

std::string_view to_string(Mode m) noexcept;
Mode parse_mode(std::string_view s);

struct ScenarioSpec {
    Mode mode = Mode::baseline;
    Level level = Level::attack;
    /// Unit id at `level`; absent for baseline.
    std::optional<int> target;

    static ScenarioSpec baseline() { return {}; }
    static ScenarioSpec omit(Level l, int unit) { return {Mode::omit, l, unit}; }
    static ScenarioSpec only(Level l, int unit) { return {Mode::only, l, unit}; }

    /// "baseline", "omit-attack-3", "only-category-2".
    std::string label() const;
    static ScenarioSpec from_label(std::string_view label);

    auto operator<=>(const ScenarioSpec&) const = default;
};

/// Baseline (if requested) first, then omit units ascending, then only units ascending.
std::vector<ScenarioSpec> enumerate_scenarios(const AttackTaxonomy& tax, Level level, const std::set<Mode>& modes);

struct ScheduledCell {
    ScenarioSpec scenario;
    std::size_t fold;

    auto operator<=>(const ScheduledCell&) const = default;
};
using ScenarioSchedule = std::vector<ScheduledCell>;

ScenarioSchedule build_schedule(const std::vector<ScenarioSpec>& scenarios, std::size_t k);

/// Materialized train/test indices for one (scenario, fold); both sorted.
struct SplitInstance {
    ScenarioSpec scenario;
    std::size_t fold = 0;
    std::vector<std::size_t> train;
    std::vector<std::size_t> test;
};

/// Baseline split for `fold`, then the scenario filter: omit moves every
/// record of the target unit to test, only moves every malicious record
/// outside the target unit to test. Benign records are never moved.
SplitInstance materialize_split(const Dataset& d, const FoldPlan& plan, std::size_t fold, const ScenarioSpec& scenario);

/// Every SplitInstance invariant; at most one violation is reported per record.
ValidationReport check_split(const Dataset& d, const FoldPlan& plan, const SplitInstance& s);

nlohmann::ordered_json to_json(const ScenarioSpec& s);
ScenarioSpec scenario_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const SplitInstance& s);

}  // namespace iidseval
