#pragma once

#include <map>
#include <optional>
#include <span>
#include <vector>

#include "iidseval/dataset.hpp"
#include "iidseval/splitting.hpp"

namespace iidseval {

/// Binary confusion counts with malicious as the positive class.
struct ConfusionCounts {
    std::size_t tp = 0;
    std::size_t fp = 0;
    std::size_t tn = 0;
    std::size_t fn = 0;

    std::size_t total() const noexcept { return tp + fp + tn + fn; }
    bool operator==(const ConfusionCounts&) const = default;
};

/// Throws Error on length mismatch or empty input.
ConfusionCounts confusion(std::span<const bool> predicted, std::span<const bool> truth);

// Division by zero yields nullopt ("undefined"), never 0 or 1.
std::optional<double> precision(const ConfusionCounts& c);
std::optional<double> recall(const ConfusionCounts& c);
std::optional<double> f1(std::optional<double> p, std::optional<double> r);

/// Records of one group in a test set and how many were classified
/// correctly (malicious for attack groups, benign for the benign group).
struct GroupTally {
    std::size_t count = 0;
    std::size_t hits = 0;

    std::optional<double> recall() const {
        return count ? std::optional<double>(static_cast<double>(hits) / static_cast<double>(count)) : std::nullopt;
    }
    bool operator==(const GroupTally&) const = default;
};

/// Tally per group (kBenign plus every unit at `level`); groups with no test
/// records are present with count 0.
std::map<int, GroupTally> per_group_recall(std::span<const bool> predicted, const Dataset& d,
                                           std::span<const std::size_t> test_rows, Level level);

/// Evaluation of one (scenario, fold) at one grouping level.
struct GroupRecallRow {
    ScenarioSpec scenario;
    std::size_t fold = 0;
    Level level = Level::attack;
    std::map<int, GroupTally> groups;
    ConfusionCounts confusion;

    std::optional<double> group_recall(int group) const;
    std::optional<double> precision() const { return iidseval::precision(confusion); }
    std::optional<double> recall() const { return iidseval::recall(confusion); }
    std::optional<double> f1() const { return iidseval::f1(precision(), recall()); }
};

GroupRecallRow evaluate_fold(const ScenarioSpec& scenario, std::size_t fold, Level level,
                             std::span<const bool> predicted, const Dataset& d, std::span<const std::size_t> test_rows);

/// Fold means over the folds where each value is defined.
struct AggregatedRow {
    ScenarioSpec scenario;
    Level level = Level::attack;
    std::map<int, std::optional<double>> mean_recall;
    std::map<int, std::size_t> defined_folds;
    std::optional<double> mean_precision;
    std::size_t precision_folds = 0;
    std::optional<double> mean_overall_recall;
    std::optional<double> mean_f1;
};

/// Throws Error if the rows mix scenarios or levels, or if `rows` is empty.
AggregatedRow aggregate_folds(std::span<const GroupRecallRow> rows);

/// Arithmetic mean of the defined values (nullopt when none); also returns the defined count.
std::pair<std::optional<double>, std::size_t> mean_defined(std::span<const std::optional<double>> values);

}  // namespace iidseval
