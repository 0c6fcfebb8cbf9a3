#include "iidseval/metrics.hpp"

#include <memory>

#include "iidseval/error.hpp"

namespace iidseval {

ConfusionCounts confusion(std::span<const bool> predicted, std::span<const bool> truth) {
    if (predicted.size() != truth.size())
        throw Error("prediction/label length mismatch: " + std::to_string(predicted.size()) + " vs " +
                    std::to_string(truth.size()));
    if (predicted.empty()) throw Error("cannot count an empty prediction set");
    ConfusionCounts c;
    for (std::size_t i = 0; i < predicted.size(); ++i) {
        if (truth[i]) (predicted[i] ? c.tp : c.fn)++;
        else (predicted[i] ? c.fp : c.tn)++;
    }
    return c;
}

std::optional<double> precision(const ConfusionCounts& c) {
    if (c.tp + c.fp == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fp);
}

std::optional<double> recall(const ConfusionCounts& c) {
    if (c.tp + c.fn == 0) return std::nullopt;
    return static_cast<double>(c.tp) / static_cast<double>(c.tp + c.fn);
}

std::optional<double> f1(std::optional<double> p, std::optional<double> r) {
    if (!p || !r || *p + *r == 0.0) return std::nullopt;
    return 2.0 * *p * *r / (*p + *r);
}

std::map<int, GroupTally> per_group_recall(std::span<const bool> predicted, const Dataset& d,
                                           std::span<const std::size_t> test_rows, Level level) {
    if (predicted.size() != test_rows.size()) throw Error("predictions do not align with test rows");
    std::map<int, GroupTally> groups;
    groups[kBenign];
    for (int u : d.taxonomy().units(level)) groups[u];
    for (std::size_t r = 0; r < test_rows.size(); ++r) {
        const std::size_t i = test_rows[r];
        const int g = d.taxonomy().unit_of(d.attack_type(i), level);
        auto& t = groups[g];
        ++t.count;
        if (predicted[r] == (g != kBenign)) ++t.hits;
    }
    return groups;
}

std::optional<double> GroupRecallRow::group_recall(int group) const {
    const auto it = groups.find(group);
    return it == groups.end() ? std::nullopt : it->second.recall();
}

GroupRecallRow evaluate_fold(const ScenarioSpec& scenario, std::size_t fold, Level level,
                             std::span<const bool> predicted, const Dataset& d, std::span<const std::size_t> test_rows) {
    // std::vector<bool> is not contiguous, so labels go into a plain array.
    std::unique_ptr<bool[]> truth(new bool[test_rows.size()]);
    for (std::size_t r = 0; r < test_rows.size(); ++r) truth[r] = d.malicious(test_rows[r]);
    GroupRecallRow row;
    row.scenario = scenario;
    row.fold = fold;
    row.level = level;
    row.groups = per_group_recall(predicted, d, test_rows, level);
    row.confusion = confusion(predicted, {truth.get(), test_rows.size()});
    return row;
}

std::pair<std::optional<double>, std::size_t> mean_defined(std::span<const std::optional<double>> values) {
    double sum = 0.0;
    std::size_t n = 0;
    for (const auto& v : values) {
        if (!v) continue;
        sum += *v;
        ++n;
    }
    if (n == 0) return {std::nullopt, 0};
    return {sum / static_cast<double>(n), n};
}

AggregatedRow aggregate_folds(std::span<const GroupRecallRow> rows) {
    if (rows.empty()) throw Error("no fold rows to aggregate");
    AggregatedRow agg;
    agg.scenario = rows.front().scenario;
    agg.level = rows.front().level;
    for (const auto& r : rows) {
        if (r.scenario != agg.scenario) throw Error("cannot aggregate rows from different scenarios");
        if (r.level != agg.level) throw Error("cannot aggregate rows from different levels");
    }
    std::map<int, std::vector<std::optional<double>>> per_group;
    std::vector<std::optional<double>> prec, rec, f;
    for (const auto& r : rows) {
        for (const auto& [g, t] : r.groups) per_group[g].push_back(t.recall());
        prec.push_back(r.precision());
        rec.push_back(r.recall());
        f.push_back(r.f1());
    }
    for (const auto& [g, vals] : per_group) {
        const auto [mean, n] = mean_defined(vals);
        agg.mean_recall[g] = mean;
        agg.defined_folds[g] = n;
    }
    std::tie(agg.mean_precision, agg.precision_folds) = mean_defined(prec);
    agg.mean_overall_recall = mean_defined(rec).first;
    agg.mean_f1 = mean_defined(f).first;
    return agg;
}

}  // namespace iidseval
