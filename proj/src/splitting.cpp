#include "iidseval/splitting.hpp"

#include <algorithm>
#include <map>
#include <numeric>

#include "iidseval/csv.hpp"
#include "iidseval/error.hpp"
#include "iidseval/random.hpp"

namespace iidseval {

std::string_view to_string(FoldStrategy s) noexcept {
    return s == FoldStrategy::stratified ? "stratified" : "contiguous";
}

FoldStrategy parse_strategy(std::string_view s) {
    if (s == "stratified") return FoldStrategy::stratified;
    if (s == "contiguous") return FoldStrategy::contiguous;
    throw ConfigError("unknown fold strategy '" + std::string(s) + "' (expected stratified|contiguous)");
}

std::string_view to_string(Mode m) noexcept {
    switch (m) {
    case Mode::baseline: return "baseline";
    case Mode::omit: return "omit";
    case Mode::only: return "only";
    }
    return "?";
}

Mode parse_mode(std::string_view s) {
    if (s == "baseline") return Mode::baseline;
    if (s == "omit") return Mode::omit;
    if (s == "only") return Mode::only;
    throw ConfigError("unknown mode '" + std::string(s) + "' (expected baseline|omit|only)");
}

std::vector<std::size_t> FoldPlan::fold_sizes() const {
    std::vector<std::size_t> sizes(k, 0);
    for (auto f : assignment) ++sizes[f];
    return sizes;
}

FoldPlan partition_folds(const Dataset& d, std::size_t k, FoldStrategy strategy, std::uint64_t seed) {
    const std::size_t n = d.size();
    if (k < 2) throw ConfigError("k must be at least 2, got " + std::to_string(k));
    if (k > n) throw ConfigError("k = " + std::to_string(k) + " exceeds record count " + std::to_string(n));

    FoldPlan plan{k, std::vector<std::size_t>(n), strategy, seed};
    if (strategy == FoldStrategy::contiguous) {
        for (std::size_t i = 0; i < n; ++i) plan.assignment[i] = i * k / n;
        return plan;
    }
    std::map<int, std::vector<std::size_t>> strata;
    for (std::size_t i = 0; i < n; ++i) strata[d.attack_type(i)].push_back(i);
    std::size_t next = 0;
    for (auto& [type, members] : strata) {
        auto rng = make_engine(derive_seed(seed, "fold-stratum-" + std::to_string(type)));
        shuffle(std::span<std::size_t>(members), rng);
        for (auto i : members) {
            plan.assignment[i] = next;
            next = (next + 1) % k;
        }
    }
    return plan;
}

std::string ScenarioSpec::label() const {
    if (mode == Mode::baseline) return "baseline";
    return std::string(to_string(mode)) + "-" + std::string(to_string(level)) + "-" + std::to_string(target.value_or(0));
}

ScenarioSpec ScenarioSpec::from_label(std::string_view label) {
    if (label == "baseline") return baseline();
    const auto p1 = label.find('-');
    const auto p2 = label.find('-', p1 == std::string_view::npos ? p1 : p1 + 1);
    if (p1 == std::string_view::npos || p2 == std::string_view::npos)
        throw ConfigError("malformed scenario label '" + std::string(label) + "'");
    const auto unit = csv::parse_int(label.substr(p2 + 1));
    if (!unit) throw ConfigError("malformed scenario label '" + std::string(label) + "'");
    ScenarioSpec s{parse_mode(label.substr(0, p1)), parse_level(label.substr(p1 + 1, p2 - p1 - 1)),
                   static_cast<int>(*unit)};
    if (s.mode == Mode::baseline) throw ConfigError("malformed scenario label '" + std::string(label) + "'");
    return s;
}

std::vector<ScenarioSpec> enumerate_scenarios(const AttackTaxonomy& tax, Level level, const std::set<Mode>& modes) {
    std::vector<ScenarioSpec> out;
    if (modes.contains(Mode::baseline)) out.push_back(ScenarioSpec::baseline());
    for (Mode m : {Mode::omit, Mode::only}) {
        if (!modes.contains(m)) continue;
        for (int u : tax.units(level)) out.push_back({m, level, u});
    }
    return out;
}

ScenarioSchedule build_schedule(const std::vector<ScenarioSpec>& scenarios, std::size_t k) {
    ScenarioSchedule out;
    out.reserve(scenarios.size() * k);
    for (const auto& s : scenarios)
        for (std::size_t f = 0; f < k; ++f) out.push_back({s, f});
    return out;
}

namespace {

enum class Placement { baseline, force_test };

Placement placement(const Dataset& d, const ScenarioSpec& s, std::size_t i) {
    if (s.mode == Mode::baseline || !d.malicious(i)) return Placement::baseline;
    const bool in_target = d.taxonomy().unit_of(d.attack_type(i), s.level) == *s.target;
    if (s.mode == Mode::omit) return in_target ? Placement::force_test : Placement::baseline;
    return in_target ? Placement::baseline : Placement::force_test;
}

void check_scenario(const Dataset& d, const ScenarioSpec& s) {
    if (s.mode == Mode::baseline) {
        if (s.target) throw ConfigError("baseline scenario must not have a target");
        return;
    }
    if (!s.target) throw ConfigError(std::string(to_string(s.mode)) + " scenario requires a target");
    const auto units = d.taxonomy().units(s.level);
    if (!std::binary_search(units.begin(), units.end(), *s.target))
        throw ConfigError("target " + std::to_string(*s.target) + " is not a " + std::string(to_string(s.level)) +
                          " in the taxonomy");
}

}  // namespace

SplitInstance materialize_split(const Dataset& d, const FoldPlan& plan, std::size_t fold, const ScenarioSpec& scenario) {
    if (fold >= plan.k) throw ConfigError("fold " + std::to_string(fold) + " out of range for k=" + std::to_string(plan.k));
    if (plan.assignment.size() != d.size()) throw ConfigError("fold plan does not match dataset size");
    check_scenario(d, scenario);

    SplitInstance s{scenario, fold, {}, {}};
    std::size_t target_records = 0;
    for (std::size_t i = 0; i < d.size(); ++i) {
        if (scenario.mode != Mode::baseline && d.malicious(i) &&
            d.taxonomy().unit_of(d.attack_type(i), scenario.level) == *scenario.target)
            ++target_records;
        const bool test = placement(d, scenario, i) == Placement::force_test || plan.assignment[i] == fold;
        (test ? s.test : s.train).push_back(i);
    }
    if (scenario.mode != Mode::baseline && target_records == 0)
        throw Error("empty target unit: " + scenario.label() + " has no records");
    return s;
}

ValidationReport check_split(const Dataset& d, const FoldPlan& plan, const SplitInstance& s) {
    ValidationReport rep;
    const std::size_t n = d.size();
    if (s.fold >= plan.k) {
        rep.violations.push_back("fold " + std::to_string(s.fold) + " out of range");
        return rep;
    }
    if (s.scenario.mode != Mode::baseline && !s.scenario.target) {
        rep.violations.emplace_back("scenario lacks a target");
        return rep;
    }
    std::vector<int> in_train(n, 0);
    std::vector<int> in_test(n, 0);
    for (auto i : s.train) {
        if (i >= n) rep.violations.push_back("train index " + std::to_string(i) + " out of range");
        else ++in_train[i];
    }
    for (auto i : s.test) {
        if (i >= n) rep.violations.push_back("test index " + std::to_string(i) + " out of range");
        else ++in_test[i];
    }
    for (std::size_t i = 0; i < n; ++i) {
        const std::string rec = "record " + std::to_string(i);
        if (in_train[i] > 1 || in_test[i] > 1) {
            rep.violations.push_back(rec + " appears more than once in one partition");
            continue;
        }
        if (in_train[i] && in_test[i]) {
            rep.violations.push_back(rec + " is in both train and test");
            continue;
        }
        if (!in_train[i] && !in_test[i]) {
            rep.violations.push_back(rec + " is in neither train nor test");
            continue;
        }
        const bool test = in_test[i] != 0;
        const bool fold_match = plan.assignment[i] == s.fold;
        if (!d.malicious(i)) {
            if (test != fold_match) rep.violations.push_back("benign " + rec + " was moved from its baseline partition");
            continue;
        }
        if (s.scenario.mode == Mode::baseline) {
            if (test != fold_match) rep.violations.push_back(rec + " deviates from the baseline split");
            continue;
        }
        const bool in_target = d.taxonomy().contains(d.attack_type(i)) &&
                               d.taxonomy().unit_of(d.attack_type(i), s.scenario.level) == *s.scenario.target;
        if (s.scenario.mode == Mode::omit) {
            if (in_target && !test) rep.violations.push_back(rec + " of omitted unit " + std::to_string(*s.scenario.target) + " is in train");
            else if (!in_target && test != fold_match) rep.violations.push_back(rec + " deviates from the baseline split");
        } else {
            if (!in_target && !test) rep.violations.push_back("malicious " + rec + " outside unit " + std::to_string(*s.scenario.target) + " is in train");
            else if (in_target && test != fold_match) rep.violations.push_back(rec + " deviates from the baseline split");
        }
    }
    return rep;
}

nlohmann::ordered_json to_json(const ScenarioSpec& s) {
    nlohmann::ordered_json j;
    j["mode"] = to_string(s.mode);
    j["level"] = s.mode == Mode::baseline ? nlohmann::ordered_json() : nlohmann::ordered_json(to_string(s.level));
    j["target"] = s.target ? nlohmann::ordered_json(*s.target) : nlohmann::ordered_json();
    return j;
}

ScenarioSpec scenario_from_json(const nlohmann::json& j) {
    ScenarioSpec s;
    s.mode = parse_mode(j.at("mode").get<std::string>());
    if (s.mode != Mode::baseline) {
        s.level = parse_level(j.at("level").get<std::string>());
        s.target = j.at("target").get<int>();
    }
    return s;
}

nlohmann::ordered_json to_json(const SplitInstance& s) {
    nlohmann::ordered_json j;
    j["scenario"] = to_json(s.scenario);
    j["fold"] = s.fold;
    j["train"] = s.train;
    j["test"] = s.test;
    return j;
}

}  // namespace iidseval
