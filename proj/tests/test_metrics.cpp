#include <doctest.h>

#include <algorithm>
#include <memory>
#include <random>

#include "iidseval/error.hpp"
#include "iidseval/metrics.hpp"
#include "support.hpp"

using namespace iidseval;

namespace {

struct Bools {
    std::unique_ptr<bool[]> data;
    std::size_t n;
    explicit Bools(const std::vector<int>& v) : data(new bool[v.size()]), n(v.size()) {
        for (std::size_t i = 0; i < n; ++i) data[i] = v[i] != 0;
    }
    std::span<const bool> span() const { return {data.get(), n}; }
};

ConfusionCounts conf(const std::vector<int>& pred, const std::vector<int>& truth) {
    return confusion(Bools(pred).span(), Bools(truth).span());
}

Dataset labeled(const std::vector<int>& labels) {
    return Dataset(FeatureSchema{{"x"}, {FeatureKind::numeric}, "attack_type", {{}}, {}},
                   builtin_gas_pipeline_taxonomy(), std::vector<double>(labels.size(), 0.0), labels);
}

GroupRecallRow row_with(int group, std::optional<std::pair<std::size_t, std::size_t>> tally, std::size_t fold) {
    GroupRecallRow r;
    r.fold = fold;
    if (tally) r.groups[group] = {tally->first, tally->second};
    else r.groups[group] = {0, 0};
    return r;
}

}  // namespace

TEST_CASE("confusion counts") {
    const auto c = conf({1, 1, 0, 0}, {1, 0, 0, 1});
    CHECK(c == ConfusionCounts{1, 1, 1, 1});
    const auto all = conf({1, 1, 1, 0, 0}, {1, 1, 1, 0, 0});
    CHECK(all == ConfusionCounts{3, 0, 2, 0});
    CHECK_THROWS_AS(conf({1}, {1, 0}), Error);
    CHECK_THROWS_AS(conf({}, {}), Error);

    std::mt19937_64 rng(5);
    for (int t = 0; t < 10; ++t) {
        std::vector<int> p(30), y(30);
        for (auto& v : p) v = static_cast<int>(rng() % 2);
        for (auto& v : y) v = static_cast<int>(rng() % 2);
        const auto o = testing::oracle_confusion(p, y);
        CHECK(conf(p, y) == ConfusionCounts{o.tp, o.fp, o.tn, o.fn});
        CHECK(conf(p, y).total() == 30);
    }
}

TEST_CASE("precision, recall and f1 conventions") {
    CHECK(precision({9, 1, 0, 0}) == 0.9);
    CHECK_FALSE(precision({0, 0, 5, 5}).has_value());
    CHECK_FALSE(recall({0, 3, 5, 0}).has_value());
    CHECK(recall({3, 0, 0, 1}) == 0.75);
    CHECK(f1(1.0, 1.0) == 1.0);
    CHECK(*f1(0.5, 1.0) == doctest::Approx(2.0 / 3.0));
    CHECK_FALSE(f1(0.0, 0.0).has_value());
    CHECK_FALSE(f1(std::nullopt, 1.0).has_value());
}

TEST_CASE("per-group recall") {
    const auto d = labeled({3, 3, 3, 3});
    const std::vector<std::size_t> rows{0, 1, 2, 3};
    const auto g = per_group_recall(Bools({1, 1, 1, 0}).span(), d, rows, Level::attack);
    CHECK(g.at(3).recall() == 0.75);
    CHECK(g.size() == 36);
    CHECK_FALSE(g.at(kBenign).recall().has_value());
    const auto c = per_group_recall(Bools({1, 1, 1, 0}).span(), d, rows, Level::category);
    CHECK(c.at(1).recall() == 0.75);
    CHECK_FALSE(c.at(5).recall().has_value());

    // Benign column counts benign records classified benign.
    const auto b = labeled({0, 0, 0, 1});
    const auto gb = per_group_recall(Bools({0, 1, 0, 1}).span(), b, rows, Level::attack);
    CHECK(*gb.at(kBenign).recall() == doctest::Approx(2.0 / 3.0));
}

TEST_CASE("per-group recall matches a brute-force tally") {
    std::mt19937_64 rng(6);
    for (int t = 0; t < 20; ++t) {
        std::vector<int> labels(50);
        const std::vector<int> pool{0, 2, 14, 30};
        for (auto& l : labels) l = pool[rng() % pool.size()];
        const auto d = labeled(labels);
        std::vector<std::size_t> rows(50);
        for (std::size_t i = 0; i < 50; ++i) rows[i] = i;
        std::vector<int> pred(50);
        for (auto& p : pred) p = static_cast<int>(rng() % 2);
        for (Level level : {Level::attack, Level::category}) {
            const auto g = per_group_recall(Bools(pred).span(), d, rows, level);
            for (const auto& [id, ch] : testing::oracle_groups(pred, d, rows, level)) {
                CHECK(g.at(id).count == ch.first);
                CHECK(g.at(id).hits == ch.second);
            }
        }
    }
}

TEST_CASE("fold aggregation skips undefined folds") {
    std::vector<GroupRecallRow> rows;
    const std::vector<std::pair<std::size_t, std::size_t>> tallies{{10, 9}, {10, 10}, {10, 8}, {10, 10}, {10, 9}};
    for (std::size_t f = 0; f < tallies.size(); ++f) rows.push_back(row_with(1, tallies[f], f));
    auto agg = aggregate_folds(rows);
    CHECK(*agg.mean_recall.at(1) == doctest::Approx(0.92));
    CHECK(agg.defined_folds.at(1) == 5);

    rows = {row_with(1, std::pair<std::size_t, std::size_t>{2, 1}, 0), row_with(1, std::nullopt, 1),
            row_with(1, std::pair<std::size_t, std::size_t>{4, 4}, 2)};
    agg = aggregate_folds(rows);
    CHECK(agg.mean_recall.at(1) == 0.75);
    CHECK(agg.defined_folds.at(1) == 2);

    rows = {row_with(1, std::nullopt, 0)};
    agg = aggregate_folds(rows);
    CHECK_FALSE(agg.mean_recall.at(1).has_value());
    CHECK(agg.defined_folds.at(1) == 0);

    std::vector<GroupRecallRow> mixed{row_with(1, std::nullopt, 0), row_with(1, std::nullopt, 1)};
    mixed[1].scenario = ScenarioSpec::omit(Level::attack, 1);
    CHECK_THROWS_AS(aggregate_folds(mixed), Error);
    CHECK_THROWS_AS(aggregate_folds(std::vector<GroupRecallRow>{}), Error);
}

TEST_CASE("property: overall recall is the count-weighted mean of attack-group recalls") {
    std::mt19937_64 rng(7);
    for (int t = 0; t < 100; ++t) {
        std::vector<int> labels(20 + rng() % 30);
        for (auto& l : labels) l = static_cast<int>(rng() % 6);
        const auto d = labeled(labels);
        std::vector<std::size_t> rows(labels.size());
        for (std::size_t i = 0; i < rows.size(); ++i) rows[i] = i;
        std::vector<int> pred(labels.size());
        for (auto& p : pred) p = static_cast<int>(rng() % 2);
        const auto r = evaluate_fold(ScenarioSpec::baseline(), 0, Level::attack, Bools(pred).span(), d, rows);
        std::size_t count = 0, hits = 0;
        for (const auto& [g, tally] : r.groups)
            if (g != kBenign) {
                count += tally.count;
                hits += tally.hits;
            }
        if (count == 0) {
            CHECK_FALSE(r.recall().has_value());
            continue;
        }
        CHECK(*r.recall() == doctest::Approx(static_cast<double>(hits) / static_cast<double>(count)));
    }
}

TEST_CASE("property: jointly permuting predictions and truth changes nothing") {
    std::mt19937_64 rng(8);
    for (int t = 0; t < 50; ++t) {
        std::vector<int> p(25), y(25);
        for (auto& v : p) v = static_cast<int>(rng() % 2);
        for (auto& v : y) v = static_cast<int>(rng() % 2);
        const auto before = conf(p, y);
        std::vector<std::size_t> perm(25);
        for (std::size_t i = 0; i < 25; ++i) perm[i] = i;
        std::shuffle(perm.begin(), perm.end(), rng);
        std::vector<int> p2(25), y2(25);
        for (std::size_t i = 0; i < 25; ++i) {
            p2[i] = p[perm[i]];
            y2[i] = y[perm[i]];
        }
        CHECK(conf(p2, y2) == before);
    }
}

TEST_CASE("perfect predictor") {
    const auto d = labeled({0, 5, 0, 9, 20, 0});
    const std::vector<std::size_t> rows{0, 1, 2, 3, 4, 5};
    std::vector<int> pred(6);
    for (std::size_t i = 0; i < 6; ++i) pred[i] = d.malicious(i);
    const auto r = evaluate_fold(ScenarioSpec::baseline(), 0, Level::category, Bools(pred).span(), d, rows);
    CHECK(r.precision() == 1.0);
    CHECK(r.recall() == 1.0);
    CHECK(r.f1() == 1.0);
    for (const auto& [g, tally] : r.groups)
        if (tally.count) CHECK(tally.recall() == 1.0);
}

TEST_CASE("mean_defined") {
    const std::vector<std::optional<double>> v{0.5, std::nullopt, 1.0};
    const auto [mean, n] = mean_defined(v);
    CHECK(mean == 0.75);
    CHECK(n == 2);
    const std::vector<std::optional<double>> none{std::nullopt};
    CHECK_FALSE(mean_defined(none).first.has_value());
}
