#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "iidseval/matrix.hpp"
#include "iidseval/random.hpp"

namespace iidseval {

struct ForestParams {
    std::size_t n_trees = 100;
    /// 0 means unbounded.
    std::size_t max_depth = 20;
    std::size_t min_leaf = 2;
    /// Features examined per node; 0 means floor(sqrt(F)).
    std::size_t max_features = 0;
    bool bootstrap = true;

    bool operator==(const ForestParams&) const = default;
};

struct TreeNode {
    /// -1 marks a leaf.
    int feature = -1;
    double threshold = 0.0;
    int left = -1;
    int right = -1;
    /// Fraction of malicious training samples that reached this node.
    double value = 0.0;

    bool operator==(const TreeNode&) const = default;
};

/// CART tree; samples with x[feature] <= threshold go left.
struct DecisionTree {
    std::vector<TreeNode> nodes;

    double leaf_value(std::span<const double> x) const;
    std::size_t depth() const;

    bool operator==(const DecisionTree&) const = default;
};

struct RandomForest {
    std::vector<DecisionTree> trees;

    /// Fraction of trees whose leaf is majority-malicious (leaf value >= 0.5).
    double score(std::span<const double> x) const;

    bool operator==(const RandomForest&) const = default;
};

/// Grow one tree on `sample` (row ids into X, duplicates allowed) by greedy
/// weighted-Gini minimization over midpoints of sorted unique values.
/// `labels` are 0/1 per row of X.
DecisionTree train_tree(const Matrix& X, std::span<const int> labels, std::vector<std::size_t> sample,
                        const ForestParams& params, Engine& rng);

RandomForest train_random_forest(const ForestParams& params, const Matrix& X, std::span<const int> labels,
                                 std::uint64_t seed);

nlohmann::ordered_json to_json(const ForestParams& p);
ForestParams forest_params_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const RandomForest& f);
RandomForest forest_from_json(const nlohmann::json& j);

}  // namespace iidseval
