#include "iidseval/forest.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "iidseval/error.hpp"

namespace iidseval {

double DecisionTree::leaf_value(std::span<const double> x) const {
    std::size_t n = 0;
    while (nodes[n].feature >= 0) {
        const auto& node = nodes[n];
        n = static_cast<std::size_t>(x[static_cast<std::size_t>(node.feature)] <= node.threshold ? node.left : node.right);
    }
    return nodes[n].value;
}

std::size_t DecisionTree::depth() const {
    if (nodes.empty()) return 0;
    std::size_t best = 0;
    std::vector<std::pair<std::size_t, std::size_t>> stack{{0, 0}};
    while (!stack.empty()) {
        const auto [n, d] = stack.back();
        stack.pop_back();
        best = std::max(best, d);
        if (nodes[n].feature >= 0) {
            stack.emplace_back(static_cast<std::size_t>(nodes[n].left), d + 1);
            stack.emplace_back(static_cast<std::size_t>(nodes[n].right), d + 1);
        }
    }
    return best;
}

double RandomForest::score(std::span<const double> x) const {
    if (trees.empty()) return 0.0;
    std::size_t votes = 0;
    for (const auto& t : trees) votes += t.leaf_value(x) >= 0.5;
    return static_cast<double>(votes) / static_cast<double>(trees.size());
}

namespace {

struct Split {
    int feature = -1;
    double threshold = 0.0;
    double impurity = std::numeric_limits<double>::infinity();
};

struct Builder {
    const Matrix& X;
    std::span<const int> y;
    const ForestParams& params;
    Engine& rng;
    std::vector<std::pair<double, int>> buf;

    /// Best threshold on one feature, or impurity = inf if no valid split.
    Split best_on_feature(std::size_t f, std::span<const std::size_t> idx) {
        buf.clear();
        std::size_t pos_total = 0;
        for (auto i : idx) {
            buf.emplace_back(X(i, f), y[i]);
            pos_total += static_cast<std::size_t>(y[i]);
        }
        std::sort(buf.begin(), buf.end());
        const std::size_t n = buf.size();
        const std::size_t min_leaf = std::max<std::size_t>(params.min_leaf, 1);
        Split best;
        std::size_t pos_left = 0;
        for (std::size_t j = 0; j + 1 < n; ++j) {
            pos_left += static_cast<std::size_t>(buf[j].second);
            if (!(buf[j].first < buf[j + 1].first)) continue;
            const std::size_t nl = j + 1;
            const std::size_t nr = n - nl;
            if (nl < min_leaf || nr < min_leaf) continue;
            const double pl = static_cast<double>(pos_left);
            const double pr = static_cast<double>(pos_total - pos_left);
            // n * weighted Gini = 2 * (pos_l * neg_l / n_l + pos_r * neg_r / n_r)
            const double imp = 2.0 * (pl * (static_cast<double>(nl) - pl) / static_cast<double>(nl) +
                                      pr * (static_cast<double>(nr) - pr) / static_cast<double>(nr));
            if (imp < best.impurity) {
                double mid = buf[j].first + (buf[j + 1].first - buf[j].first) / 2.0;
                if (!(mid < buf[j + 1].first)) mid = buf[j].first;
                best = {static_cast<int>(f), mid, imp};
            }
        }
        return best;
    }

    Split choose(std::span<const std::size_t> idx) {
        const std::size_t nf = X.cols;
        std::size_t m = params.max_features ? params.max_features
                                            : static_cast<std::size_t>(std::floor(std::sqrt(static_cast<double>(nf))));
        m = std::clamp<std::size_t>(m, 1, nf);
        std::vector<std::size_t> features(nf);
        std::iota(features.begin(), features.end(), std::size_t{0});
        Split best;
        // Partial Fisher-Yates: draw features one at a time; past the first m,
        // keep drawing only until some feature admits a valid split.
        for (std::size_t drawn = 0; drawn < nf; ++drawn) {
            if (drawn >= m && best.feature >= 0) break;
            const auto j = drawn + static_cast<std::size_t>(uniform_index(rng, nf - drawn));
            std::swap(features[drawn], features[j]);
            const Split s = best_on_feature(features[drawn], idx);
            if (s.impurity < best.impurity) best = s;
        }
        return best;
    }
};

}  // namespace

DecisionTree train_tree(const Matrix& X, std::span<const int> labels, std::vector<std::size_t> sample,
                        const ForestParams& params, Engine& rng) {
    if (sample.empty()) throw Error("cannot grow a tree on an empty sample");
    Builder b{X, labels, params, rng, {}};
    DecisionTree tree;

    struct Task {
        std::size_t node, begin, end, depth;
    };
    tree.nodes.emplace_back();
    std::vector<Task> stack{{0, 0, sample.size(), 0}};
    while (!stack.empty()) {
        const Task t = stack.back();
        stack.pop_back();
        const std::span<std::size_t> idx(sample.data() + t.begin, t.end - t.begin);
        std::size_t pos = 0;
        for (auto i : idx) pos += static_cast<std::size_t>(labels[i]);
        tree.nodes[t.node].value = static_cast<double>(pos) / static_cast<double>(idx.size());

        const bool pure = pos == 0 || pos == idx.size();
        const bool depth_limit = params.max_depth != 0 && t.depth >= params.max_depth;
        if (pure || depth_limit || idx.size() < 2 * std::max<std::size_t>(params.min_leaf, 1)) continue;

        const Split s = b.choose(idx);
        if (s.feature < 0) continue;
        const auto f = static_cast<std::size_t>(s.feature);
        const auto mid = std::stable_partition(idx.begin(), idx.end(),
                                               [&](std::size_t i) { return X(i, f) <= s.threshold; });
        const std::size_t split_at = t.begin + static_cast<std::size_t>(mid - idx.begin());

        const auto left = static_cast<int>(tree.nodes.size());
        tree.nodes.emplace_back();
        tree.nodes.emplace_back();
        auto& node = tree.nodes[t.node];
        node.feature = s.feature;
        node.threshold = s.threshold;
        node.left = left;
        node.right = left + 1;
        stack.push_back({static_cast<std::size_t>(left + 1), split_at, t.end, t.depth + 1});
        stack.push_back({static_cast<std::size_t>(left), t.begin, split_at, t.depth + 1});
    }
    return tree;
}

RandomForest train_random_forest(const ForestParams& params, const Matrix& X, std::span<const int> labels,
                                 std::uint64_t seed) {
    if (params.n_trees == 0) throw ConfigError("n_trees must be positive");
    if (X.rows == 0 || X.rows != labels.size()) throw Error("forest training data is empty or misaligned");
    RandomForest forest;
    forest.trees.reserve(params.n_trees);
    for (std::size_t t = 0; t < params.n_trees; ++t) {
        auto rng = make_engine(derive_seed(seed, "tree-" + std::to_string(t)));
        std::vector<std::size_t> sample(X.rows);
        if (params.bootstrap) {
            for (auto& s : sample) s = static_cast<std::size_t>(uniform_index(rng, X.rows));
        } else {
            std::iota(sample.begin(), sample.end(), std::size_t{0});
        }
        forest.trees.push_back(train_tree(X, labels, std::move(sample), params, rng));
    }
    return forest;
}

nlohmann::ordered_json to_json(const ForestParams& p) {
    nlohmann::ordered_json j;
    j["n_trees"] = p.n_trees;
    j["max_depth"] = p.max_depth;
    j["min_leaf"] = p.min_leaf;
    j["max_features"] = p.max_features;
    j["bootstrap"] = p.bootstrap;
    return j;
}

ForestParams forest_params_from_json(const nlohmann::json& j) {
    ForestParams p;
    for (const auto& [key, v] : j.items()) {
        if (key == "n_trees") p.n_trees = v.get<std::size_t>();
        else if (key == "max_depth") p.max_depth = v.get<std::size_t>();
        else if (key == "min_leaf") p.min_leaf = v.get<std::size_t>();
        else if (key == "max_features") p.max_features = v.get<std::size_t>();
        else if (key == "bootstrap") p.bootstrap = v.get<bool>();
        else throw ConfigError("unknown random_forest hyperparameter '" + key + "'");
    }
    if (p.n_trees == 0) throw ConfigError("random_forest.n_trees must be positive");
    if (p.min_leaf == 0) throw ConfigError("random_forest.min_leaf must be positive");
    return p;
}

nlohmann::ordered_json to_json(const RandomForest& f) {
    auto trees = nlohmann::ordered_json::array();
    for (const auto& t : f.trees) {
        // Parallel arrays keep the model file compact.
        nlohmann::ordered_json tj;
        std::vector<int> feature, left, right;
        std::vector<double> threshold, value;
        for (const auto& n : t.nodes) {
            feature.push_back(n.feature);
            threshold.push_back(n.threshold);
            left.push_back(n.left);
            right.push_back(n.right);
            value.push_back(n.value);
        }
        tj["feature"] = feature;
        tj["threshold"] = threshold;
        tj["left"] = left;
        tj["right"] = right;
        tj["value"] = value;
        trees.push_back(std::move(tj));
    }
    return trees;
}

RandomForest forest_from_json(const nlohmann::json& j) {
    RandomForest f;
    for (const auto& tj : j) {
        const auto feature = tj.at("feature").get<std::vector<int>>();
        const auto threshold = tj.at("threshold").get<std::vector<double>>();
        const auto left = tj.at("left").get<std::vector<int>>();
        const auto right = tj.at("right").get<std::vector<int>>();
        const auto value = tj.at("value").get<std::vector<double>>();
        const std::size_t n = feature.size();
        if (n == 0 || threshold.size() != n || left.size() != n || right.size() != n || value.size() != n)
            throw ParseError("inconsistent tree arrays", 0);
        DecisionTree t;
        for (std::size_t i = 0; i < n; ++i) {
            if (feature[i] >= 0 && (left[i] <= static_cast<int>(i) || right[i] <= static_cast<int>(i) ||
                                    left[i] >= static_cast<int>(n) || right[i] >= static_cast<int>(n)))
                throw ParseError("tree child index out of range", 0);
            t.nodes.push_back({feature[i], threshold[i], left[i], right[i], value[i]});
        }
        f.trees.push_back(std::move(t));
    }
    return f;
}

}  // namespace iidseval
