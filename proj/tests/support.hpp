#pragma once
// Shared fixtures and brute-force oracles for the unit and acceptance suites.
// Oracles deliberately avoid the library's own helpers.

#include <cstdlib>
#include <filesystem>
#include <map>
#include <optional>
#include <random>
#include <string>
#include <vector>

#include <unistd.h>

#include "iidseval/config.hpp"
#include "iidseval/dataset.hpp"
#include "iidseval/metrics.hpp"
#include "iidseval/synthetic.hpp"

namespace testing {

using namespace iidseval;

/// `n_attacks` attacks on pairwise disjoint two-feature signatures.
inline SyntheticConfig disjoint_config(int n_attacks, std::size_t per_attack, std::size_t benign, double offset,
                                       std::uint64_t seed = 7) {
    SyntheticConfig c;
    c.benign_count = benign;
    c.dim = static_cast<std::size_t>(2 * n_attacks);
    c.noise = 1.0;
    c.seed = seed;
    for (int a = 1; a <= n_attacks; ++a) {
        const auto f = static_cast<std::size_t>(2 * (a - 1));
        c.attacks.push_back({a, per_attack, {f, f + 1}, offset, std::nullopt, std::nullopt});
    }
    return c;
}

/// Attacks 1 and 2 share a signature (overlap group 1); attack 3 is disjoint.
inline SyntheticConfig overlap_config(std::size_t per_attack, std::size_t benign, double offset,
                                      std::uint64_t seed = 11) {
    SyntheticConfig c;
    c.benign_count = benign;
    c.dim = 6;
    c.noise = 1.0;
    c.seed = seed;
    c.attacks.push_back({1, per_attack, {0, 1}, offset, 1, std::nullopt});
    c.attacks.push_back({2, per_attack, {0, 1}, offset, 1, std::nullopt});
    c.attacks.push_back({3, per_attack, {2, 3}, offset, std::nullopt, std::nullopt});
    return c;
}

inline ExperimentConfig experiment(const SyntheticConfig& data, std::vector<std::string> profiles,
                                   std::set<Mode> modes, std::vector<Level> levels = {Level::attack},
                                   std::size_t k = 5) {
    ExperimentConfig cfg;
    cfg.dataset.synthetic = data;
    cfg.k = k;
    cfg.seed = 2024;
    for (const auto& p : profiles) cfg.classifiers.push_back(ClassifierSpec::profile(p));
    cfg.levels = std::move(levels);
    cfg.modes = std::move(modes);
    cfg.modes.insert(Mode::baseline);
    return cfg;
}

inline std::filesystem::path temp_dir(const std::string& name) {
    const auto base = std::filesystem::temp_directory_path() / ("iidseval-test-" + std::to_string(::getpid()));
    const auto dir = base / name;
    std::filesystem::remove_all(dir);
    std::filesystem::create_directories(dir);
    return dir;
}

struct OracleCounts {
    std::size_t tp = 0, fp = 0, tn = 0, fn = 0;
};

inline OracleCounts oracle_confusion(const std::vector<int>& pred, const std::vector<int>& truth) {
    OracleCounts c;
    for (std::size_t i = 0; i < pred.size(); ++i) {
        if (pred[i] && truth[i]) ++c.tp;
        if (pred[i] && !truth[i]) ++c.fp;
        if (!pred[i] && !truth[i]) ++c.tn;
        if (!pred[i] && truth[i]) ++c.fn;
    }
    return c;
}

inline std::optional<double> oracle_ratio(std::size_t num, std::size_t den) {
    if (den == 0) return std::nullopt;
    return static_cast<double>(num) / static_cast<double>(den);
}

/// Per-group (count, hits) by scanning every test row for every group.
inline std::map<int, std::pair<std::size_t, std::size_t>> oracle_groups(const std::vector<int>& pred,
                                                                        const Dataset& d,
                                                                        const std::vector<std::size_t>& rows,
                                                                        Level level) {
    std::map<int, std::pair<std::size_t, std::size_t>> out;
    std::vector<int> groups{0};
    if (level == Level::attack)
        for (const auto& [id, _] : d.taxonomy().types()) groups.push_back(id);
    else
        for (const auto& [id, _] : d.taxonomy().categories()) groups.push_back(id);
    for (int g : groups) {
        std::size_t count = 0, hits = 0;
        for (std::size_t r = 0; r < rows.size(); ++r) {
            const int t = d.attack_type(rows[r]);
            int unit = 0;
            if (t != 0) unit = level == Level::attack ? t : d.taxonomy().types().at(t).category;
            if (unit != g) continue;
            ++count;
            if ((g == 0 && !pred[r]) || (g != 0 && pred[r])) ++hits;
        }
        out[g] = {count, hits};
    }
    return out;
}

}  // namespace testing
