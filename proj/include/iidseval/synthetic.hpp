#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include <json.hpp>

#include "iidseval/dataset.hpp"

namespace iidseval {

/// One synthetic attack population. Each instance is a fresh benign draw with
/// `offset` added to every feature in `signature`.
struct SyntheticAttack {
    int id = 1;
    std::size_t count = 0;
    std::vector<std::size_t> signature;
    double offset = 0.0;
    /// Attacks in the same group must share their signature features.
    std::optional<int> overlap_group;
    /// Category in the generated taxonomy; defaults to the attack id.
    std::optional<int> category;

    bool operator==(const SyntheticAttack&) const = default;
};

struct SyntheticConfig {
    std::size_t benign_count = 0;
    std::vector<SyntheticAttack> attacks;
    std::size_t dim = 1;
    double noise = 1.0;
    std::uint64_t seed = 0;

    /// Throws ConfigError naming the first violated field.
    void validate() const;

    bool operator==(const SyntheticConfig&) const = default;
};

/// Benign rows are Gaussian(0, noise) per feature; records are interleaved by
/// a seeded shuffle. Pure function of the config.
Dataset generate_synthetic(const SyntheticConfig& cfg);

/// Taxonomy implied by a config: attack "A<id>", category "C<id>".
AttackTaxonomy synthetic_taxonomy(const SyntheticConfig& cfg);

nlohmann::ordered_json to_json(const SyntheticConfig& cfg);
SyntheticConfig synthetic_config_from_json(const nlohmann::json& j);

}  // namespace iidseval
