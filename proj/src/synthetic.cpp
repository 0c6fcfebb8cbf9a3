#include "iidseval/synthetic.hpp"

#include <map>
#include <numeric>
#include <set>

#include "iidseval/error.hpp"
#include "iidseval/random.hpp"

namespace iidseval {

void SyntheticConfig::validate() const {
    if (benign_count == 0) throw ConfigError("benign_count must be positive");
    if (dim == 0) throw ConfigError("dim must be positive");
    if (!(noise > 0.0)) throw ConfigError("noise must be positive");
    if (attacks.empty()) throw ConfigError("attacks must not be empty");
    std::set<int> ids;
    std::map<int, std::vector<std::size_t>> groups;
    for (const auto& a : attacks) {
        const std::string where = "attacks[id=" + std::to_string(a.id) + "]";
        if (a.id <= 0) throw ConfigError(where + ".id must be positive");
        if (!ids.insert(a.id).second) throw ConfigError(where + ".id is duplicated");
        if (a.count == 0) throw ConfigError(where + ".count must be positive");
        if (a.category && *a.category <= 0) throw ConfigError(where + ".category must be positive");
        for (auto f : a.signature)
            if (f >= dim) throw ConfigError(where + ".signature index " + std::to_string(f) + " >= dim");
        if (a.overlap_group) {
            auto sig = a.signature;
            std::sort(sig.begin(), sig.end());
            auto [it, inserted] = groups.emplace(*a.overlap_group, sig);
            if (!inserted && it->second != sig)
                throw ConfigError(where + ".signature differs from overlap_group " + std::to_string(*a.overlap_group));
        }
    }
}

AttackTaxonomy synthetic_taxonomy(const SyntheticConfig& cfg) {
    std::map<int, AttackType> types;
    std::map<int, Category> cats;
    for (const auto& a : cfg.attacks) {
        const int c = a.category.value_or(a.id);
        types.emplace(a.id, AttackType{"A" + std::to_string(a.id), c});
        cats.emplace(c, Category{"C" + std::to_string(c), "synthetic category " + std::to_string(c)});
    }
    return AttackTaxonomy(std::move(types), std::move(cats));
}

Dataset generate_synthetic(const SyntheticConfig& cfg) {
    cfg.validate();
    auto rng = make_engine(derive_seed(cfg.seed, "synthetic"));
    const std::size_t total =
        cfg.benign_count + std::accumulate(cfg.attacks.begin(), cfg.attacks.end(), std::size_t{0},
                                           [](std::size_t s, const SyntheticAttack& a) { return s + a.count; });
    std::vector<double> rows(total * cfg.dim);
    std::vector<int> labels(total, kBenign);
    std::size_t r = 0;
    const auto draw = [&](std::size_t row) {
        for (std::size_t f = 0; f < cfg.dim; ++f) rows[row * cfg.dim + f] = cfg.noise * standard_normal(rng);
    };
    for (; r < cfg.benign_count; ++r) draw(r);
    for (const auto& a : cfg.attacks) {
        for (std::size_t n = 0; n < a.count; ++n, ++r) {
            draw(r);
            for (auto f : a.signature) rows[r * cfg.dim + f] += a.offset;
            labels[r] = a.id;
        }
    }

    std::vector<std::size_t> order(total);
    std::iota(order.begin(), order.end(), std::size_t{0});
    shuffle(std::span<std::size_t>(order), rng);
    std::vector<double> features(total * cfg.dim);
    std::vector<int> out_labels(total);
    for (std::size_t i = 0; i < total; ++i) {
        std::copy_n(rows.begin() + static_cast<std::ptrdiff_t>(order[i] * cfg.dim), cfg.dim,
                    features.begin() + static_cast<std::ptrdiff_t>(i * cfg.dim));
        out_labels[i] = labels[order[i]];
    }

    FeatureSchema schema;
    for (std::size_t f = 0; f < cfg.dim; ++f) {
        schema.names.push_back("f" + std::to_string(f));
        schema.kinds.push_back(FeatureKind::numeric);
    }
    schema.category_values.resize(cfg.dim);
    return Dataset(std::move(schema), synthetic_taxonomy(cfg), std::move(features), std::move(out_labels));
}

nlohmann::ordered_json to_json(const SyntheticConfig& cfg) {
    nlohmann::ordered_json j;
    j["benign_count"] = cfg.benign_count;
    j["dim"] = cfg.dim;
    j["noise"] = cfg.noise;
    j["seed"] = cfg.seed;
    auto& attacks = j["attacks"] = nlohmann::ordered_json::array();
    for (const auto& a : cfg.attacks) {
        nlohmann::ordered_json aj;
        aj["id"] = a.id;
        aj["count"] = a.count;
        aj["signature"] = a.signature;
        aj["offset"] = a.offset;
        aj["overlap_group"] = a.overlap_group ? nlohmann::ordered_json(*a.overlap_group) : nlohmann::ordered_json();
        aj["category"] = a.category ? nlohmann::ordered_json(*a.category) : nlohmann::ordered_json();
        attacks.push_back(std::move(aj));
    }
    return j;
}

SyntheticConfig synthetic_config_from_json(const nlohmann::json& j) {
    SyntheticConfig cfg;
    try {
        cfg.benign_count = j.at("benign_count").get<std::size_t>();
        cfg.dim = j.at("dim").get<std::size_t>();
        cfg.noise = j.value("noise", 1.0);
        cfg.seed = j.value("seed", std::uint64_t{0});
        for (const auto& aj : j.at("attacks")) {
            SyntheticAttack a;
            a.id = aj.at("id").get<int>();
            a.count = aj.at("count").get<std::size_t>();
            a.signature = aj.at("signature").get<std::vector<std::size_t>>();
            a.offset = aj.at("offset").get<double>();
            if (aj.contains("overlap_group") && !aj["overlap_group"].is_null())
                a.overlap_group = aj["overlap_group"].get<int>();
            if (aj.contains("category") && !aj["category"].is_null()) a.category = aj["category"].get<int>();
            cfg.attacks.push_back(std::move(a));
        }
    } catch (const nlohmann::json::exception& e) {
        throw ConfigError(std::string("synthetic config: ") + e.what());
    }
    cfg.validate();
    return cfg;
}

}  // namespace iidseval
