#pragma once

#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <string_view>
#include <vector>

namespace iidseval {

/// Aggregation level at which attacks are grouped into evaluation units.
enum class Level { attack, category };

std::string_view to_string(Level level) noexcept;
Level parse_level(std::string_view s);

/// Attack-type id 0 is reserved for benign traffic.
inline constexpr int kBenign = 0;

struct AttackType {
    std::string name;
    int category = 0;

    bool operator==(const AttackType&) const = default;
};

struct Category {
    std::string abbreviation;
    std::string name;

    bool operator==(const Category&) const = default;
};

/// Two-level map from attack types to categories.
class AttackTaxonomy {
public:
    AttackTaxonomy() = default;
    /// Throws ConfigError on a dangling category reference or a non-positive id.
    AttackTaxonomy(std::map<int, AttackType> types, std::map<int, Category> categories);

    const std::map<int, AttackType>& types() const noexcept { return types_; }
    const std::map<int, Category>& categories() const noexcept { return categories_; }

    bool contains(int attack_type) const { return types_.contains(attack_type); }
    int category_of(int attack_type) const;
    std::vector<int> attacks_in(int category) const;

    /// Unit ids at a level, ascending.
    std::vector<int> units(Level level) const;
    /// Unit an attack type belongs to at a level; kBenign for benign.
    int unit_of(int attack_type, Level level) const;
    /// Short display label: category abbreviation or attack name.
    std::string unit_label(int unit, Level level) const;

    bool operator==(const AttackTaxonomy&) const = default;

private:
    std::map<int, AttackType> types_;
    std::map<int, Category> categories_;
};

/// The gas-pipeline taxonomy: 35 attack types in 7 categories. Attack types
/// are numbered 1..35 in category order and named "c.j" (j-th attack of
/// category c).
const AttackTaxonomy& builtin_gas_pipeline_taxonomy();

/// Taxonomy CSV: header `kind,id,name,category,abbreviation`; category rows
/// carry id, name and abbreviation, attack rows carry id, name and category.
AttackTaxonomy parse_taxonomy(std::istream& in);
AttackTaxonomy load_taxonomy(const std::filesystem::path& path);
/// "builtin" (or "gas-pipeline") selects the bundled taxonomy, anything else is a path.
AttackTaxonomy load_taxonomy(std::string_view source);
void write_taxonomy(std::ostream& out, const AttackTaxonomy& tax);

}  // namespace iidseval
