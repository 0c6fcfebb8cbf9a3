#include "iidseval/taxonomy.hpp"

#include <array>
#include <fstream>
#include <ostream>

#include "iidseval/csv.hpp"
#include "iidseval/error.hpp"

namespace iidseval {

std::string_view to_string(Level level) noexcept { return level == Level::attack ? "attack" : "category"; }

Level parse_level(std::string_view s) {
    if (s == "attack") return Level::attack;
    if (s == "category") return Level::category;
    throw ConfigError("unknown level '" + std::string(s) + "' (expected attack|category)");
}

AttackTaxonomy::AttackTaxonomy(std::map<int, AttackType> types, std::map<int, Category> categories)
    : types_(std::move(types)), categories_(std::move(categories)) {
    for (const auto& [id, c] : categories_)
        if (id <= 0) throw ConfigError("category id must be positive, got " + std::to_string(id));
    for (const auto& [id, t] : types_) {
        if (id <= 0) throw ConfigError("attack type id must be positive, got " + std::to_string(id));
        if (!categories_.contains(t.category))
            throw ConfigError("attack type " + std::to_string(id) + " references missing category " +
                              std::to_string(t.category));
    }
}

int AttackTaxonomy::category_of(int attack_type) const {
    const auto it = types_.find(attack_type);
    if (it == types_.end()) throw Error("unknown attack type " + std::to_string(attack_type));
    return it->second.category;
}

std::vector<int> AttackTaxonomy::attacks_in(int category) const {
    std::vector<int> out;
    for (const auto& [id, t] : types_)
        if (t.category == category) out.push_back(id);
    return out;
}

std::vector<int> AttackTaxonomy::units(Level level) const {
    std::vector<int> out;
    if (level == Level::attack)
        for (const auto& [id, t] : types_) out.push_back(id);
    else
        for (const auto& [id, c] : categories_) out.push_back(id);
    return out;
}

int AttackTaxonomy::unit_of(int attack_type, Level level) const {
    if (attack_type == kBenign) return kBenign;
    return level == Level::attack ? attack_type : category_of(attack_type);
}

std::string AttackTaxonomy::unit_label(int unit, Level level) const {
    if (level == Level::category) {
        const auto it = categories_.find(unit);
        return it == categories_.end() ? std::to_string(unit) : it->second.abbreviation;
    }
    const auto it = types_.find(unit);
    return it == types_.end() ? std::to_string(unit) : it->second.name;
}

const AttackTaxonomy& builtin_gas_pipeline_taxonomy() {
    static const AttackTaxonomy tax = [] {
        struct Row {
            const char* abbr;
            const char* name;
            int attacks;
        };
        constexpr std::array<Row, 7> rows{{
            {"NMRI", "Naive Malicious Response Injection", 4},
            {"CMRI", "Complex Malicious Response Injection", 7},
            {"MSCI", "Malicious State Command Injection", 5},
            {"MPCI", "Malicious Parameter Command Injection", 12},
            {"MFCI", "Malicious Function Code Injection", 3},
            {"DoS", "Denial of Service", 1},
            {"Recon", "Reconnaissance", 3},
        }};
        std::map<int, Category> cats;
        std::map<int, AttackType> types;
        int next = 1;
        for (int c = 1; c <= static_cast<int>(rows.size()); ++c) {
            const Row& r = rows[static_cast<std::size_t>(c - 1)];
            cats.emplace(c, Category{r.abbr, r.name});
            for (int j = 1; j <= r.attacks; ++j)
                types.emplace(next++, AttackType{std::to_string(c) + "." + std::to_string(j), c});
        }
        return AttackTaxonomy(std::move(types), std::move(cats));
    }();
    return tax;
}

AttackTaxonomy parse_taxonomy(std::istream& in) {
    csv::Reader reader(in);
    const auto header = reader.next();
    if (!header) throw ParseError("empty taxonomy file", 0);
    std::map<std::string, std::size_t> col;
    for (std::size_t i = 0; i < header->size(); ++i) col[(*header)[i]] = i;
    for (const char* required : {"kind", "id", "name", "category", "abbreviation"})
        if (!col.contains(required))
            throw ParseError(std::string("taxonomy header lacks column '") + required + "'", reader.line());

    std::map<int, AttackType> types;
    std::map<int, Category> cats;
    while (auto row = reader.next()) {
        if (row->size() != header->size())
            throw ParseError("expected " + std::to_string(header->size()) + " fields, got " +
                                 std::to_string(row->size()),
                             reader.line());
        const auto& r = *row;
        const auto id = csv::parse_int(r[col["id"]]);
        if (!id) throw ParseError("invalid id '" + r[col["id"]] + "'", reader.line());
        const std::string& kind = r[col["kind"]];
        if (kind == "category") {
            if (!cats.emplace(static_cast<int>(*id), Category{r[col["abbreviation"]], r[col["name"]]}).second)
                throw ParseError("duplicate category id " + std::to_string(*id), reader.line());
        } else if (kind == "attack") {
            const auto cat = csv::parse_int(r[col["category"]]);
            if (!cat) throw ParseError("invalid category '" + r[col["category"]] + "'", reader.line());
            if (!types.emplace(static_cast<int>(*id), AttackType{r[col["name"]], static_cast<int>(*cat)}).second)
                throw ParseError("duplicate attack id " + std::to_string(*id), reader.line());
        } else {
            throw ParseError("unknown row kind '" + kind + "'", reader.line());
        }
    }
    try {
        return AttackTaxonomy(std::move(types), std::move(cats));
    } catch (const ConfigError& e) {
        throw ParseError(e.what(), 0);
    }
}

AttackTaxonomy load_taxonomy(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open taxonomy " + path.string());
    return parse_taxonomy(in);
}

AttackTaxonomy load_taxonomy(std::string_view source) {
    if (source == "builtin" || source == "gas-pipeline") return builtin_gas_pipeline_taxonomy();
    return load_taxonomy(std::filesystem::path(source));
}

void write_taxonomy(std::ostream& out, const AttackTaxonomy& tax) {
    out << "kind,id,name,category,abbreviation\n";
    for (const auto& [id, c] : tax.categories())
        out << "category," << id << ',' << csv::escape(c.name) << ",," << csv::escape(c.abbreviation) << '\n';
    for (const auto& [id, t] : tax.types())
        out << "attack," << id << ',' << csv::escape(t.name) << ',' << t.category << ",\n";
}

}  // namespace iidseval
