#include "iidseval/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <optional>
#include <set>
#include <sstream>
#include <unordered_map>

#include "iidseval/csv.hpp"
#include "iidseval/error.hpp"

namespace iidseval {

std::string_view to_string(FeatureKind kind) noexcept {
    return kind == FeatureKind::numeric ? "numeric" : "categorical";
}

std::vector<std::string> FeatureSchema::violations() const {
    std::vector<std::string> out;
    if (kinds.size() != names.size()) out.push_back("feature kinds and names differ in length");
    std::set<std::string> seen;
    for (const auto& n : names) {
        if (n.empty()) out.push_back("empty feature name");
        if (!seen.insert(n).second) out.push_back("duplicate feature name '" + n + "'");
    }
    if (seen.contains(label_column)) out.push_back("label column '" + label_column + "' is also a feature");
    return out;
}

Dataset::Dataset(FeatureSchema schema, AttackTaxonomy taxonomy, std::vector<double> features,
                 std::vector<int> labels)
    : schema_(std::move(schema)), taxonomy_(std::move(taxonomy)), features_(std::move(features)),
      labels_(std::move(labels)) {
    if (schema_.category_values.size() < schema_.size()) schema_.category_values.resize(schema_.size());
    if (features_.size() != labels_.size() * schema_.size())
        throw Error("feature matrix has " + std::to_string(features_.size()) + " values, expected " +
                    std::to_string(labels_.size() * schema_.size()));
}

FeatureSchema gas_pipeline_schema() {
    using K = FeatureKind;
    const std::vector<std::pair<const char*, K>> cols{
        {"address", K::categorical},       {"function", K::categorical},
        {"length", K::numeric},            {"setpoint", K::numeric},
        {"gain", K::numeric},              {"reset_rate", K::numeric},
        {"deadband", K::numeric},          {"cycle_time", K::numeric},
        {"rate", K::numeric},              {"system_mode", K::categorical},
        {"control_scheme", K::categorical}, {"pump", K::categorical},
        {"solenoid", K::categorical},      {"pressure_measurement", K::numeric},
        {"crc_rate", K::numeric},          {"command_response", K::categorical},
    };
    FeatureSchema s;
    for (const auto& [name, kind] : cols) {
        s.names.emplace_back(name);
        s.kinds.push_back(kind);
    }
    s.category_values.resize(s.size());
    return s;
}

FeatureSchema parse_schema(std::istream& in) {
    csv::Reader reader(in);
    const auto header = reader.next();
    if (!header || header->size() < 2 || (*header)[0] != "column" || (*header)[1] != "kind")
        throw ParseError("schema header must be 'column,kind'", reader.line());
    FeatureSchema s;
    bool have_label = false;
    while (auto row = reader.next()) {
        if (row->size() != 2) throw ParseError("expected 2 fields", reader.line());
        const auto& kind = (*row)[1];
        if (kind == "label") {
            if (have_label) throw ParseError("more than one label column", reader.line());
            s.label_column = (*row)[0];
            have_label = true;
        } else if (kind == "numeric" || kind == "categorical") {
            s.names.push_back((*row)[0]);
            s.kinds.push_back(kind == "numeric" ? FeatureKind::numeric : FeatureKind::categorical);
        } else {
            throw ParseError("unknown feature kind '" + kind + "'", reader.line());
        }
    }
    s.category_values.resize(s.size());
    if (auto v = s.violations(); !v.empty()) throw ParseError("invalid schema: " + v.front(), 0);
    return s;
}

FeatureSchema load_schema(const std::filesystem::path& path) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open schema " + path.string());
    return parse_schema(in);
}

void write_schema(std::ostream& out, const FeatureSchema& schema) {
    out << "column,kind\n";
    for (std::size_t f = 0; f < schema.size(); ++f)
        out << csv::escape(schema.names[f]) << ',' << to_string(schema.kinds[f]) << '\n';
    out << csv::escape(schema.label_column) << ",label\n";
}

namespace {

double median_of(std::vector<double> v) {
    if (v.empty()) return 0.0;
    const auto mid = v.begin() + static_cast<std::ptrdiff_t>(v.size() / 2);
    std::nth_element(v.begin(), mid, v.end());
    const double hi = *mid;
    if (v.size() % 2 == 1) return hi;
    const double lo = *std::max_element(v.begin(), mid);
    return lo + (hi - lo) / 2.0;
}

}  // namespace

Dataset parse_dataset(std::istream& in, const SchemaSource& source, const AttackTaxonomy& taxonomy) {
    csv::Reader reader(in);
    const auto header = reader.next();
    if (!header) throw ParseError("empty file", 0);

    FeatureSchema schema;
    if (std::holds_alternative<GasPipelineSchema>(source)) {
        schema = gas_pipeline_schema();
    } else if (const auto* side = std::get_if<SidecarSchema>(&source)) {
        schema = load_schema(side->path);
    } else {
        for (const auto& name : *header) {
            if (name == schema.label_column) continue;
            schema.names.push_back(name);
            schema.kinds.push_back(FeatureKind::numeric);
        }
        schema.category_values.resize(schema.size());
    }

    std::unordered_map<std::string, std::size_t> column;
    for (std::size_t i = 0; i < header->size(); ++i)
        if (!column.emplace((*header)[i], i).second)
            throw ParseError("duplicate column '" + (*header)[i] + "'", reader.line());
    const auto find_column = [&](const std::string& name) {
        const auto it = column.find(name);
        if (it == column.end()) throw ParseError("header lacks column '" + name + "'", reader.line());
        return it->second;
    };
    const std::size_t label_col = find_column(schema.label_column);
    std::vector<std::size_t> feature_col;
    for (const auto& name : schema.names) feature_col.push_back(find_column(name));

    const std::size_t dim = schema.size();
    std::vector<std::unordered_map<std::string, int>> codes(dim);
    std::vector<std::vector<std::size_t>> missing(dim);
    std::vector<double> features;
    std::vector<int> labels;

    while (auto row = reader.next()) {
        const std::size_t line = reader.line();
        if (row->size() != header->size())
            throw ParseError("expected " + std::to_string(header->size()) + " fields, got " +
                                 std::to_string(row->size()),
                             line);
        const auto label = csv::parse_int((*row)[label_col]);
        if (!label) throw ParseError("unparseable attack_type '" + (*row)[label_col] + "'", line);
        if (*label != kBenign && !taxonomy.contains(static_cast<int>(*label)))
            throw ParseError("unknown attack_type id " + std::to_string(*label), line);
        const std::size_t r = labels.size();
        labels.push_back(static_cast<int>(*label));
        for (std::size_t f = 0; f < dim; ++f) {
            const std::string& cell = (*row)[feature_col[f]];
            if (schema.kinds[f] == FeatureKind::categorical) {
                auto [it, inserted] = codes[f].emplace(cell, static_cast<int>(codes[f].size()));
                if (inserted) schema.category_values[f].push_back(cell);
                features.push_back(it->second);
            } else if (cell.empty()) {
                missing[f].push_back(r);
                features.push_back(0.0);
            } else {
                const auto v = csv::parse_double(cell);
                if (!v || !std::isfinite(*v))
                    throw ParseError("unparseable value '" + cell + "' in column '" + schema.names[f] + "'", line);
                features.push_back(*v);
            }
        }
    }
    if (labels.empty()) throw ParseError("empty file (no data rows)", reader.line());

    // Median imputation with one appended missingness flag per affected column.
    std::vector<std::size_t> imputed;
    for (std::size_t f = 0; f < dim; ++f) {
        if (missing[f].empty()) continue;
        std::vector<bool> is_missing(labels.size(), false);
        for (auto r : missing[f]) is_missing[r] = true;
        std::vector<double> present;
        for (std::size_t r = 0; r < labels.size(); ++r)
            if (!is_missing[r]) present.push_back(features[r * dim + f]);
        const double med = median_of(std::move(present));
        for (auto r : missing[f]) features[r * dim + f] = med;
        schema.imputed_medians[schema.names[f]] = med;
        imputed.push_back(f);
    }
    if (!imputed.empty()) {
        const std::size_t new_dim = dim + imputed.size();
        std::vector<double> widened(labels.size() * new_dim);
        for (std::size_t r = 0; r < labels.size(); ++r) {
            std::copy_n(features.begin() + static_cast<std::ptrdiff_t>(r * dim), dim,
                        widened.begin() + static_cast<std::ptrdiff_t>(r * new_dim));
        }
        for (std::size_t j = 0; j < imputed.size(); ++j) {
            const std::size_t f = imputed[j];
            for (auto r : missing[f]) widened[r * new_dim + dim + j] = 1.0;
            schema.names.push_back(schema.names[f] + "_missing");
            schema.kinds.push_back(FeatureKind::numeric);
            schema.category_values.emplace_back();
        }
        features = std::move(widened);
    }
    return Dataset(std::move(schema), taxonomy, std::move(features), std::move(labels));
}

Dataset load_dataset(const std::filesystem::path& path, const SchemaSource& source, const AttackTaxonomy& taxonomy) {
    std::ifstream in(path);
    if (!in) throw Error("cannot open dataset " + path.string());
    return parse_dataset(in, source, taxonomy);
}

void write_dataset(std::ostream& out, const Dataset& d) {
    const auto& s = d.schema();
    for (std::size_t f = 0; f < s.size(); ++f) out << csv::escape(s.names[f]) << ',';
    out << csv::escape(s.label_column) << '\n';
    for (std::size_t i = 0; i < d.size(); ++i) {
        const auto row = d.row(i);
        for (std::size_t f = 0; f < s.size(); ++f) {
            if (s.kinds[f] == FeatureKind::categorical) {
                const auto code = static_cast<std::size_t>(row[f]);
                const auto& values = s.category_values[f];
                out << (code < values.size() ? csv::escape(values[code]) : csv::format_9g(row[f]));
            } else {
                out << csv::format_9g(row[f]);
            }
            out << ',';
        }
        out << d.attack_type(i) << '\n';
    }
}

ValidationReport validate_dataset(const Dataset& d) {
    ValidationReport rep;
    for (auto& v : d.schema().violations()) rep.violations.push_back("schema: " + v);
    if (d.features().size() != d.size() * d.dim())
        rep.violations.push_back("feature matrix size does not match record count x schema width");

    std::size_t benign = 0;
    std::size_t malicious = 0;
    const bool matrix_ok = d.features().size() == d.size() * d.dim();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const int t = d.attack_type(i);
        if (t == kBenign) {
            ++benign;
        } else if (t < 0 || !d.taxonomy().contains(t)) {
            rep.violations.push_back("record " + std::to_string(i) + ": attack_type " + std::to_string(t) +
                                     " is not in the taxonomy");
        } else {
            ++malicious;
        }
        if (!matrix_ok) continue;
        const auto row = d.row(i);
        for (std::size_t f = 0; f < d.dim(); ++f) {
            const double v = row[f];
            if (!std::isfinite(v)) {
                rep.violations.push_back("record " + std::to_string(i) + ": non-finite value in '" +
                                         d.schema().names[f] + "'");
            } else if (d.schema().kinds[f] == FeatureKind::categorical && (v < 0 || v != std::floor(v))) {
                rep.violations.push_back("record " + std::to_string(i) + ": categorical '" + d.schema().names[f] +
                                         "' is not a non-negative integer code");
            }
        }
    }
    if (benign == 0) rep.violations.emplace_back("no benign records");
    if (malicious == 0) rep.violations.emplace_back("no malicious records");
    return rep;
}

StatsSummary dataset_stats(const Dataset& d) {
    StatsSummary s;
    s.total = d.size();
    for (std::size_t i = 0; i < d.size(); ++i) {
        const int t = d.attack_type(i);
        if (t == kBenign) {
            ++s.benign;
            continue;
        }
        ++s.malicious;
        ++s.per_type[t];
        if (d.taxonomy().contains(t)) ++s.per_category[d.taxonomy().category_of(t)];
    }
    s.malicious_fraction = s.total ? static_cast<double>(s.malicious) / static_cast<double>(s.total) : 0.0;
    return s;
}

std::string format_stats(const StatsSummary& s, const AttackTaxonomy& tax) {
    std::ostringstream out;
    out << "total records: " << s.total << '\n'
        << "benign: " << s.benign << '\n'
        << "malicious: " << s.malicious << '\n'
        << "malicious fraction: " << csv::format_9g(s.malicious_fraction) << '\n'
        << "attack types present: " << s.per_type.size() << '\n'
        << "categories present: " << s.per_category.size() << '\n';
    out << "per category:\n";
    for (const auto& [c, n] : s.per_category)
        out << "  " << c << ' ' << tax.unit_label(c, Level::category) << ": " << n << " records, "
            << tax.attacks_in(c).size() << " attack types\n";
    out << "per attack type:\n";
    for (const auto& [t, n] : s.per_type) out << "  " << t << ' ' << tax.unit_label(t, Level::attack) << ": " << n << '\n';
    return out.str();
}

}  // namespace iidseval
