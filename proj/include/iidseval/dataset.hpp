#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <span>
#include <string>
#include <variant>
#include <vector>

#include "iidseval/taxonomy.hpp"

namespace iidseval {

enum class FeatureKind { numeric, categorical };

std::string_view to_string(FeatureKind kind) noexcept;

/// Column layout of a dataset. Categorical values are stored as integer
/// codes assigned in order of first occurrence; `category_values[f]` holds the
/// original text for each code of feature f (empty for numeric features).
struct FeatureSchema {
    std::vector<std::string> names;
    std::vector<FeatureKind> kinds;
    std::string label_column = "attack_type";
    std::vector<std::vector<std::string>> category_values;
    /// Median used to fill empty numeric cells, keyed by feature name. Each
    /// imputed feature has a companion "<name>_missing" 0/1 feature.
    std::map<std::string, double> imputed_medians;

    std::size_t size() const noexcept { return names.size(); }
    /// Number of known codes for a categorical feature; codes >= this are unknown.
    std::size_t category_count(std::size_t feature) const {
        return feature < category_values.size() ? category_values[feature].size() : 0;
    }
    std::vector<std::string> violations() const;

    bool operator==(const FeatureSchema&) const = default;
};

/// Read-only view of one row.
struct LabeledRecord {
    std::size_t index;
    std::span<const double> features;
    int attack_type;
};

/// Labeled records in capture order. Features are stored row-major.
class Dataset {
public:
    Dataset() = default;
    Dataset(FeatureSchema schema, AttackTaxonomy taxonomy, std::vector<double> features, std::vector<int> labels);

    const FeatureSchema& schema() const noexcept { return schema_; }
    const AttackTaxonomy& taxonomy() const noexcept { return taxonomy_; }

    std::size_t size() const noexcept { return labels_.size(); }
    std::size_t dim() const noexcept { return schema_.size(); }

    std::span<const double> row(std::size_t i) const { return {features_.data() + i * dim(), dim()}; }
    int attack_type(std::size_t i) const { return labels_[i]; }
    bool malicious(std::size_t i) const { return labels_[i] != kBenign; }
    LabeledRecord record(std::size_t i) const { return {i, row(i), labels_[i]}; }

    std::span<const double> features() const noexcept { return features_; }
    std::span<const int> labels() const noexcept { return labels_; }

    /// Unsafe mutable access for tests that need to construct invalid data.
    std::vector<int>& mutable_labels() noexcept { return labels_; }
    std::vector<double>& mutable_features() noexcept { return features_; }

    bool operator==(const Dataset&) const = default;

private:
    FeatureSchema schema_;
    AttackTaxonomy taxonomy_;
    std::vector<double> features_;
    std::vector<int> labels_;
};

/// Where the column layout of a dataset file comes from.
struct GasPipelineSchema {};
struct SidecarSchema {
    std::filesystem::path path;
};
/// Every non-label column is numeric.
struct InferNumericSchema {};
using SchemaSource = std::variant<GasPipelineSchema, SidecarSchema, InferNumericSchema>;

/// Column mapping for the converted gas-pipeline export (see docs/gas_pipeline_columns.md).
FeatureSchema gas_pipeline_schema();

/// Sidecar schema CSV: header `column,kind`, kind in numeric|categorical|label.
FeatureSchema parse_schema(std::istream& in);
FeatureSchema load_schema(const std::filesystem::path& path);
void write_schema(std::ostream& out, const FeatureSchema& schema);

/// Parse a header-first CSV dataset. Columns not named by the schema are ignored.
/// Throws ParseError (with line number) on malformed rows or unknown attack ids.
Dataset parse_dataset(std::istream& in, const SchemaSource& source, const AttackTaxonomy& taxonomy);
Dataset load_dataset(const std::filesystem::path& path, const SchemaSource& source, const AttackTaxonomy& taxonomy);

/// Numeric values at 9 significant digits, categorical values as original text.
void write_dataset(std::ostream& out, const Dataset& d);

struct ValidationReport {
    std::vector<std::string> violations;
    bool ok() const noexcept { return violations.empty(); }
};

ValidationReport validate_dataset(const Dataset& d);

struct StatsSummary {
    std::size_t total = 0;
    std::size_t benign = 0;
    std::size_t malicious = 0;
    double malicious_fraction = 0.0;
    std::map<int, std::size_t> per_type;
    std::map<int, std::size_t> per_category;
};

StatsSummary dataset_stats(const Dataset& d);
std::string format_stats(const StatsSummary& s, const AttackTaxonomy& tax);

}  // namespace iidseval
