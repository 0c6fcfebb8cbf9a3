#pragma once

#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <json.hpp>

#include "iidseval/splitting.hpp"

namespace iidseval {

/// Fold-averaged recall per (scenario row, evaluated group column). Row 0 is
/// the baseline ("none"), column 0 is benign; units follow ascending by id.
struct MetricsMatrix {
    std::string classifier;
    Level level = Level::category;
    Mode mode = Mode::omit;
    /// 0 marks the baseline row / benign column.
    std::vector<int> row_units;
    std::vector<int> column_units;
    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;
    std::vector<std::vector<std::optional<double>>> cells;

    std::size_t rows() const noexcept { return row_labels.size(); }
    std::size_t cols() const noexcept { return column_labels.size(); }
    std::optional<double> at_units(int row_unit, int column_unit) const;

    /// Throws Error("empty matrix") or on ragged/out-of-range cells.
    void check() const;

    bool operator==(const MetricsMatrix&) const = default;
};

struct Rgb {
    int r = 0, g = 0, b = 0;
    bool operator==(const Rgb&) const = default;
};

Rgb parse_rgb(std::string_view hex);
std::string to_hex(Rgb c);

struct HeatmapSpec {
    enum class Output { text, csv, svg } output = Output::text;
    /// Recall 0 maps to `low`, recall 1 to `high`. Low recall reads light.
    Rgb low{255, 255, 217};
    Rgb high{8, 29, 88};
    bool annotate = true;
    std::string undefined_marker = "n/a";

    void check() const;
};

/// "100.0"-style one-decimal percentage, or the undefined marker.
std::string format_percent(std::optional<double> v, const std::string& undefined = "n/a");

std::string render_text_heatmap(const MetricsMatrix& m, const HeatmapSpec& spec = {});
std::string render_svg_heatmap(const MetricsMatrix& m, const HeatmapSpec& spec = {});
/// Linear interpolation between the ramp endpoints, recall clamped to [0,1].
Rgb ramp_color(const HeatmapSpec& spec, double recall);

/// Full-precision CSV: first row column labels, first column row labels.
std::string matrix_to_csv(const MetricsMatrix& m);
/// Labels and cells only; unit ids and metadata are not part of the CSV.
MetricsMatrix matrix_from_csv(std::string_view text);

/// Cell minus baseline cell of the same column, in percentage points.
struct DeltaTable {
    std::vector<std::string> row_labels;
    std::vector<std::string> column_labels;
    std::vector<std::vector<std::optional<double>>> cells;
};

/// Throws Error when the matrix has no baseline row.
DeltaTable delta_vs_baseline(const MetricsMatrix& m);
std::string render_delta_text(const DeltaTable& t);

struct PrecisionRow {
    std::string classifier;
    Level level = Level::attack;
    std::string scenario;
    std::optional<double> precision;
    std::optional<double> baseline_precision;
    std::optional<double> delta;
};

std::string precision_rows_to_csv(const std::vector<PrecisionRow>& rows);

nlohmann::ordered_json to_json(const MetricsMatrix& m);
MetricsMatrix matrix_from_json(const nlohmann::json& j);

}  // namespace iidseval
