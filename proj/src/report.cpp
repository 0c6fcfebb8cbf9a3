#include "iidseval/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <sstream>

#include "iidseval/csv.hpp"
#include "iidseval/error.hpp"

namespace iidseval {

std::optional<double> MetricsMatrix::at_units(int row_unit, int column_unit) const {
    const auto r = std::find(row_units.begin(), row_units.end(), row_unit);
    const auto c = std::find(column_units.begin(), column_units.end(), column_unit);
    if (r == row_units.end() || c == column_units.end()) return std::nullopt;
    return cells[static_cast<std::size_t>(r - row_units.begin())][static_cast<std::size_t>(c - column_units.begin())];
}

void MetricsMatrix::check() const {
    if (row_labels.empty() || column_labels.empty()) throw Error("empty matrix");
    if (cells.size() != row_labels.size()) throw Error("matrix row count does not match labels");
    for (const auto& row : cells) {
        if (row.size() != column_labels.size()) throw Error("ragged matrix row");
        for (const auto& v : row)
            if (v && !(*v >= 0.0 && *v <= 1.0)) throw Error("matrix cell outside [0,1]");
    }
}

Rgb parse_rgb(std::string_view hex) {
    if (hex.size() == 7 && hex.front() == '#') hex.remove_prefix(1);
    if (hex.size() != 6) throw ConfigError("colors must be #rrggbb");
    const auto byte = [&](std::size_t at) {
        const std::string part(hex.substr(at, 2));
        char* end = nullptr;
        const long v = std::strtol(part.c_str(), &end, 16);
        if (end != part.c_str() + 2) throw ConfigError("colors must be #rrggbb");
        return static_cast<int>(v);
    };
    return {byte(0), byte(2), byte(4)};
}

std::string to_hex(Rgb c) {
    char buf[8];
    std::snprintf(buf, sizeof buf, "#%02x%02x%02x", c.r & 0xff, c.g & 0xff, c.b & 0xff);
    return buf;
}

void HeatmapSpec::check() const {
    if (low == high) throw ConfigError("heatmap ramp endpoints must differ");
}

std::string format_percent(std::optional<double> v, const std::string& undefined) {
    if (!v) return undefined;
    char buf[32];
    std::snprintf(buf, sizeof buf, "%.1f", *v * 100.0);
    return buf;
}

std::string render_text_heatmap(const MetricsMatrix& m, const HeatmapSpec& spec) {
    m.check();
    std::size_t label_w = 0;
    for (const auto& l : m.row_labels) label_w = std::max(label_w, l.size());
    std::size_t cell_w = std::max<std::size_t>(5, spec.undefined_marker.size());
    for (const auto& l : m.column_labels) cell_w = std::max(cell_w, l.size());

    std::ostringstream out;
    const auto pad_left = [&](const std::string& s, std::size_t w) {
        out << std::string(w > s.size() ? w - s.size() : 0, ' ') << s;
    };
    out << std::string(label_w, ' ');
    for (const auto& c : m.column_labels) {
        out << ' ';
        pad_left(c, cell_w);
    }
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << m.row_labels[r] << std::string(label_w - m.row_labels[r].size(), ' ');
        for (const auto& v : m.cells[r]) {
            out << ' ';
            pad_left(format_percent(v, spec.undefined_marker), cell_w);
        }
        out << '\n';
    }
    return out.str();
}

Rgb ramp_color(const HeatmapSpec& spec, double recall) {
    const double t = std::clamp(recall, 0.0, 1.0);
    const auto lerp = [t](int a, int b) { return static_cast<int>(std::lround(a + (b - a) * t)); };
    return {lerp(spec.low.r, spec.high.r), lerp(spec.low.g, spec.high.g), lerp(spec.low.b, spec.high.b)};
}

namespace {

std::string xml_escape(std::string_view s) {
    std::string out;
    for (char c : s) {
        switch (c) {
        case '&': out += "&amp;"; break;
        case '<': out += "&lt;"; break;
        case '>': out += "&gt;"; break;
        case '"': out += "&quot;"; break;
        default: out.push_back(c);
        }
    }
    return out;
}

}  // namespace

std::string render_svg_heatmap(const MetricsMatrix& m, const HeatmapSpec& spec) {
    m.check();
    spec.check();
    constexpr int cell_w = 44;
    constexpr int cell_h = 22;
    constexpr int left = 70;
    constexpr int top = 60;
    const int width = left + cell_w * static_cast<int>(m.cols()) + 10;
    const int height = top + cell_h * static_cast<int>(m.rows()) + 10;

    std::ostringstream out;
    out << "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" << width << "\" height=\"" << height
        << "\" font-family=\"sans-serif\" font-size=\"10\">\n";
    out << "<defs><pattern id=\"hatch\" width=\"6\" height=\"6\" patternUnits=\"userSpaceOnUse\" "
           "patternTransform=\"rotate(45)\"><rect width=\"6\" height=\"6\" fill=\"#ffffff\"/>"
           "<line x1=\"0\" y1=\"0\" x2=\"0\" y2=\"6\" stroke=\"#999999\" stroke-width=\"2\"/></pattern></defs>\n";
    out << "<text x=\"" << left << "\" y=\"14\" font-size=\"12\">" << xml_escape(m.classifier) << ' '
        << to_string(m.mode) << ' ' << to_string(m.level) << " recall [%]</text>\n";
    for (std::size_t c = 0; c < m.cols(); ++c) {
        const int x = left + cell_w * static_cast<int>(c) + cell_w / 2;
        out << "<text x=\"" << x << "\" y=\"" << top - 6 << "\" text-anchor=\"middle\">"
            << xml_escape(m.column_labels[c]) << "</text>\n";
    }
    for (std::size_t r = 0; r < m.rows(); ++r) {
        const int y = top + cell_h * static_cast<int>(r);
        out << "<text x=\"" << left - 6 << "\" y=\"" << y + cell_h / 2 + 4 << "\" text-anchor=\"end\">"
            << xml_escape(m.row_labels[r]) << "</text>\n";
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const int x = left + cell_w * static_cast<int>(c);
            const auto& v = m.cells[r][c];
            const std::string fill = v ? to_hex(ramp_color(spec, *v)) : std::string("url(#hatch)");
            out << "<rect class=\"cell\" x=\"" << x << "\" y=\"" << y << "\" width=\"" << cell_w << "\" height=\""
                << cell_h << "\" fill=\"" << fill << "\" stroke=\"#ffffff\"/>\n";
            if (spec.annotate) {
                const bool dark = v && *v > 0.5;
                out << "<text x=\"" << x + cell_w / 2 << "\" y=\"" << y + cell_h / 2 + 4
                    << "\" text-anchor=\"middle\" fill=\"" << (dark ? "#ffffff" : "#000000") << "\">"
                    << xml_escape(format_percent(v, spec.undefined_marker)) << "</text>\n";
            }
        }
    }
    out << "</svg>\n";
    return out.str();
}

std::string matrix_to_csv(const MetricsMatrix& m) {
    m.check();
    std::ostringstream out;
    out << "scenario";
    for (const auto& c : m.column_labels) out << ',' << csv::escape(c);
    out << '\n';
    for (std::size_t r = 0; r < m.rows(); ++r) {
        out << csv::escape(m.row_labels[r]);
        for (const auto& v : m.cells[r]) out << ',' << (v ? csv::format_exact(*v) : std::string("n/a"));
        out << '\n';
    }
    return out.str();
}

MetricsMatrix matrix_from_csv(std::string_view text) {
    std::istringstream in{std::string(text)};
    csv::Reader reader(in);
    const auto header = reader.next();
    if (!header || header->size() < 2) throw ParseError("matrix CSV needs a header with at least one column", reader.line());
    MetricsMatrix m;
    m.column_labels.assign(header->begin() + 1, header->end());
    while (auto row = reader.next()) {
        if (row->size() != header->size()) throw ParseError("ragged matrix CSV row", reader.line());
        m.row_labels.push_back((*row)[0]);
        auto& cells = m.cells.emplace_back();
        for (std::size_t c = 1; c < row->size(); ++c) {
            if ((*row)[c] == "n/a") {
                cells.emplace_back();
                continue;
            }
            const auto v = csv::parse_double((*row)[c]);
            if (!v) throw ParseError("unparseable matrix cell '" + (*row)[c] + "'", reader.line());
            cells.emplace_back(*v);
        }
    }
    m.check();
    return m;
}

DeltaTable delta_vs_baseline(const MetricsMatrix& m) {
    m.check();
    const auto base_it = std::find(m.row_units.begin(), m.row_units.end(), 0);
    if (base_it == m.row_units.end()) throw Error("matrix has no baseline row");
    const auto base = static_cast<std::size_t>(base_it - m.row_units.begin());
    DeltaTable t;
    t.column_labels = m.column_labels;
    for (std::size_t r = 0; r < m.rows(); ++r) {
        if (r == base) continue;
        t.row_labels.push_back(m.row_labels[r]);
        auto& row = t.cells.emplace_back();
        for (std::size_t c = 0; c < m.cols(); ++c) {
            const auto& v = m.cells[r][c];
            const auto& b = m.cells[base][c];
            row.push_back(v && b ? std::optional<double>((*v - *b) * 100.0) : std::nullopt);
        }
    }
    return t;
}

std::string render_delta_text(const DeltaTable& t) {
    std::size_t label_w = 0;
    for (const auto& l : t.row_labels) label_w = std::max(label_w, l.size());
    std::size_t cell_w = 6;
    for (const auto& l : t.column_labels) cell_w = std::max(cell_w, l.size());
    std::ostringstream out;
    const auto pad = [&](const std::string& s, std::size_t w) { out << std::string(w > s.size() ? w - s.size() : 0, ' ') << s; };
    out << std::string(label_w, ' ');
    for (const auto& c : t.column_labels) {
        out << ' ';
        pad(c, cell_w);
    }
    out << '\n';
    for (std::size_t r = 0; r < t.row_labels.size(); ++r) {
        out << t.row_labels[r] << std::string(label_w - t.row_labels[r].size(), ' ');
        for (const auto& v : t.cells[r]) {
            char buf[32];
            if (v) std::snprintf(buf, sizeof buf, "%+.1f", *v);
            out << ' ';
            pad(v ? std::string(buf) : std::string("n/a"), cell_w);
        }
        out << '\n';
    }
    return out.str();
}

std::string precision_rows_to_csv(const std::vector<PrecisionRow>& rows) {
    std::ostringstream out;
    const auto cell = [](const std::optional<double>& v) { return v ? csv::format_exact(*v) : std::string("n/a"); };
    out << "classifier,level,scenario,precision,baseline_precision,delta\n";
    for (const auto& r : rows)
        out << csv::escape(r.classifier) << ',' << to_string(r.level) << ',' << r.scenario << ',' << cell(r.precision)
            << ',' << cell(r.baseline_precision) << ',' << cell(r.delta) << '\n';
    return out.str();
}

nlohmann::ordered_json to_json(const MetricsMatrix& m) {
    nlohmann::ordered_json j;
    j["classifier"] = m.classifier;
    j["level"] = to_string(m.level);
    j["mode"] = to_string(m.mode);
    j["row_units"] = m.row_units;
    j["column_units"] = m.column_units;
    j["row_labels"] = m.row_labels;
    j["column_labels"] = m.column_labels;
    auto cells = nlohmann::ordered_json::array();
    for (const auto& row : m.cells) {
        auto rj = nlohmann::ordered_json::array();
        for (const auto& v : row) rj.push_back(v ? nlohmann::ordered_json(*v) : nlohmann::ordered_json());
        cells.push_back(std::move(rj));
    }
    j["cells"] = std::move(cells);
    return j;
}

MetricsMatrix matrix_from_json(const nlohmann::json& j) {
    MetricsMatrix m;
    m.classifier = j.at("classifier").get<std::string>();
    m.level = parse_level(j.at("level").get<std::string>());
    m.mode = parse_mode(j.at("mode").get<std::string>());
    m.row_units = j.at("row_units").get<std::vector<int>>();
    m.column_units = j.at("column_units").get<std::vector<int>>();
    m.row_labels = j.at("row_labels").get<std::vector<std::string>>();
    m.column_labels = j.at("column_labels").get<std::vector<std::string>>();
    for (const auto& rj : j.at("cells")) {
        auto& row = m.cells.emplace_back();
        for (const auto& v : rj) row.push_back(v.is_null() ? std::nullopt : std::optional<double>(v.get<double>()));
    }
    m.check();
    return m;
}

}  // namespace iidseval
