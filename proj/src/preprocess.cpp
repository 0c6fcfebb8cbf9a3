#include "iidseval/preprocess.hpp"

#include <cmath>
#include <numeric>

#include "iidseval/error.hpp"
#include "iidseval/simd.hpp"

namespace iidseval {

std::size_t PreprocessorState::expanded_dim() const {
    std::size_t n = 0;
    for (std::size_t f = 0; f < base_dim; ++f) n += one_hot_width[f] ? one_hot_width[f] : 1;
    return n;
}

PreprocessorState fit_preprocessor(const Dataset& d, std::span<const std::size_t> train_rows, std::size_t window,
                                   bool one_hot) {
    if (train_rows.empty()) throw ConfigError("cannot fit preprocessor on an empty train set");
    if (window == 0) throw ConfigError("window length must be positive");
    const std::size_t dim = d.dim();
    PreprocessorState p;
    p.base_dim = dim;
    p.window = window;
    p.one_hot = one_hot;
    p.mean.assign(dim, 0.0);
    p.stddev.assign(dim, 1.0);
    p.passthrough.assign(dim, false);
    p.one_hot_width.assign(dim, 0);

    const double n = static_cast<double>(train_rows.size());
    for (std::size_t f = 0; f < dim; ++f) {
        if (d.schema().kinds[f] == FeatureKind::categorical) {
            p.passthrough[f] = true;
            if (one_hot) p.one_hot_width[f] = d.schema().category_count(f) + 1;
            continue;
        }
        double sum = 0.0;
        for (auto i : train_rows) sum += d.row(i)[f];
        const double mean = sum / n;
        double ss = 0.0;
        for (auto i : train_rows) {
            const double dv = d.row(i)[f] - mean;
            ss += dv * dv;
        }
        p.mean[f] = mean;
        p.stddev[f] = std::sqrt(ss / n);
        p.passthrough[f] = !(p.stddev[f] > 0.0);
    }
    return p;
}

Matrix transform(const PreprocessorState& p, const Dataset& d, std::span<const std::size_t> rows) {
    if (d.dim() != p.base_dim)
        throw Error("feature arity mismatch: model expects " + std::to_string(p.base_dim) + " features, data has " +
                    std::to_string(d.dim()));
    const std::size_t dim = p.base_dim;
    const std::size_t expanded = p.expanded_dim();
    std::vector<double> inv_std(dim);
    for (std::size_t f = 0; f < dim; ++f) inv_std[f] = p.passthrough[f] ? 1.0 : 1.0 / p.stddev[f];
    // Categorical codes stay raw integers (mean slot is 0 for them).
    std::vector<double> center(p.mean);

    Matrix out(rows.size(), p.output_dim());
    std::vector<double> scaled(dim);
    for (std::size_t r = 0; r < rows.size(); ++r) {
        auto dst = out.row(r);
        const std::size_t last = rows[r];
        if (last >= d.size()) throw Error("row index " + std::to_string(last) + " out of range");
        for (std::size_t slot = 0; slot < p.window; ++slot) {
            const std::size_t lag = p.window - 1 - slot;
            if (lag > last) continue;
            const std::size_t src = last - lag;
            simd::standardize(d.row(src), center, inv_std, scaled);
            double* o = dst.data() + slot * expanded;
            for (std::size_t f = 0; f < dim; ++f) {
                const std::size_t width = p.one_hot_width[f];
                if (width == 0) {
                    *o++ = scaled[f];
                    continue;
                }
                auto code = static_cast<std::size_t>(std::max(0.0, d.row(src)[f]));
                if (code >= width - 1) code = width - 1;
                o[code] = 1.0;
                o += width;
            }
        }
    }
    return out;
}

nlohmann::ordered_json to_json(const PreprocessorState& p) {
    nlohmann::ordered_json j;
    j["base_dim"] = p.base_dim;
    j["window"] = p.window;
    j["one_hot"] = p.one_hot;
    j["mean"] = p.mean;
    j["stddev"] = p.stddev;
    j["passthrough"] = p.passthrough;
    j["one_hot_width"] = p.one_hot_width;
    return j;
}

PreprocessorState preprocessor_from_json(const nlohmann::json& j) {
    PreprocessorState p;
    p.base_dim = j.at("base_dim").get<std::size_t>();
    p.window = j.at("window").get<std::size_t>();
    p.one_hot = j.at("one_hot").get<bool>();
    p.mean = j.at("mean").get<std::vector<double>>();
    p.stddev = j.at("stddev").get<std::vector<double>>();
    p.passthrough = j.at("passthrough").get<std::vector<bool>>();
    p.one_hot_width = j.at("one_hot_width").get<std::vector<std::size_t>>();
    if (p.mean.size() != p.base_dim || p.stddev.size() != p.base_dim || p.passthrough.size() != p.base_dim ||
        p.one_hot_width.size() != p.base_dim || p.window == 0)
        throw ParseError("inconsistent preprocessor state", 0);
    return p;
}

}  // namespace iidseval
