#pragma once

#include <span>
#include <vector>

#include <json.hpp>

#include "iidseval/dataset.hpp"
#include "iidseval/matrix.hpp"

namespace iidseval {

/// Standardization, optional one-hot expansion and sliding-window state,
/// fitted on training rows only.
struct PreprocessorState {
    std::size_t base_dim = 0;
    std::size_t window = 1;
    bool one_hot = false;
    /// Per base feature. Categorical features keep mean 0 and scale 1.
    std::vector<double> mean;
    std::vector<double> stddev;
    /// Zero-variance numeric features are centered but not scaled.
    std::vector<bool> passthrough;
    /// One-hot width per base feature: 0 for numeric (or when one_hot is
    /// off), else known codes + 1 reserved slot for unseen codes.
    std::vector<std::size_t> one_hot_width;

    std::size_t expanded_dim() const;
    std::size_t output_dim() const { return window * expanded_dim(); }

    bool operator==(const PreprocessorState&) const = default;
};

/// Throws ConfigError on an empty train set or window 0.
PreprocessorState fit_preprocessor(const Dataset& d, std::span<const std::size_t> train_rows, std::size_t window,
                                   bool one_hot);

/// Output row r is the window over capture-order rows rows[r]-w+1 .. rows[r],
/// oldest first, each standardized (and expanded); rows before 0 are zeros.
Matrix transform(const PreprocessorState& p, const Dataset& d, std::span<const std::size_t> rows);

nlohmann::ordered_json to_json(const PreprocessorState& p);
PreprocessorState preprocessor_from_json(const nlohmann::json& j);

}  // namespace iidseval
