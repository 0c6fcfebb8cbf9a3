#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "iidseval/matrix.hpp"

namespace iidseval {

struct SvmParams {
    double lambda = 1e-4;
    std::size_t epochs = 10;

    bool operator==(const SvmParams&) const = default;
};

struct LinearSvm {
    std::vector<double> weights;
    double bias = 0.0;

    double margin(std::span<const double> x) const;
    /// Logistic squashing of the margin; margin 0 maps to exactly 0.5.
    double score(std::span<const double> x) const;

    bool operator==(const LinearSvm&) const = default;
};

/// Pegasos stochastic subgradient descent on
///   lambda/2 * (|w|^2 + b^2) + mean(max(0, 1 - y (w.x + b)))
/// with step 1/(lambda t), a seeded shuffle per epoch and projection onto the
/// ball of radius 1/sqrt(lambda). `labels` are 0/1 and mapped to -1/+1.
LinearSvm train_linear_svm(const SvmParams& params, const Matrix& X, std::span<const int> labels, std::uint64_t seed);

double svm_objective(const SvmParams& params, const LinearSvm& m, const Matrix& X, std::span<const int> labels);

nlohmann::ordered_json to_json(const SvmParams& p);
SvmParams svm_params_from_json(const nlohmann::json& j);

}  // namespace iidseval
