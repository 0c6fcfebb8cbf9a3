#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include <json.hpp>

#include "iidseval/matrix.hpp"
#include "iidseval/random.hpp"

namespace iidseval {

struct MlpParams {
    std::vector<std::size_t> hidden{64, 32};
    double learning_rate = 0.01;
    std::size_t batch = 128;
    std::size_t epochs = 20;
    /// Sliding-window length applied by the preprocessor.
    std::size_t window = 1;

    bool operator==(const MlpParams&) const = default;
};

/// Fully connected layer, weights row-major (out x in).
struct DenseLayer {
    std::size_t in = 0;
    std::size_t out = 0;
    std::vector<double> weights;
    std::vector<double> bias;

    bool operator==(const DenseLayer&) const = default;
};

/// ReLU hidden layers, one sigmoid output unit.
struct Mlp {
    std::vector<DenseLayer> layers;

    double logit(std::span<const double> x) const;
    double score(std::span<const double> x) const;
    std::size_t parameter_count() const;

    bool operator==(const Mlp&) const = default;
};

/// Gradients with the same shapes as the network's layers.
using MlpGradient = std::vector<DenseLayer>;

/// Uniform(-r, r) weights with r = sqrt(6 / (fan_in + fan_out)), zero biases.
Mlp init_mlp(std::size_t input_dim, std::span<const std::size_t> hidden, Engine& rng);

/// Mean binary cross-entropy over `batch` rows of X; fills `grad` with its
/// gradient. `labels` are 0/1.
double mlp_loss_and_gradient(const Mlp& net, const Matrix& X, std::span<const int> labels,
                             std::span<const std::size_t> batch, MlpGradient& grad);

Mlp train_mlp(const MlpParams& params, const Matrix& X, std::span<const int> labels, std::uint64_t seed);

nlohmann::ordered_json to_json(const MlpParams& p);
MlpParams mlp_params_from_json(const nlohmann::json& j);
nlohmann::ordered_json to_json(const Mlp& m);
Mlp mlp_from_json(const nlohmann::json& j);

}  // namespace iidseval
