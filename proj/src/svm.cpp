#include "iidseval/svm.hpp"

#include <cmath>
#include <numeric>

#include "iidseval/error.hpp"
#include "iidseval/random.hpp"
#include "iidseval/simd.hpp"

namespace iidseval {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

}  // namespace

double LinearSvm::margin(std::span<const double> x) const { return simd::dot(weights, x) + bias; }

double LinearSvm::score(std::span<const double> x) const { return sigmoid(margin(x)); }

LinearSvm train_linear_svm(const SvmParams& params, const Matrix& X, std::span<const int> labels, std::uint64_t seed) {
    if (!(params.lambda > 0.0)) throw ConfigError("linear_svm.lambda must be positive");
    if (X.rows == 0 || X.rows != labels.size()) throw Error("svm training data is empty or misaligned");
    const double lambda = params.lambda;
    const double radius = 1.0 / std::sqrt(lambda);

    LinearSvm m{std::vector<double>(X.cols, 0.0), 0.0};
    std::vector<std::size_t> order(X.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    auto rng = make_engine(derive_seed(seed, "svm"));
    std::size_t t = 0;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        shuffle(std::span<std::size_t>(order), rng);
        for (auto i : order) {
            ++t;
            const double eta = 1.0 / (lambda * static_cast<double>(t));
            const double y = labels[i] ? 1.0 : -1.0;
            const auto x = X.row(i);
            const double margin = y * m.margin(x);
            const double shrink = 1.0 - eta * lambda;
            simd::scale(shrink, m.weights);
            m.bias *= shrink;
            if (margin < 1.0) {
                simd::axpy(eta * y, x, m.weights);
                m.bias += eta * y;
            }
            const double norm = std::sqrt(simd::dot(m.weights, m.weights) + m.bias * m.bias);
            if (norm > radius) {
                const double s = radius / norm;
                simd::scale(s, m.weights);
                m.bias *= s;
            }
        }
    }
    return m;
}

double svm_objective(const SvmParams& params, const LinearSvm& m, const Matrix& X, std::span<const int> labels) {
    double hinge = 0.0;
    for (std::size_t i = 0; i < X.rows; ++i) {
        const double y = labels[i] ? 1.0 : -1.0;
        hinge += std::max(0.0, 1.0 - y * m.margin(X.row(i)));
    }
    const double reg = std::inner_product(m.weights.begin(), m.weights.end(), m.weights.begin(), 0.0) + m.bias * m.bias;
    return params.lambda / 2.0 * reg + hinge / static_cast<double>(X.rows);
}

nlohmann::ordered_json to_json(const SvmParams& p) {
    nlohmann::ordered_json j;
    j["lambda"] = p.lambda;
    j["epochs"] = p.epochs;
    return j;
}

SvmParams svm_params_from_json(const nlohmann::json& j) {
    SvmParams p;
    for (const auto& [key, v] : j.items()) {
        if (key == "lambda") p.lambda = v.get<double>();
        else if (key == "epochs") p.epochs = v.get<std::size_t>();
        else throw ConfigError("unknown linear_svm hyperparameter '" + key + "'");
    }
    if (!(p.lambda > 0.0)) throw ConfigError("linear_svm.lambda must be positive");
    if (p.epochs == 0) throw ConfigError("linear_svm.epochs must be positive");
    return p;
}

}  // namespace iidseval
