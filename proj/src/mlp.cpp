#include "iidseval/mlp.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include "iidseval/error.hpp"
#include "iidseval/simd.hpp"

namespace iidseval {

namespace {

double sigmoid(double z) {
    if (z >= 0) return 1.0 / (1.0 + std::exp(-z));
    const double e = std::exp(z);
    return e / (1.0 + e);
}

// log(1 + e^z) without overflow.
double softplus(double z) { return std::max(z, 0.0) + std::log1p(std::exp(-std::abs(z))); }

void dense_forward(const DenseLayer& l, std::span<const double> x, std::span<double> z) {
    for (std::size_t o = 0; o < l.out; ++o)
        z[o] = simd::dot({l.weights.data() + o * l.in, l.in}, x) + l.bias[o];
}

/// Pre-activations and activations of every layer for one input.
struct Trace {
    std::vector<std::vector<double>> pre;
    std::vector<std::vector<double>> act;

    explicit Trace(const Mlp& net) {
        for (const auto& l : net.layers) {
            pre.emplace_back(l.out);
            act.emplace_back(l.out);
        }
    }
};

double forward(const Mlp& net, std::span<const double> x, Trace& tr) {
    std::span<const double> a = x;
    for (std::size_t l = 0; l < net.layers.size(); ++l) {
        dense_forward(net.layers[l], a, tr.pre[l]);
        tr.act[l] = tr.pre[l];
        if (l + 1 < net.layers.size()) simd::relu(tr.act[l]);
        a = tr.act[l];
    }
    return tr.pre.back()[0];
}

MlpGradient zero_like(const Mlp& net) {
    MlpGradient g;
    for (const auto& l : net.layers)
        g.push_back({l.in, l.out, std::vector<double>(l.weights.size(), 0.0), std::vector<double>(l.out, 0.0)});
    return g;
}

}  // namespace

double Mlp::logit(std::span<const double> x) const {
    Trace tr(*this);
    return forward(*this, x, tr);
}

double Mlp::score(std::span<const double> x) const { return sigmoid(logit(x)); }

std::size_t Mlp::parameter_count() const {
    std::size_t n = 0;
    for (const auto& l : layers) n += l.weights.size() + l.bias.size();
    return n;
}

Mlp init_mlp(std::size_t input_dim, std::span<const std::size_t> hidden, Engine& rng) {
    if (input_dim == 0) throw ConfigError("mlp input dimension must be positive");
    Mlp net;
    std::size_t in = input_dim;
    auto add = [&](std::size_t out) {
        const double r = std::sqrt(6.0 / static_cast<double>(in + out));
        DenseLayer l{in, out, std::vector<double>(in * out), std::vector<double>(out, 0.0)};
        for (auto& w : l.weights) w = uniform(rng, -r, r);
        net.layers.push_back(std::move(l));
        in = out;
    };
    for (auto h : hidden) {
        if (h == 0) throw ConfigError("mlp hidden layer width must be positive");
        add(h);
    }
    add(1);
    return net;
}

double mlp_loss_and_gradient(const Mlp& net, const Matrix& X, std::span<const int> labels,
                             std::span<const std::size_t> batch, MlpGradient& grad) {
    grad = zero_like(net);
    if (batch.empty()) return 0.0;
    Trace tr(net);
    std::vector<std::vector<double>> delta;
    for (const auto& l : net.layers) delta.emplace_back(l.out);
    double loss = 0.0;

    for (auto i : batch) {
        const auto x = X.row(i);
        const double y = labels[i] ? 1.0 : 0.0;
        const double z = forward(net, x, tr);
        loss += softplus(z) - y * z;
        delta.back()[0] = sigmoid(z) - y;
        for (std::size_t l = net.layers.size(); l-- > 0;) {
            const auto& layer = net.layers[l];
            auto& g = grad[l];
            const std::span<const double> input = l == 0 ? x : std::span<const double>(tr.act[l - 1]);
            for (std::size_t o = 0; o < layer.out; ++o) {
                const double d = delta[l][o];
                if (d == 0.0) continue;
                simd::axpy(d, input, {g.weights.data() + o * layer.in, layer.in});
                g.bias[o] += d;
            }
            if (l == 0) break;
            auto& prev = delta[l - 1];
            std::fill(prev.begin(), prev.end(), 0.0);
            for (std::size_t o = 0; o < layer.out; ++o)
                if (delta[l][o] != 0.0) simd::axpy(delta[l][o], {layer.weights.data() + o * layer.in, layer.in}, prev);
            for (std::size_t k = 0; k < prev.size(); ++k)
                if (!(tr.pre[l - 1][k] > 0.0)) prev[k] = 0.0;
        }
    }
    const double inv = 1.0 / static_cast<double>(batch.size());
    for (auto& g : grad) {
        simd::scale(inv, g.weights);
        simd::scale(inv, g.bias);
    }
    return loss * inv;
}

Mlp train_mlp(const MlpParams& params, const Matrix& X, std::span<const int> labels, std::uint64_t seed) {
    if (X.rows == 0 || X.rows != labels.size()) throw Error("mlp training data is empty or misaligned");
    if (params.batch == 0) throw ConfigError("mlp.batch must be positive");
    auto init_rng = make_engine(derive_seed(seed, "mlp-init"));
    Mlp net = init_mlp(X.cols, params.hidden, init_rng);
    auto rng = make_engine(derive_seed(seed, "mlp-batches"));
    std::vector<std::size_t> order(X.rows);
    std::iota(order.begin(), order.end(), std::size_t{0});
    MlpGradient grad;
    for (std::size_t epoch = 0; epoch < params.epochs; ++epoch) {
        shuffle(std::span<std::size_t>(order), rng);
        for (std::size_t start = 0; start < order.size(); start += params.batch) {
            const std::size_t len = std::min(params.batch, order.size() - start);
            mlp_loss_and_gradient(net, X, labels, {order.data() + start, len}, grad);
            for (std::size_t l = 0; l < net.layers.size(); ++l) {
                simd::axpy(-params.learning_rate, grad[l].weights, net.layers[l].weights);
                simd::axpy(-params.learning_rate, grad[l].bias, net.layers[l].bias);
            }
        }
    }
    return net;
}

nlohmann::ordered_json to_json(const MlpParams& p) {
    nlohmann::ordered_json j;
    j["hidden"] = p.hidden;
    j["learning_rate"] = p.learning_rate;
    j["batch"] = p.batch;
    j["epochs"] = p.epochs;
    j["window"] = p.window;
    return j;
}

MlpParams mlp_params_from_json(const nlohmann::json& j) {
    MlpParams p;
    for (const auto& [key, v] : j.items()) {
        if (key == "hidden") p.hidden = v.get<std::vector<std::size_t>>();
        else if (key == "learning_rate") p.learning_rate = v.get<double>();
        else if (key == "batch") p.batch = v.get<std::size_t>();
        else if (key == "epochs") p.epochs = v.get<std::size_t>();
        else if (key == "window") p.window = v.get<std::size_t>();
        else throw ConfigError("unknown mlp hyperparameter '" + key + "'");
    }
    if (!(p.learning_rate > 0.0)) throw ConfigError("mlp.learning_rate must be positive");
    if (p.batch == 0) throw ConfigError("mlp.batch must be positive");
    if (p.epochs == 0) throw ConfigError("mlp.epochs must be positive");
    if (p.window == 0) throw ConfigError("mlp.window must be positive");
    for (auto h : p.hidden)
        if (h == 0) throw ConfigError("mlp.hidden widths must be positive");
    return p;
}

nlohmann::ordered_json to_json(const Mlp& m) {
    auto layers = nlohmann::ordered_json::array();
    for (const auto& l : m.layers) {
        nlohmann::ordered_json lj;
        lj["in"] = l.in;
        lj["out"] = l.out;
        lj["weights"] = l.weights;
        lj["bias"] = l.bias;
        layers.push_back(std::move(lj));
    }
    return layers;
}

Mlp mlp_from_json(const nlohmann::json& j) {
    Mlp m;
    for (const auto& lj : j) {
        DenseLayer l{lj.at("in").get<std::size_t>(), lj.at("out").get<std::size_t>(),
                     lj.at("weights").get<std::vector<double>>(), lj.at("bias").get<std::vector<double>>()};
        if (l.weights.size() != l.in * l.out || l.bias.size() != l.out) throw ParseError("inconsistent mlp layer", 0);
        if (!m.layers.empty() && m.layers.back().out != l.in) throw ParseError("mlp layer shapes do not chain", 0);
        m.layers.push_back(std::move(l));
    }
    if (m.layers.empty() || m.layers.back().out != 1) throw ParseError("mlp must end in one output unit", 0);
    return m;
}

}  // namespace iidseval
