#include <doctest.h>

#include <cmath>
#include <numeric>

#include "iidseval/error.hpp"
#include "iidseval/preprocess.hpp"
#include "iidseval/random.hpp"

using namespace iidseval;

namespace {

Dataset numeric(std::size_t dim, std::vector<double> values) {
    FeatureSchema s;
    for (std::size_t f = 0; f < dim; ++f) {
        s.names.push_back("f" + std::to_string(f));
        s.kinds.push_back(FeatureKind::numeric);
    }
    s.category_values.resize(dim);
    std::vector<int> labels(values.size() / dim, 0);
    labels.back() = 1;
    return Dataset(s, builtin_gas_pipeline_taxonomy(), std::move(values), labels);
}

std::vector<std::size_t> all_rows(const Dataset& d) {
    std::vector<std::size_t> r(d.size());
    std::iota(r.begin(), r.end(), 0);
    return r;
}

}  // namespace

TEST_CASE("population statistics on the train rows") {
    const auto d = numeric(2, {1, 5, 2, 5, 3, 5});
    const auto p = fit_preprocessor(d, all_rows(d), 1, false);
    CHECK(p.mean[0] == doctest::Approx(2.0));
    CHECK(p.stddev[0] == doctest::Approx(std::sqrt(2.0 / 3.0)));
    CHECK(p.stddev[0] == doctest::Approx(0.8165).epsilon(1e-4));
    CHECK(p.stddev[1] == 0.0);
    CHECK(p.passthrough[1]);
    CHECK_FALSE(p.passthrough[0]);

    CHECK_THROWS_AS(fit_preprocessor(d, std::vector<std::size_t>{}, 1, false), ConfigError);
    CHECK_THROWS_AS(fit_preprocessor(d, all_rows(d), 0, false), ConfigError);
}

TEST_CASE("window 1 is plain standardization") {
    const auto d = numeric(2, {1, 5, 2, 5, 3, 5});
    const auto p = fit_preprocessor(d, all_rows(d), 1, false);
    const auto X = transform(p, d, all_rows(d));
    REQUIRE(X.cols == 2);
    const double sd = std::sqrt(2.0 / 3.0);
    CHECK(X(0, 0) == doctest::Approx(-1.0 / sd));
    CHECK(X(2, 0) == doctest::Approx(1.0 / sd));
    // Constant column: centered, not scaled.
    CHECK(X(1, 1) == 0.0);
}

TEST_CASE("windows concatenate earlier capture-order rows, zero padded") {
    const auto d = numeric(2, {1, 10, 2, 20, 3, 30});
    auto p = fit_preprocessor(d, all_rows(d), 2, false);
    CHECK(p.output_dim() == 4);
    const auto X = transform(p, d, all_rows(d));
    const auto p1 = fit_preprocessor(d, all_rows(d), 1, false);
    const auto S = transform(p1, d, all_rows(d));
    REQUIRE(X.cols == 4);
    CHECK(X(0, 0) == 0.0);
    CHECK(X(0, 1) == 0.0);
    CHECK(X(0, 2) == S(0, 0));
    CHECK(X(0, 3) == S(0, 1));
    CHECK(X(1, 0) == S(0, 0));
    CHECK(X(1, 2) == S(1, 0));

    // The window follows capture order even when only later rows are selected.
    const std::vector<std::size_t> last{2};
    const auto Y = transform(p, d, last);
    CHECK(Y(0, 0) == S(1, 0));
    CHECK(Y(0, 2) == S(2, 0));

    const auto p3 = fit_preprocessor(d, all_rows(d), 3, false);
    CHECK(p3.output_dim() == 3 * d.dim());
}

TEST_CASE("standardized train columns have mean 0 and std 1") {
    Engine rng = make_engine(12);
    std::vector<double> v(200 * 5);
    for (auto& x : v) x = uniform(rng, -50, 80);
    const auto d = numeric(5, v);
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < d.size(); i += 2) train.push_back(i);
    const auto p = fit_preprocessor(d, train, 1, false);
    const auto X = transform(p, d, train);
    for (std::size_t f = 0; f < 5; ++f) {
        double m = 0, s = 0;
        for (std::size_t r = 0; r < X.rows; ++r) m += X(r, f);
        m /= static_cast<double>(X.rows);
        for (std::size_t r = 0; r < X.rows; ++r) s += (X(r, f) - m) * (X(r, f) - m);
        s = std::sqrt(s / static_cast<double>(X.rows));
        CHECK(std::abs(m) < 1e-9);
        CHECK(std::abs(s - 1.0) < 1e-9);
    }
}

TEST_CASE("statistics ignore test rows") {
    Engine rng = make_engine(13);
    std::vector<double> v(60 * 3);
    for (auto& x : v) x = standard_normal(rng);
    auto d = numeric(3, v);
    std::vector<std::size_t> train;
    for (std::size_t i = 0; i < 40; ++i) train.push_back(i);
    const auto before = fit_preprocessor(d, train, 2, true);
    for (std::size_t i = 40 * 3; i < v.size(); ++i) d.mutable_features()[i] = uniform(rng, -1e6, 1e6);
    CHECK(fit_preprocessor(d, train, 2, true) == before);
}

TEST_CASE("one-hot expansion reserves a slot for unseen codes") {
    FeatureSchema s{{"proto", "size"}, {FeatureKind::categorical, FeatureKind::numeric}, "attack_type",
                    {{"tcp", "udp"}, {}}, {}};
    Dataset d(s, builtin_gas_pipeline_taxonomy(), {0, 1, 1, 2, 0, 3, 5, 4}, {0, 1, 0, 1});
    const std::vector<std::size_t> train{0, 1, 2};
    const auto p = fit_preprocessor(d, train, 1, true);
    CHECK(p.one_hot_width[0] == 3);
    CHECK(p.expanded_dim() == 4);
    const auto X = transform(p, d, std::vector<std::size_t>{0, 1, 3});
    CHECK(X(0, 0) == 1.0);
    CHECK(X(0, 1) == 0.0);
    CHECK(X(1, 1) == 1.0);
    // Code 5 was never seen: reserved last slot.
    CHECK(X(2, 2) == 1.0);
    CHECK(X(2, 0) + X(2, 1) == 0.0);

    const auto q = fit_preprocessor(d, train, 1, false);
    CHECK(q.expanded_dim() == 2);
    CHECK(transform(q, d, std::vector<std::size_t>{1})(0, 0) == 1.0);

    CHECK(preprocessor_from_json(nlohmann::json::parse(to_json(p).dump())) == p);
}

TEST_CASE("arity mismatch is an error") {
    const auto d2 = numeric(2, {1, 2, 3, 4});
    const auto d3 = numeric(3, {1, 2, 3, 4, 5, 6});
    const auto p = fit_preprocessor(d2, all_rows(d2), 1, false);
    CHECK_THROWS_AS(transform(p, d3, all_rows(d3)), Error);
}
