#include <doctest.h>

#include "qmlx/model_io.hpp"
#include "qmlx/rng.hpp"

using namespace qmlx;
using qmlx::Matrix;

namespace {

struct Toy {
    Matrix X;
    std::vector<int> y;
};

Toy make_toy(std::uint64_t seed) {
    Rng rng(seed);
    Toy toy;
    toy.X = Matrix(36, 3);
    toy.y.resize(36);
    for (std::size_t i = 0; i < 36; ++i) {
        for (std::size_t j = 0; j < 3; ++j) toy.X.at(i, j) = rng.uniform();
        toy.y[i] = toy.X.at(i, 0) + toy.X.at(i, 1) > 1.0 ? (toy.X.at(i, 2) > 0.5 ? 2 : 1) : 0;
    }
    // make sure every class has a few members
    toy.y[0] = 0;
    toy.y[1] = 0;
    toy.y[2] = 1;
    toy.y[3] = 1;
    toy.y[4] = 2;
    toy.y[5] = 2;
    return toy;
}

template <typename Model>
void check_same_predictions(const Model& original, const cml::Classifier& restored,
                            const Matrix& X) {
    for (std::size_t i = 0; i < X.rows(); ++i) {
        const auto a = original.predict_proba(X.row(i));
        const auto b = restored.predict_proba(X.row(i));
        REQUIRE(a.size() == b.size());
        for (std::size_t c = 0; c < a.size(); ++c) CHECK(a[c] == b[c]);
    }
}

}  // namespace

TEST_SUITE_BEGIN("model_io");

TEST_CASE("svc round trip") {
    const Toy toy = make_toy(1);
    const cml::SvcModel model = cml::SvcModel::train(toy.X, toy.y, 3, cml::SvcConfig{});
    const auto restored = model_io::from_json(model_io::to_json(model));
    CHECK(restored->kind() == "svc");
    check_same_predictions(model, *restored, toy.X);
}

TEST_CASE("qsvc round trip") {
    const Toy toy = make_toy(2);
    cml::QsvcConfig config;
    config.feature_map.num_features = 3;
    config.feature_map.reps = 1;
    const cml::QsvcModel model = cml::QsvcModel::train(toy.X, toy.y, 3, config);
    const auto restored = model_io::from_json(model_io::to_json(model));
    CHECK(restored->kind() == "qsvc");
    check_same_predictions(model, *restored, toy.X);
}

TEST_CASE("forest round trip") {
    const Toy toy = make_toy(3);
    cml::ForestConfig config;
    config.num_trees = 12;
    config.seed = 5;
    const cml::ForestModel model = cml::ForestModel::fit(toy.X, toy.y, 3, config);
    const auto restored = model_io::from_json(model_io::to_json(model));
    CHECK(restored->kind() == "rf");
    check_same_predictions(model, *restored, toy.X);
}

TEST_CASE("vqc round trip") {
    const Toy toy = make_toy(4);
    vqc::VqcConfig config;
    config.feature_map.num_features = 3;
    config.feature_map.reps = 1;
    config.ansatz.kind = vqc::AnsatzKind::RealAmplitudes;
    config.ansatz.num_qubits = 3;
    config.ansatz.reps = 1;
    config.num_classes = 3;
    config.optimizer.max_iters = 40;
    config.seed = 8;
    const vqc::VqcModel model = vqc::VqcModel::train(toy.X, toy.y, config);
    const auto restored = model_io::from_json(model_io::to_json(model));
    CHECK(restored->kind() == "vqc");
    check_same_predictions(model, *restored, toy.X);
}

TEST_CASE("malformed documents are rejected") {
    nlohmann::json doc = {{"format", "something-else"}};
    CHECK_THROWS_AS(static_cast<void>(model_io::from_json(doc)), std::runtime_error);
    nlohmann::json bad_kind = {{"format", "qmlx-model"}, {"version", 1}, {"kind", "nope"}};
    CHECK_THROWS_AS(static_cast<void>(model_io::from_json(bad_kind)), std::runtime_error);
}

TEST_SUITE_END();
