#include "qmlx/model_io.hpp"

#include <fstream>
#include <stdexcept>

namespace qmlx::model_io {

using nlohmann::json;

namespace {

constexpr int kFormatVersion = 1;

json matrix_to_json(const Matrix& m) {
    json rows = json::array();
    for (std::size_t r = 0; r < m.rows(); ++r) {
        json row = json::array();
        for (std::size_t c = 0; c < m.cols(); ++c) row.push_back(m.at(r, c));
        rows.push_back(std::move(row));
    }
    return {{"rows", m.rows()}, {"cols", m.cols()}, {"data", std::move(rows)}};
}

Matrix matrix_from_json(const json& j) {
    Matrix m(j.at("rows").get<std::size_t>(), j.at("cols").get<std::size_t>());
    const json& data = j.at("data");
    for (std::size_t r = 0; r < m.rows(); ++r)
        for (std::size_t c = 0; c < m.cols(); ++c) m.at(r, c) = data[r][c].get<double>();
    return m;
}

json binary_svm_to_json(const cml::SvmBinaryModel& m) {
    return {{"support_indices", m.support_indices}, {"alphas", m.alphas},
            {"support_labels", m.support_labels},   {"bias", m.bias},
            {"C", m.C},                             {"iterations", m.iterations},
            {"kkt_violation", m.kkt_violation}};
}

cml::SvmBinaryModel binary_svm_from_json(const json& j) {
    cml::SvmBinaryModel m;
    m.support_indices = j.at("support_indices").get<std::vector<int>>();
    m.alphas = j.at("alphas").get<std::vector<double>>();
    m.support_labels = j.at("support_labels").get<std::vector<int>>();
    m.bias = j.at("bias").get<double>();
    m.C = j.at("C").get<double>();
    m.iterations = j.at("iterations").get<int>();
    m.kkt_violation = j.at("kkt_violation").get<double>();
    return m;
}

json ovo_to_json(const cml::OvoSvm& ovo) {
    json pairs = json::array();
    for (const auto& pair : ovo.pairs)
        pairs.push_back({{"class_a", pair.class_a},
                         {"class_b", pair.class_b},
                         {"model", binary_svm_to_json(pair.model)}});
    return {{"num_classes", ovo.num_classes}, {"pairs", std::move(pairs)}};
}

cml::OvoSvm ovo_from_json(const json& j) {
    cml::OvoSvm ovo;
    ovo.num_classes = j.at("num_classes").get<int>();
    for (const json& pair : j.at("pairs"))
        ovo.pairs.push_back({pair.at("class_a").get<int>(), pair.at("class_b").get<int>(),
                             binary_svm_from_json(pair.at("model"))});
    return ovo;
}

json feature_map_to_json(const encode::FeatureMapSpec& spec) {
    return {{"num_features", spec.num_features},
            {"reps", spec.reps},
            {"entanglement", encode::entanglement_name(spec.entanglement)}};
}

encode::FeatureMapSpec feature_map_from_json(const json& j) {
    encode::FeatureMapSpec spec;
    spec.num_features = j.at("num_features").get<int>();
    spec.reps = j.at("reps").get<int>();
    spec.entanglement = encode::parse_entanglement(j.at("entanglement").get<std::string>());
    return spec;
}

json envelope(const std::string& kind) {
    return {{"format", "qmlx-model"}, {"version", kFormatVersion}, {"kind", kind}};
}

void check_envelope(const json& doc) {
    if (doc.value("format", "") != "qmlx-model")
        throw std::runtime_error("not a qmlx model document");
    if (doc.value("version", 0) != kFormatVersion)
        throw std::runtime_error("unsupported model document version");
}

}  // namespace

json to_json(const cml::SvcModel& model) {
    json doc = envelope("svc");
    doc["gamma"] = model.gamma();
    doc["config"] = {{"C", model.config().C}, {"gamma", model.config().gamma}};
    doc["train_X"] = matrix_to_json(model.train_X());
    doc["ovo"] = ovo_to_json(model.ovo());
    return doc;
}

json to_json(const cml::QsvcModel& model) {
    json doc = envelope("qsvc");
    doc["config"] = {{"C", model.config().C},
                     {"feature_map", feature_map_to_json(model.config().feature_map)}};
    doc["train_X"] = matrix_to_json(model.train_X());
    doc["ovo"] = ovo_to_json(model.ovo());
    return doc;
}

json to_json(const cml::ForestModel& model) {
    json doc = envelope("rf");
    const auto& cfg = model.config();
    doc["config"] = {{"num_trees", cfg.num_trees},   {"bootstrap", cfg.bootstrap},
                     {"max_depth", cfg.max_depth},   {"min_leaf", cfg.min_leaf},
                     {"feature_subsample", cfg.feature_subsample}, {"seed", cfg.seed}};
    doc["num_classes"] = model.num_classes();
    json trees = json::array();
    for (const auto& tree : model.trees()) {
        json nodes = json::array();
        for (const auto& node : tree.nodes())
            nodes.push_back({{"feature", node.feature},
                             {"threshold", node.threshold},
                             {"left", node.left},
                             {"right", node.right},
                             {"counts", node.counts}});
        trees.push_back(std::move(nodes));
    }
    doc["trees"] = std::move(trees);
    return doc;
}

json to_json(const vqc::VqcModel& model) {
    json doc = envelope("vqc");
    const auto& cfg = model.config();
    doc["config"] = {
        {"feature_map", feature_map_to_json(cfg.feature_map)},
        {"ansatz",
         {{"kind", vqc::ansatz_name(cfg.ansatz.kind)},
          {"num_qubits", cfg.ansatz.num_qubits},
          {"reps", cfg.ansatz.reps},
          {"entanglement", encode::entanglement_name(cfg.ansatz.entanglement)}}},
        {"optimizer",
         {{"kind", vqc::optimizer_name(cfg.optimizer.kind)},
          {"max_iters", cfg.optimizer.max_iters},
          {"initial_trust_radius", cfg.optimizer.initial_trust_radius},
          {"final_trust_radius", cfg.optimizer.final_trust_radius},
          {"seed", cfg.optimizer.seed}}},
        {"num_classes", cfg.num_classes},
        {"seed", cfg.seed},
        {"interpret_table", cfg.interpret_table}};
    doc["params"] = model.params();
    doc["training_log"] = model.training_log();
    return doc;
}

cml::ClassifierPtr from_json(const json& doc) {
    check_envelope(doc);
    const std::string kind = doc.at("kind").get<std::string>();
    if (kind == "svc") {
        cml::SvcConfig config;
        config.C = doc.at("config").at("C").get<double>();
        config.gamma = doc.at("config").at("gamma").get<double>();
        return std::make_unique<cml::SvcModel>(matrix_from_json(doc.at("train_X")),
                                               ovo_from_json(doc.at("ovo")),
                                               doc.at("gamma").get<double>(), config);
    }
    if (kind == "qsvc") {
        cml::QsvcConfig config;
        config.C = doc.at("config").at("C").get<double>();
        config.feature_map = feature_map_from_json(doc.at("config").at("feature_map"));
        return std::make_unique<cml::QsvcModel>(matrix_from_json(doc.at("train_X")),
                                                ovo_from_json(doc.at("ovo")), config);
    }
    if (kind == "rf") {
        const json& cfg = doc.at("config");
        cml::ForestConfig config;
        config.num_trees = cfg.at("num_trees").get<int>();
        config.bootstrap = cfg.at("bootstrap").get<bool>();
        config.max_depth = cfg.at("max_depth").get<int>();
        config.min_leaf = cfg.at("min_leaf").get<int>();
        config.feature_subsample = cfg.at("feature_subsample").get<int>();
        config.seed = cfg.at("seed").get<std::uint64_t>();
        const int num_classes = doc.at("num_classes").get<int>();
        std::vector<cml::DecisionTree> trees;
        for (const json& tree_json : doc.at("trees")) {
            std::vector<cml::TreeNode> nodes;
            for (const json& nj : tree_json) {
                cml::TreeNode node;
                node.feature = nj.at("feature").get<int>();
                node.threshold = nj.at("threshold").get<double>();
                node.left = nj.at("left").get<int>();
                node.right = nj.at("right").get<int>();
                node.counts = nj.at("counts").get<std::vector<double>>();
                nodes.push_back(std::move(node));
            }
            trees.emplace_back(num_classes, std::move(nodes));
        }
        return std::make_unique<cml::ForestModel>(num_classes, std::move(trees), config);
    }
    if (kind == "vqc") {
        const json& cfg = doc.at("config");
        vqc::VqcConfig config;
        config.feature_map = feature_map_from_json(cfg.at("feature_map"));
        config.ansatz.kind = vqc::parse_ansatz(cfg.at("ansatz").at("kind").get<std::string>());
        config.ansatz.num_qubits = cfg.at("ansatz").at("num_qubits").get<int>();
        config.ansatz.reps = cfg.at("ansatz").at("reps").get<int>();
        config.ansatz.entanglement =
            encode::parse_entanglement(cfg.at("ansatz").at("entanglement").get<std::string>());
        config.optimizer.kind =
            vqc::parse_optimizer(cfg.at("optimizer").at("kind").get<std::string>());
        config.optimizer.max_iters = cfg.at("optimizer").at("max_iters").get<int>();
        config.optimizer.initial_trust_radius =
            cfg.at("optimizer").at("initial_trust_radius").get<double>();
        config.optimizer.final_trust_radius =
            cfg.at("optimizer").at("final_trust_radius").get<double>();
        config.optimizer.seed = cfg.at("optimizer").at("seed").get<std::uint64_t>();
        config.num_classes = cfg.at("num_classes").get<int>();
        config.seed = cfg.at("seed").get<std::uint64_t>();
        config.interpret_table = cfg.at("interpret_table").get<std::vector<int>>();
        return std::make_unique<vqc::VqcModel>(config, doc.at("params").get<std::vector<double>>(),
                                               doc.at("training_log").get<std::vector<double>>());
    }
    throw std::runtime_error("unknown model kind '" + kind + "'");
}

void save_model(const nlohmann::json& doc, const std::string& path) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write model file: " + path);
    out << doc.dump(2) << '\n';
}

cml::ClassifierPtr load_model(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot read model file: " + path);
    json doc;
    in >> doc;
    return from_json(doc);
}

}  // namespace qmlx::model_io
