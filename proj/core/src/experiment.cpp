#include "qmlx/experiment.hpp"

#include <algorithm>
#include <chrono>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <thread>

#include "qmlx/model_io.hpp"
#include "qmlx/qkernel.hpp"

namespace qmlx::pipeline {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

constexpr int kBootstrapResamples = 1000;
constexpr const char* kVersion = "0.1.0";

class StageTimer {
public:
    StageTimer() : start_(std::chrono::steady_clock::now()) {}
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() - start_).count();
    }

private:
    std::chrono::steady_clock::time_point start_;
};

std::ofstream open_csv(const fs::path& path, const std::string& header) {
    std::ofstream out(path, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    out.precision(17);
    out << header << '\n';
    return out;
}

}  // namespace

int ExperimentConfig::effective_workers() const {
    if (workers > 0) return workers;
    const unsigned hw = std::thread::hardware_concurrency();
    return static_cast<int>(std::clamp(hw, 1u, 8u));
}

ExperimentConfig config_from_json(const json& doc) {
    ExperimentConfig config;
    if (doc.contains("seed")) config.seed = doc.at("seed").get<std::uint64_t>();
    if (doc.contains("workers")) config.workers = doc.at("workers").get<int>();
    if (doc.contains("models")) config.models = doc.at("models").get<std::vector<std::string>>();

    if (doc.contains("split")) {
        const json& s = doc.at("split");
        if (s.contains("test_fraction"))
            config.split.test_fraction = s.at("test_fraction").get<double>();
        if (s.contains("mode"))
            config.split.mode = parse_split_mode(s.at("mode").get<std::string>());
        if (s.contains("seed")) config.split.seed = s.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("svc")) {
        const json& s = doc.at("svc");
        if (s.contains("C")) config.svc.C = s.at("C").get<double>();
        if (s.contains("gamma")) config.svc.gamma = s.at("gamma").get<double>();
    }
    if (doc.contains("qsvc")) {
        const json& s = doc.at("qsvc");
        if (s.contains("C")) config.qsvc.C = s.at("C").get<double>();
        if (s.contains("featuremap")) {
            const json& f = s.at("featuremap");
            if (f.contains("reps")) config.qsvc.featuremap_reps = f.at("reps").get<int>();
            if (f.contains("entanglement"))
                config.qsvc.featuremap_entanglement =
                    encode::parse_entanglement(f.at("entanglement").get<std::string>());
        }
    }
    if (doc.contains("rf")) {
        const json& s = doc.at("rf");
        if (s.contains("trees")) config.rf.trees = s.at("trees").get<int>();
        if (s.contains("min_leaf")) config.rf.min_leaf = s.at("min_leaf").get<int>();
        if (s.contains("max_depth")) config.rf.max_depth = s.at("max_depth").get<int>();
        if (s.contains("feature_subsample"))
            config.rf.feature_subsample = s.at("feature_subsample").get<int>();
        if (s.contains("seed")) config.rf.seed = s.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("vqc")) {
        const json& s = doc.at("vqc");
        if (s.contains("ansatz")) config.vqc.ansatz = vqc::parse_ansatz(s.at("ansatz").get<std::string>());
        if (s.contains("reps")) config.vqc.reps = s.at("reps").get<int>();
        if (s.contains("entanglement"))
            config.vqc.entanglement =
                encode::parse_entanglement(s.at("entanglement").get<std::string>());
        if (s.contains("featuremap")) {
            const json& f = s.at("featuremap");
            if (f.contains("reps")) config.vqc.featuremap_reps = f.at("reps").get<int>();
            if (f.contains("entanglement"))
                config.vqc.featuremap_entanglement =
                    encode::parse_entanglement(f.at("entanglement").get<std::string>());
        }
        if (s.contains("optimizer")) {
            const json& o = s.at("optimizer");
            if (o.contains("max_iters"))
                config.vqc.optimizer.max_iters = o.at("max_iters").get<int>();
            if (o.contains("initial_trust_radius"))
                config.vqc.optimizer.initial_trust_radius =
                    o.at("initial_trust_radius").get<double>();
            if (o.contains("final_trust_radius"))
                config.vqc.optimizer.final_trust_radius = o.at("final_trust_radius").get<double>();
        }
        if (s.contains("seed")) config.vqc.seed = s.at("seed").get<std::uint64_t>();
    }
    if (doc.contains("explain")) {
        const json& s = doc.at("explain");
        if (s.contains("perm_repeats")) config.explain.perm_repeats = s.at("perm_repeats").get<int>();
        if (s.contains("ale_intervals"))
            config.explain.ale_intervals = s.at("ale_intervals").get<int>();
        if (s.contains("shap_background"))
            config.explain.shap_background = s.at("shap_background").get<int>();
    }
    return config;
}

json config_to_json(const ExperimentConfig& c) {
    json doc;
    doc["seed"] = c.seed;
    doc["workers"] = c.workers;
    doc["models"] = c.models;
    doc["split"] = {{"test_fraction", c.split.test_fraction},
                    {"mode", split_mode_name(c.split.mode)},
                    {"seed", c.split_seed()}};
    doc["svc"] = {{"C", c.svc.C}, {"gamma", c.svc.gamma}};
    doc["qsvc"] = {{"C", c.qsvc.C},
                   {"featuremap",
                    {{"reps", c.qsvc.featuremap_reps},
                     {"entanglement", encode::entanglement_name(c.qsvc.featuremap_entanglement)}}}};
    doc["rf"] = {{"trees", c.rf.trees},
                 {"min_leaf", c.rf.min_leaf},
                 {"max_depth", c.rf.max_depth},
                 {"feature_subsample", c.rf.feature_subsample},
                 {"seed", c.rf_seed()}};
    doc["vqc"] = {{"ansatz", vqc::ansatz_name(c.vqc.ansatz)},
                  {"reps", c.vqc.reps},
                  {"entanglement", encode::entanglement_name(c.vqc.entanglement)},
                  {"featuremap",
                   {{"reps", c.vqc.featuremap_reps},
                    {"entanglement", encode::entanglement_name(c.vqc.featuremap_entanglement)}}},
                  {"optimizer",
                   {{"kind", vqc::optimizer_name(c.vqc.optimizer.kind)},
                    {"max_iters", c.vqc.optimizer.max_iters},
                    {"initial_trust_radius", c.vqc.optimizer.initial_trust_radius},
                    {"final_trust_radius", c.vqc.optimizer.final_trust_radius}}},
                  {"seed", c.vqc_seed()}};
    doc["explain"] = {{"perm_repeats", c.explain.perm_repeats},
                      {"ale_intervals", c.explain.ale_intervals},
                      {"shap_background", c.explain.shap_background}};
    return doc;
}

std::string config_hash(const ExperimentConfig& config) {
    return fnv1a_hex(config_to_json(config).dump());
}

Matrix subsample_rows(const Matrix& X, std::size_t limit, std::uint64_t seed) {
    if (X.rows() <= limit) return X;
    std::vector<int> order(X.rows());
    for (std::size_t i = 0; i < X.rows(); ++i) order[i] = static_cast<int>(i);
    Rng rng(seed);
    rng.shuffle(order);
    order.resize(limit);
    std::sort(order.begin(), order.end());
    return X.select_rows(order);
}

Experiment::Experiment(ExperimentConfig config, Dataset dataset)
    : config_(std::move(config)), dataset_(std::move(dataset)) {}

void Experiment::prepare() {
    split_ = split_dataset(dataset_, config_.split.test_fraction, config_.split.mode,
                           config_.split_seed());
    const Matrix raw_train = dataset_.X.select_rows(split_.train);
    const Matrix raw_test = dataset_.X.select_rows(split_.test);
    scaler_ = minmax_fit(raw_train);
    train_X_ = minmax_transform(scaler_, raw_train);
    test_X_ = minmax_transform(scaler_, raw_test);
    train_y_ = select_labels(dataset_.y, split_.train);
    test_y_ = select_labels(dataset_.y, split_.test);
    prepared_ = true;
}

explain::Trainer Experiment::trainer_for(const std::string& kind) const {
    const int num_classes = dataset_.num_classes();
    const int workers = config_.effective_workers();
    if (kind == "svc") {
        const cml::SvcConfig svc = config_.svc;
        return [svc, num_classes](const Matrix& X, const std::vector<int>& y) {
            return std::make_unique<cml::SvcModel>(cml::SvcModel::train(X, y, num_classes, svc));
        };
    }
    if (kind == "qsvc") {
        const QsvcSection section = config_.qsvc;
        return [section, num_classes, workers](const Matrix& X, const std::vector<int>& y) {
            cml::QsvcConfig qsvc;
            qsvc.C = section.C;
            qsvc.feature_map.num_features = static_cast<int>(X.cols());
            qsvc.feature_map.reps = section.featuremap_reps;
            qsvc.feature_map.entanglement = section.featuremap_entanglement;
            return std::make_unique<cml::QsvcModel>(
                cml::QsvcModel::train(X, y, num_classes, qsvc, workers));
        };
    }
    if (kind == "rf") {
        cml::ForestConfig rf;
        rf.num_trees = config_.rf.trees;
        rf.min_leaf = config_.rf.min_leaf;
        rf.max_depth = config_.rf.max_depth;
        rf.feature_subsample = config_.rf.feature_subsample;
        rf.seed = config_.rf_seed();
        return [rf, num_classes, workers](const Matrix& X, const std::vector<int>& y) {
            return std::make_unique<cml::ForestModel>(
                cml::ForestModel::fit(X, y, num_classes, rf, workers));
        };
    }
    if (kind == "vqc") {
        const VqcSection section = config_.vqc;
        const std::uint64_t seed = config_.vqc_seed();
        return [section, num_classes, seed](const Matrix& X, const std::vector<int>& y) {
            vqc::VqcConfig cfg;
            cfg.feature_map.num_features = static_cast<int>(X.cols());
            cfg.feature_map.reps = section.featuremap_reps;
            cfg.feature_map.entanglement = section.featuremap_entanglement;
            cfg.ansatz.kind = section.ansatz;
            cfg.ansatz.num_qubits = static_cast<int>(X.cols());
            cfg.ansatz.reps = section.reps;
            cfg.ansatz.entanglement = section.entanglement;
            cfg.optimizer = section.optimizer;
            cfg.optimizer.seed = seed;
            cfg.num_classes = num_classes;
            cfg.seed = seed;
            return std::make_unique<vqc::VqcModel>(vqc::VqcModel::train(X, y, cfg));
        };
    }
    throw std::invalid_argument("unknown model kind '" + kind + "'");
}

void Experiment::record_stage(const std::string& name, const std::string& status, double seconds,
                              const std::string& error) {
    json stage = {{"name", name}, {"status", status}, {"seconds", seconds}};
    if (!error.empty()) stage["error"] = error;
    stages_.push_back(std::move(stage));
}

void Experiment::train_models() {
    if (!prepared_) prepare();
    for (const std::string& kind : config_.models) {
        StageTimer timer;
        try {
            const explain::Trainer trainer = trainer_for(kind);
            models_[kind] = trainer(train_X_, train_y_);
            record_stage("train." + kind, "ok", timer.seconds());
        } catch (const std::exception& e) {
            record_stage("train." + kind, "error", timer.seconds(), e.what());
        }
    }
}

nlohmann::json Experiment::report_header(const std::string& model_kind) const {
    return {{"seed", config_.seed},
            {"config_hash", config_hash(config_)},
            {"model", model_kind}};
}

void Experiment::write_report(const std::string& out_dir, const std::string& name,
                              const json& body) const {
    const fs::path dir = fs::path(out_dir) / "reports";
    fs::create_directories(dir);
    std::ofstream out(dir / name, std::ios::binary);
    if (!out) throw std::runtime_error("cannot write report " + name);
    out << body.dump(2) << '\n';
}

void Experiment::save_models(const std::string& out_dir) {
    const fs::path dir = fs::path(out_dir) / "models";
    fs::create_directories(dir);
    for (const auto& [kind, model] : models_) {
        json doc;
        if (kind == "svc") doc = model_io::to_json(dynamic_cast<const cml::SvcModel&>(*model));
        else if (kind == "qsvc")
            doc = model_io::to_json(dynamic_cast<const cml::QsvcModel&>(*model));
        else if (kind == "rf")
            doc = model_io::to_json(dynamic_cast<const cml::ForestModel&>(*model));
        else if (kind == "vqc")
            doc = model_io::to_json(dynamic_cast<const vqc::VqcModel&>(*model));
        else continue;
        model_io::save_model(doc, (dir / (kind + ".json")).string());
    }
}

void Experiment::write_split(const std::string& out_dir) const {
    fs::create_directories(out_dir);
    json doc = {{"seed", config_.split_seed()},
                {"mode", split_mode_name(config_.split.mode)},
                {"test_fraction", config_.split.test_fraction},
                {"train", split_.train},
                {"test", split_.test},
                {"scaler", {{"min", scaler_.min}, {"max", scaler_.max}}}};
    std::ofstream out(fs::path(out_dir) / "split.json", std::ios::binary);
    out << doc.dump(2) << '\n';
}

void Experiment::load_models(const std::string& out_dir) {
    {
        std::ifstream in(fs::path(out_dir) / "split.json", std::ios::binary);
        if (!in)
            throw std::runtime_error("no split.json under " + out_dir + "; run `train` first");
        json doc;
        in >> doc;
        split_.train = doc.at("train").get<std::vector<int>>();
        split_.test = doc.at("test").get<std::vector<int>>();
        scaler_.min = doc.at("scaler").at("min").get<std::vector<double>>();
        scaler_.max = doc.at("scaler").at("max").get<std::vector<double>>();
    }
    train_X_ = minmax_transform(scaler_, dataset_.X.select_rows(split_.train));
    test_X_ = minmax_transform(scaler_, dataset_.X.select_rows(split_.test));
    train_y_ = select_labels(dataset_.y, split_.train);
    test_y_ = select_labels(dataset_.y, split_.test);
    prepared_ = true;

    for (const std::string& kind : config_.models) {
        const fs::path path = fs::path(out_dir) / "models" / (kind + ".json");
        if (fs::exists(path)) models_[kind] = model_io::load_model(path.string());
    }
    if (models_.empty())
        throw std::runtime_error("no saved models under " + out_dir + "; run `train` first");
}

void Experiment::evaluate_models(const std::string& out_dir) {
    if (!prepared_ || models_.empty())
        throw std::logic_error("evaluate_models: train or load models first");
    const fs::path csv_dir = fs::path(out_dir) / "csv";
    fs::create_directories(csv_dir);
    std::ofstream eval_csv = open_csv(csv_dir / "evaluation.csv", "model,class,metric,value");
    std::ofstream boot_csv = open_csv(csv_dir / "bootstrap.csv", "model,resample,score");
    std::ofstream mis_csv =
        open_csv(csv_dir / "misclassified.csv", "model,test_index,true_label,predicted");

    for (const auto& [kind, model] : models_) {
        StageTimer timer;
        try {
            const std::vector<int> predictions = model->predict_batch(test_X_);
            const EvaluationReport report =
                evaluate(test_y_, predictions, dataset_.num_classes());

            json body = report_header(kind);
            body["accuracy"] = report.accuracy;
            json per_class = json::array();
            for (std::size_t c = 0; c < report.per_class.size(); ++c) {
                const ClassMetrics& m = report.per_class[c];
                per_class.push_back({{"class", static_cast<int>(c)},
                                     {"class_name", dataset_.class_names[c]},
                                     {"precision", m.precision},
                                     {"recall", m.recall},
                                     {"f1", m.f1},
                                     {"support", m.support}});
                eval_csv << kind << ',' << dataset_.class_names[c] << ",precision,"
                         << m.precision << '\n';
                eval_csv << kind << ',' << dataset_.class_names[c] << ",recall," << m.recall
                         << '\n';
                eval_csv << kind << ',' << dataset_.class_names[c] << ",f1," << m.f1 << '\n';
            }
            eval_csv << kind << ",overall,accuracy," << report.accuracy << '\n';
            body["per_class"] = std::move(per_class);
            body["confusion"] = report.confusion;
            json mis = json::array();
            for (const Misclassified& m : report.misclassified) {
                mis.push_back({{"test_index", m.test_index},
                               {"true_label", m.true_label},
                               {"predicted", m.predicted}});
                mis_csv << kind << ',' << m.test_index << ',' << m.true_label << ','
                        << m.predicted << '\n';
            }
            body["misclassified"] = std::move(mis);
            write_report(out_dir, "evaluation_" + kind + ".json", body);

            const BootstrapSummary boot = bootstrap_accuracy(
                test_y_, predictions, kBootstrapResamples, config_.bootstrap_seed());
            json boot_body = report_header(kind);
            boot_body["resamples"] = boot.resamples;
            boot_body["bootstrap_seed"] = boot.seed;
            boot_body["point_accuracy"] = report.accuracy;
            boot_body["mean"] = boot.mean;
            boot_body["p25"] = boot.p25;
            boot_body["p75"] = boot.p75;
            boot_body["scores"] = boot.scores;
            write_report(out_dir, "bootstrap_" + kind + ".json", boot_body);
            for (std::size_t r = 0; r < boot.scores.size(); ++r)
                boot_csv << kind << ',' << r << ',' << boot.scores[r] << '\n';

            record_stage("evaluate." + kind, "ok", timer.seconds());
        } catch (const std::exception& e) {
            record_stage("evaluate." + kind, "error", timer.seconds(), e.what());
        }
    }
}

void Experiment::explain_models(const std::string& out_dir) {
    if (!prepared_ || models_.empty())
        throw std::logic_error("explain_models: train or load models first");
    const fs::path csv_dir = fs::path(out_dir) / "csv";
    fs::create_directories(csv_dir);
    const int workers = config_.effective_workers();
    const auto feature_name = [&](int j) { return dataset_.feature_names[static_cast<std::size_t>(j)]; };
    const auto class_name = [&](int c) { return dataset_.class_names[static_cast<std::size_t>(c)]; };

    std::ofstream loo_csv =
        open_csv(csv_dir / "loo.csv", "model,feature_index,feature,score_without,delta");
    std::ofstream perm_csv =
        open_csv(csv_dir / "permutation.csv", "model,feature_index,feature,repeat,score");
    std::ofstream perm_summary_csv = open_csv(csv_dir / "permutation_summary.csv",
                                              "model,feature_index,feature,importance,stddev");
    std::ofstream ale_csv = open_csv(
        csv_dir / "ale.csv",
        "model,feature_index,feature,class_index,class,edge,accumulated,centered");
    std::ofstream ale_imp_csv =
        open_csv(csv_dir / "ale_importance.csv", "model,feature_index,feature,importance");
    std::ofstream shap_csv = open_csv(
        csv_dir / "shap.csv", "model,test_index,class_index,class,feature_index,feature,phi");
    std::ofstream shap_global_csv = open_csv(
        csv_dir / "shap_global.csv", "model,class_index,class,feature_index,feature,mean_abs_phi");

    for (const auto& [kind, model] : models_) {
        // Leave-one-out needs retraining, not the trained model.
        {
            StageTimer timer;
            try {
                const explain::LooReport report = explain::loo_importance(
                    trainer_for(kind), train_X_, train_y_, test_X_, test_y_, workers);
                json body = report_header(kind);
                body["full_score"] = report.full_score;
                json features = json::array();
                for (const explain::LooFeature& f : report.per_feature) {
                    json fj = {{"feature", f.feature},
                               {"name", feature_name(f.feature)},
                               {"score_without", f.score_without},
                               {"delta", f.delta}};
                    if (!f.error.empty()) fj["error"] = f.error;
                    features.push_back(std::move(fj));
                    loo_csv << kind << ',' << f.feature << ',' << feature_name(f.feature) << ','
                            << f.score_without << ',' << f.delta << '\n';
                }
                body["per_feature"] = std::move(features);
                write_report(out_dir, "loo_" + kind + ".json", body);
                record_stage("loo." + kind, "ok", timer.seconds());
            } catch (const std::exception& e) {
                record_stage("loo." + kind, "error", timer.seconds(), e.what());
            }
        }

        {
            StageTimer timer;
            try {
                const explain::PermutationReport report = explain::permutation_importance(
                    *model, test_X_, test_y_, config_.explain.perm_repeats,
                    config_.permutation_seed(), workers);
                json body = report_header(kind);
                body["baseline_score"] = report.baseline_score;
                body["repeats"] = report.repeats;
                body["perm_seed"] = report.seed;
                json features = json::array();
                for (const explain::PermutationFeature& f : report.per_feature) {
                    features.push_back({{"feature", f.feature},
                                        {"name", feature_name(f.feature)},
                                        {"importance", f.importance},
                                        {"stddev", f.stddev},
                                        {"scores", f.scores}});
                    for (std::size_t k = 0; k < f.scores.size(); ++k)
                        perm_csv << kind << ',' << f.feature << ',' << feature_name(f.feature)
                                 << ',' << k << ',' << f.scores[k] << '\n';
                    perm_summary_csv << kind << ',' << f.feature << ','
                                     << feature_name(f.feature) << ',' << f.importance << ','
                                     << f.stddev << '\n';
                }
                body["per_feature"] = std::move(features);
                write_report(out_dir, "permutation_" + kind + ".json", body);
                record_stage("permutation." + kind, "ok", timer.seconds());
            } catch (const std::exception& e) {
                record_stage("permutation." + kind, "error", timer.seconds(), e.what());
            }
        }

        {
            StageTimer timer;
            try {
                const std::vector<explain::AleCurve> curves = explain::ale_curves(
                    *model, train_X_, config_.explain.ale_intervals, workers);
                const std::vector<double> importance =
                    explain::ale_importance_from_curves(curves, train_X_.cols());
                json body = report_header(kind);
                body["intervals"] = config_.explain.ale_intervals;
                // The paper could not produce VQC probabilities; ours does,
                // so VQC ALE/SHAP results are beyond its comparisons.
                body["extension"] = (kind == "vqc");
                json curves_json = json::array();
                for (const explain::AleCurve& curve : curves) {
                    curves_json.push_back({{"feature", curve.feature},
                                           {"name", feature_name(curve.feature)},
                                           {"class", curve.cls},
                                           {"class_name", class_name(curve.cls)},
                                           {"edges", curve.edges},
                                           {"counts", curve.counts},
                                           {"mean_diffs", curve.mean_diffs},
                                           {"accumulated", curve.accumulated},
                                           {"centered", curve.centered}});
                    for (std::size_t k = 0; k < curve.edges.size(); ++k)
                        ale_csv << kind << ',' << curve.feature << ','
                                << feature_name(curve.feature) << ',' << curve.cls << ','
                                << class_name(curve.cls) << ',' << curve.edges[k] << ','
                                << curve.accumulated[k] << ',' << curve.centered[k] << '\n';
                }
                body["curves"] = std::move(curves_json);
                json importance_json = json::array();
                for (std::size_t j = 0; j < importance.size(); ++j) {
                    importance_json.push_back({{"feature", static_cast<int>(j)},
                                               {"name", feature_name(static_cast<int>(j))},
                                               {"importance", importance[j]}});
                    ale_imp_csv << kind << ',' << j << ',' << feature_name(static_cast<int>(j))
                                << ',' << importance[j] << '\n';
                }
                body["importance"] = std::move(importance_json);
                write_report(out_dir, "ale_" + kind + ".json", body);
                record_stage("ale." + kind, "ok", timer.seconds());
            } catch (const std::exception& e) {
                record_stage("ale." + kind, "error", timer.seconds(), e.what());
            }
        }

        {
            StageTimer timer;
            try {
                const Matrix background =
                    subsample_rows(train_X_, static_cast<std::size_t>(
                                                 config_.explain.shap_background),
                                   config_.shap_background_seed());
                const explain::ShapGlobal report =
                    explain::shap_global(*model, test_X_, background, workers);
                json body = report_header(kind);
                body["extension"] = (kind == "vqc");
                body["background"] = {{"size", background.rows()},
                                      {"seed", config_.shap_background_seed()},
                                      {"source", "train"}};
                json samples = json::array();
                for (std::size_t i = 0; i < report.per_sample.size(); ++i) {
                    const explain::ShapExplanation& e = report.per_sample[i];
                    json phi = json::array();
                    for (std::size_t c = 0; c < e.phi.rows(); ++c) {
                        json row = json::array();
                        for (std::size_t j = 0; j < e.phi.cols(); ++j) {
                            row.push_back(e.phi.at(c, j));
                            shap_csv << kind << ',' << i << ',' << c << ','
                                     << class_name(static_cast<int>(c)) << ',' << j << ','
                                     << feature_name(static_cast<int>(j)) << ','
                                     << e.phi.at(c, j) << '\n';
                        }
                        phi.push_back(std::move(row));
                    }
                    samples.push_back({{"test_index", static_cast<int>(i)},
                                       {"x", e.x},
                                       {"base_values", e.base_values},
                                       {"prediction", e.prediction},
                                       {"phi", std::move(phi)}});
                }
                body["per_sample"] = std::move(samples);
                json global;
                json mean_abs = json::array();
                for (std::size_t c = 0; c < report.mean_abs_phi.rows(); ++c) {
                    json row = json::array();
                    for (std::size_t j = 0; j < report.mean_abs_phi.cols(); ++j) {
                        row.push_back(report.mean_abs_phi.at(c, j));
                        shap_global_csv << kind << ',' << c << ','
                                        << class_name(static_cast<int>(c)) << ',' << j << ','
                                        << feature_name(static_cast<int>(j)) << ','
                                        << report.mean_abs_phi.at(c, j) << '\n';
                    }
                    mean_abs.push_back(std::move(row));
                }
                global["mean_abs_phi"] = std::move(mean_abs);
                global["pooled"] = report.pooled;
                body["global"] = std::move(global);
                write_report(out_dir, "shap_" + kind + ".json", body);
                record_stage("shap." + kind, "ok", timer.seconds());
            } catch (const std::exception& e) {
                record_stage("shap." + kind, "error", timer.seconds(), e.what());
            }
        }
    }
}

void Experiment::write_kernel_csvs(const std::string& out_dir) {
    if (!prepared_) prepare();
    fs::create_directories(out_dir);
    encode::FeatureMapSpec spec;
    spec.num_features = static_cast<int>(train_X_.cols());
    spec.reps = config_.qsvc.featuremap_reps;
    spec.entanglement = config_.qsvc.featuremap_entanglement;
    const int workers = config_.effective_workers();
    {
        const qkernel::KernelMatrix gram = qkernel::kernel_matrix(spec, train_X_, workers);
        std::ofstream out(fs::path(out_dir) / "gram_train.csv", std::ios::binary);
        qkernel::write_csv(gram, out);
    }
    {
        const qkernel::KernelMatrix block =
            qkernel::kernel_matrix(spec, test_X_, train_X_, workers);
        std::ofstream out(fs::path(out_dir) / "gram_test_train.csv", std::ios::binary);
        qkernel::write_csv(block, out);
    }
}

void Experiment::run_grid_search(const std::string& out_dir) {
    if (!prepared_) prepare();
    fs::create_directories(out_dir);
    vqc::VqcConfig base;
    base.feature_map.num_features = static_cast<int>(train_X_.cols());
    base.feature_map.reps = config_.vqc.featuremap_reps;
    base.feature_map.entanglement = config_.vqc.featuremap_entanglement;
    base.ansatz.num_qubits = static_cast<int>(train_X_.cols());
    base.ansatz.entanglement = config_.vqc.entanglement;
    base.optimizer = config_.vqc.optimizer;
    base.num_classes = dataset_.num_classes();
    base.seed = config_.vqc_seed();
    const std::vector<int> reps_grid = {1, 2, 3, 4};
    const std::vector<vqc::GridSearchRow> rows =
        vqc::grid_search(train_X_, train_y_, test_X_, test_y_, base, reps_grid);
    std::ofstream out(fs::path(out_dir) / "gridsearch.csv", std::ios::binary);
    vqc::write_grid_csv(rows, out);
}

void Experiment::write_manifest(const std::string& out_dir) const {
    fs::create_directories(out_dir);
    json manifest;
    manifest["version"] = kVersion;
    manifest["config"] = config_to_json(config_);
    manifest["config_hash"] = config_hash(config_);
    manifest["seeds"] = {{"master", config_.seed},
                         {"split", config_.split_seed()},
                         {"rf", config_.rf_seed()},
                         {"vqc", config_.vqc_seed()},
                         {"permutation", config_.permutation_seed()},
                         {"shap_background", config_.shap_background_seed()},
                         {"bootstrap", config_.bootstrap_seed()}};
    manifest["data"] = {{"path", dataset_.source_path},
                        {"content_hash", dataset_.content_hash},
                        {"samples", dataset_.num_samples()},
                        {"features", dataset_.feature_names},
                        {"classes", dataset_.class_names}};
    manifest["split"] = {{"train_size", split_.train.size()}, {"test_size", split_.test.size()}};
    json skipped = json::array();
    for (const char* kind : {"svc", "qsvc", "rf", "vqc"})
        if (std::find(config_.models.begin(), config_.models.end(), kind) == config_.models.end())
            skipped.push_back(kind);
    manifest["skipped_models"] = std::move(skipped);
    manifest["stages"] = stages_;
    std::ofstream out(fs::path(out_dir) / "manifest.json", std::ios::binary);
    out << manifest.dump(2) << '\n';
}

void Experiment::run_all(const std::string& out_dir) {
    fs::create_directories(out_dir);
    {
        StageTimer timer;
        prepare();
        record_stage("prepare", "ok", timer.seconds());
    }
    train_models();
    save_models(out_dir);
    write_split(out_dir);
    evaluate_models(out_dir);
    explain_models(out_dir);
    write_manifest(out_dir);
}

}  // namespace qmlx::pipeline
