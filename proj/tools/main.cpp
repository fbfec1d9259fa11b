// qmlx: train classical and quantum-simulated classifiers on tabular data
// and explain them with LOO, permutation importance, ALE and exact SHAP.

#include <cstdio>
#include <exception>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "qmlx/experiment.hpp"

namespace {

using qmlx::pipeline::Dataset;
using qmlx::pipeline::Experiment;
using qmlx::pipeline::ExperimentConfig;

struct GlobalArgs {
    std::string data = "data/iris.csv";
    std::string config_path;
    std::string out = "out";
    std::optional<std::uint64_t> seed;
    std::optional<std::string> models;
    std::optional<int> workers;
    std::optional<std::string> split_mode;
};

ExperimentConfig build_config(const GlobalArgs& args) {
    nlohmann::json doc = nlohmann::json::object();
    if (!args.config_path.empty()) {
        std::ifstream in(args.config_path, std::ios::binary);
        if (!in) throw std::runtime_error("cannot open config file: " + args.config_path);
        in >> doc;
    }
    ExperimentConfig config = qmlx::pipeline::config_from_json(doc);
    if (args.seed) config.seed = *args.seed;
    if (args.workers) config.workers = *args.workers;
    if (args.split_mode) config.split.mode = qmlx::pipeline::parse_split_mode(*args.split_mode);
    if (args.models) {
        config.models.clear();
        std::stringstream ss(*args.models);
        std::string kind;
        while (std::getline(ss, kind, ',')) {
            if (!kind.empty()) config.models.push_back(kind);
        }
    }
    return config;
}

Experiment make_experiment(const GlobalArgs& args) {
    return Experiment(build_config(args), qmlx::pipeline::load_csv(args.data));
}

void add_global_options(CLI::App* cmd, GlobalArgs& args) {
    cmd->add_option("--data", args.data, "dataset CSV (features + label column)")
        ->capture_default_str();
    cmd->add_option("--config", args.config_path, "JSON config file");
    cmd->add_option("--out", args.out, "output directory")->capture_default_str();
    cmd->add_option("--seed", args.seed, "master seed");
    cmd->add_option("--models", args.models, "comma-separated subset of svc,qsvc,rf,vqc");
    cmd->add_option("--workers", args.workers, "worker threads (0 = auto)");
    cmd->add_option("--split", args.split_mode, "split mode: stratified|shuffle");
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"classical vs quantum-simulated classifiers with explainability reports"};
    app.require_subcommand(1);

    GlobalArgs args;

    CLI::App* train = app.add_subcommand("train", "train the selected models and save them");
    CLI::App* evaluate =
        app.add_subcommand("evaluate", "classification report + bootstrap for saved models");
    CLI::App* explain =
        app.add_subcommand("explain", "LOO, permutation, ALE and SHAP reports for saved models");
    CLI::App* kernel =
        app.add_subcommand("kernel", "export the fidelity quantum kernel Gram matrices as CSV");
    CLI::App* gridsearch =
        app.add_subcommand("gridsearch", "VQC ansatz/reps grid search, ranked CSV");
    CLI::App* run_all = app.add_subcommand("run-all", "full pipeline: train, evaluate, explain");
    for (CLI::App* cmd : {train, evaluate, explain, kernel, gridsearch, run_all})
        add_global_options(cmd, args);

    CLI11_PARSE(app, argc, argv);

    try {
        if (train->parsed()) {
            Experiment experiment = make_experiment(args);
            experiment.prepare();
            experiment.train_models();
            experiment.save_models(args.out);
            experiment.write_split(args.out);
            experiment.write_manifest(args.out);
            std::cout << "trained models written to " << args.out << "/models\n";
        } else if (evaluate->parsed()) {
            Experiment experiment = make_experiment(args);
            experiment.load_models(args.out);
            experiment.evaluate_models(args.out);
            experiment.write_manifest(args.out);
            std::cout << "evaluation reports written to " << args.out << "/reports\n";
        } else if (explain->parsed()) {
            Experiment experiment = make_experiment(args);
            experiment.load_models(args.out);
            experiment.explain_models(args.out);
            experiment.write_manifest(args.out);
            std::cout << "explanation reports written to " << args.out << "/reports\n";
        } else if (kernel->parsed()) {
            Experiment experiment = make_experiment(args);
            experiment.write_kernel_csvs(args.out);
            std::cout << "Gram matrices written to " << args.out << "\n";
        } else if (gridsearch->parsed()) {
            Experiment experiment = make_experiment(args);
            experiment.run_grid_search(args.out);
            std::cout << "grid search table written to " << args.out << "/gridsearch.csv\n";
        } else if (run_all->parsed()) {
            Experiment experiment = make_experiment(args);
            experiment.run_all(args.out);
            std::cout << "experiment written to " << args.out << "\n";
        }
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
    return 0;
}
