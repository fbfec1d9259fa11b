#pragma once

#include <string>

#include <json.hpp>

#include "qmlx/classifier.hpp"
#include "qmlx/forest.hpp"
#include "qmlx/svm.hpp"
#include "qmlx/vqc.hpp"

namespace qmlx::model_io {

/// Versioned JSON documents for trained models, round-trippable so that
/// explanation runs can reuse earlier training output.
nlohmann::json to_json(const cml::SvcModel& model);
nlohmann::json to_json(const cml::QsvcModel& model);
nlohmann::json to_json(const cml::ForestModel& model);
nlohmann::json to_json(const vqc::VqcModel& model);

/// Dispatches on the document's "kind".
cml::ClassifierPtr from_json(const nlohmann::json& doc);

void save_model(const nlohmann::json& doc, const std::string& path);
cml::ClassifierPtr load_model(const std::string& path);

}  // namespace qmlx::model_io
