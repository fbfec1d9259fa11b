#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "qmlx/common.hpp"

namespace qmlx::pipeline {

/// Tabular dataset: feature matrix, dense integer labels, names, and the
/// provenance of the file it was read from.
struct Dataset {
    Matrix X;
    std::vector<int> y;
    std::vector<std::string> feature_names;
    std::vector<std::string> class_names;
    std::string source_path;
    std::string content_hash;  // fnv1a64 of the raw file bytes

    std::size_t num_samples() const { return X.rows(); }
    std::size_t num_features() const { return X.cols(); }
    int num_classes() const { return static_cast<int>(class_names.size()); }
};

/// FNV-1a 64-bit hex digest.
std::string fnv1a_hex(const std::string& bytes);

/// Headered CSV with numeric feature columns and a trailing label column.
/// The iris species names map to fixed labels (setosa 0, versicolor 1,
/// virginica 2); any other label set is numbered by sorted name. Missing or
/// non-numeric cells are rejected with their row and column.
Dataset load_csv(const std::string& path);

/// Per-feature min/max learned from training rows only.
struct ScalerModel {
    std::vector<double> min;
    std::vector<double> max;
};

ScalerModel minmax_fit(const Matrix& X_train);

/// (x - min) / (max - min), clamped to [0, 1] so out-of-range test values
/// stay inside the encoders' angle domain.
Matrix minmax_transform(const ScalerModel& scaler, const Matrix& X);

enum class SplitMode { Stratified, Shuffle };

const char* split_mode_name(SplitMode mode);
SplitMode parse_split_mode(const std::string& name);

struct SplitIndices {
    std::vector<int> train;
    std::vector<int> test;
};

/// Deterministic train/test split. Stratified keeps per-class proportions to
/// within rounding; Shuffle permutes all rows and cuts (reproduces plain
/// random splits).
SplitIndices split_dataset(const Dataset& dataset, double test_fraction, SplitMode mode,
                           std::uint64_t seed);

std::vector<int> select_labels(const std::vector<int>& y, std::span<const int> indices);

}  // namespace qmlx::pipeline
