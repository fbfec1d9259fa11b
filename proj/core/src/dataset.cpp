#include "qmlx/dataset.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>

#include "qmlx/rng.hpp"

namespace qmlx::pipeline {

std::string fnv1a_hex(const std::string& bytes) {
    std::uint64_t h = 1469598103934665603ull;
    for (unsigned char c : bytes) {
        h ^= c;
        h *= 1099511628211ull;
    }
    char buf[17];
    std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
    return buf;
}

namespace {

std::vector<std::string> split_line(const std::string& line) {
    std::vector<std::string> cells;
    std::string cell;
    std::stringstream ss(line);
    while (std::getline(ss, cell, ',')) {
        // trim
        const auto begin = cell.find_first_not_of(" \t\r");
        const auto end = cell.find_last_not_of(" \t\r");
        cells.push_back(begin == std::string::npos ? "" : cell.substr(begin, end - begin + 1));
    }
    if (!line.empty() && line.back() == ',') cells.push_back("");
    return cells;
}

}  // namespace

Dataset load_csv(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw std::runtime_error("cannot open dataset file: " + path);
    std::stringstream buffer;
    buffer << in.rdbuf();
    const std::string bytes = buffer.str();

    Dataset ds;
    ds.source_path = path;
    ds.content_hash = fnv1a_hex(bytes);

    std::stringstream lines(bytes);
    std::string line;
    if (!std::getline(lines, line)) throw std::runtime_error("empty dataset file: " + path);
    const std::vector<std::string> header = split_line(line);
    if (header.size() < 2)
        throw std::runtime_error("dataset header needs at least one feature and a label column");
    const std::size_t p = header.size() - 1;
    ds.feature_names.assign(header.begin(), header.end() - 1);

    std::vector<std::vector<double>> rows;
    std::vector<std::string> labels;
    std::size_t line_no = 1;
    while (std::getline(lines, line)) {
        ++line_no;
        if (line.empty() || line == "\r") continue;
        const std::vector<std::string> cells = split_line(line);
        if (cells.size() != header.size())
            throw std::runtime_error("row " + std::to_string(line_no) + " has " +
                                     std::to_string(cells.size()) + " cells, expected " +
                                     std::to_string(header.size()));
        std::vector<double> row(p);
        for (std::size_t c = 0; c < p; ++c) {
            if (cells[c].empty())
                throw std::runtime_error("missing value at row " + std::to_string(line_no) +
                                         ", column '" + header[c] + "'");
            std::size_t consumed = 0;
            double v = 0.0;
            try {
                v = std::stod(cells[c], &consumed);
            } catch (const std::exception&) {
                consumed = 0;
            }
            if (consumed != cells[c].size() || !std::isfinite(v))
                throw std::runtime_error("bad numeric value '" + cells[c] + "' at row " +
                                         std::to_string(line_no) + ", column '" + header[c] +
                                         "'");
            row[c] = v;
        }
        if (cells.back().empty())
            throw std::runtime_error("missing label at row " + std::to_string(line_no));
        rows.push_back(std::move(row));
        labels.push_back(cells.back());
    }
    if (rows.empty()) throw std::runtime_error("dataset has a header but no rows: " + path);

    // Iris species keep their conventional labels; other label sets are
    // numbered by sorted name. A file that mixes species names with anything
    // else is treated as a typo, not a new class.
    static const std::map<std::string, int> iris = {
        {"setosa", 0}, {"versicolor", 1}, {"virginica", 2},
        {"Iris-setosa", 0}, {"Iris-versicolor", 1}, {"Iris-virginica", 2}};
    const std::size_t iris_count = static_cast<std::size_t>(
        std::count_if(labels.begin(), labels.end(),
                      [&](const std::string& l) { return iris.count(l) > 0; }));
    const bool all_iris = iris_count == labels.size();
    if (!all_iris && iris_count > 0) {
        const auto bad = std::find_if(labels.begin(), labels.end(),
                                      [&](const std::string& l) { return iris.count(l) == 0; });
        throw std::runtime_error("unknown class label '" + *bad + "' among iris species");
    }
    std::map<std::string, int> label_map;
    if (all_iris) {
        ds.class_names = {"setosa", "versicolor", "virginica"};
        for (const auto& [name, id] : iris) label_map[name] = id;
    } else {
        std::vector<std::string> unique = labels;
        std::sort(unique.begin(), unique.end());
        unique.erase(std::unique(unique.begin(), unique.end()), unique.end());
        for (std::size_t i = 0; i < unique.size(); ++i)
            label_map[unique[i]] = static_cast<int>(i);
        ds.class_names = unique;
    }

    ds.X = Matrix(rows.size(), p);
    ds.y.resize(rows.size());
    for (std::size_t r = 0; r < rows.size(); ++r) {
        for (std::size_t c = 0; c < p; ++c) ds.X.at(r, c) = rows[r][c];
        const auto it = label_map.find(labels[r]);
        if (it == label_map.end())
            throw std::runtime_error("unknown class label '" + labels[r] + "'");
        ds.y[r] = it->second;
    }
    return ds;
}

ScalerModel minmax_fit(const Matrix& X_train) {
    if (X_train.rows() == 0) throw std::invalid_argument("minmax_fit: empty training data");
    ScalerModel scaler;
    scaler.min.resize(X_train.cols());
    scaler.max.resize(X_train.cols());
    for (std::size_t c = 0; c < X_train.cols(); ++c) {
        double lo = X_train.at(0, c), hi = X_train.at(0, c);
        for (std::size_t r = 1; r < X_train.rows(); ++r) {
            lo = std::min(lo, X_train.at(r, c));
            hi = std::max(hi, X_train.at(r, c));
        }
        if (!(hi > lo))
            throw std::invalid_argument("minmax_fit: training column " + std::to_string(c) +
                                        " is constant");
        scaler.min[c] = lo;
        scaler.max[c] = hi;
    }
    return scaler;
}

Matrix minmax_transform(const ScalerModel& scaler, const Matrix& X) {
    if (X.cols() != scaler.min.size())
        throw std::invalid_argument("minmax_transform: feature arity mismatch");
    Matrix out(X.rows(), X.cols());
    for (std::size_t r = 0; r < X.rows(); ++r)
        for (std::size_t c = 0; c < X.cols(); ++c) {
            const double v = (X.at(r, c) - scaler.min[c]) / (scaler.max[c] - scaler.min[c]);
            out.at(r, c) = std::clamp(v, 0.0, 1.0);
        }
    return out;
}

const char* split_mode_name(SplitMode mode) {
    return mode == SplitMode::Stratified ? "stratified" : "shuffle";
}

SplitMode parse_split_mode(const std::string& name) {
    if (name == "stratified") return SplitMode::Stratified;
    if (name == "shuffle") return SplitMode::Shuffle;
    throw std::invalid_argument("unknown split mode '" + name + "' (stratified|shuffle)");
}

SplitIndices split_dataset(const Dataset& dataset, double test_fraction, SplitMode mode,
                           std::uint64_t seed) {
    if (!(test_fraction > 0.0 && test_fraction < 1.0))
        throw std::invalid_argument("test_fraction must be in (0, 1)");
    const std::size_t n = dataset.num_samples();

    SplitIndices split;
    if (mode == SplitMode::Shuffle) {
        std::vector<int> order(n);
        for (std::size_t i = 0; i < n; ++i) order[i] = static_cast<int>(i);
        Rng rng(seed);
        rng.shuffle(order);
        const std::size_t test_count = static_cast<std::size_t>(
            std::lround(test_fraction * static_cast<double>(n)));
        split.test.assign(order.begin(), order.begin() + static_cast<std::ptrdiff_t>(test_count));
        split.train.assign(order.begin() + static_cast<std::ptrdiff_t>(test_count), order.end());
    } else {
        std::vector<std::vector<int>> by_class(static_cast<std::size_t>(dataset.num_classes()));
        for (std::size_t i = 0; i < n; ++i)
            by_class[static_cast<std::size_t>(dataset.y[i])].push_back(static_cast<int>(i));
        for (std::size_t c = 0; c < by_class.size(); ++c) {
            auto& members = by_class[c];
            if (members.size() < 2)
                throw std::invalid_argument("stratified split needs >= 2 samples per class");
            Rng rng(derive_seed(seed, c));
            rng.shuffle(members);
            const std::size_t test_count = static_cast<std::size_t>(
                std::lround(test_fraction * static_cast<double>(members.size())));
            for (std::size_t i = 0; i < members.size(); ++i)
                (i < test_count ? split.test : split.train).push_back(members[i]);
        }
        std::sort(split.train.begin(), split.train.end());
        std::sort(split.test.begin(), split.test.end());
    }
    return split;
}

std::vector<int> select_labels(const std::vector<int>& y, std::span<const int> indices) {
    std::vector<int> out(indices.size());
    for (std::size_t i = 0; i < indices.size(); ++i)
        out[i] = y[static_cast<std::size_t>(indices[i])];
    return out;
}

}  // namespace qmlx::pipeline
