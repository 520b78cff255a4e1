#include "pairstream/data.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>
#include <stdexcept>

namespace pairstream {

namespace {

[[noreturn]] void parse_fail(std::size_t line, const std::string& what) {
    throw std::runtime_error("line " + std::to_string(line) + ": " + what);
}

double parse_double(const std::string& token, std::size_t line, const std::string& what) {
    double value = 0.0;
    const char* begin = token.data();
    const char* end = begin + token.size();
    if (begin != end && *begin == '+') ++begin;  // from_chars rejects a leading plus
    if (begin == end) parse_fail(line, what + " '" + token + "'");
    const auto [ptr, ec] = std::from_chars(begin, end, value);
    if (ec != std::errc() || ptr != end) parse_fail(line, what + " '" + token + "'");
    return value;
}

struct SparseRow {
    double raw_label = 0.0;
    std::vector<std::pair<std::size_t, double>> entries;
};

}  // namespace

Dataset parse_libsvm(std::istream& in, const std::string& name, const LabelMapping& mapping) {
    std::vector<SparseRow> rows;
    std::set<double> raw_labels;
    std::size_t dimension = 0;
    std::string line;
    std::size_t line_no = 0;

    while (std::getline(in, line)) {
        ++line_no;
        if (const auto hash = line.find('#'); hash != std::string::npos) line.resize(hash);
        std::istringstream tokens(line);
        std::string token;
        if (!(tokens >> token)) continue;  // blank line

        SparseRow row;
        row.raw_label = parse_double(token, line_no, "non-numeric label");
        raw_labels.insert(row.raw_label);

        std::size_t last_index = 0;
        while (tokens >> token) {
            const auto colon = token.find(':');
            if (colon == std::string::npos || colon == 0 || colon + 1 == token.size())
                parse_fail(line_no, "malformed feature token '" + token + "'");
            const double index_value =
                parse_double(token.substr(0, colon), line_no, "malformed feature index");
            if (index_value < 1.0 || index_value != std::floor(index_value))
                parse_fail(line_no, "feature index must be a positive integer");
            const auto index = static_cast<std::size_t>(index_value);
            if (index <= last_index) parse_fail(line_no, "feature indices must be ascending");
            last_index = index;
            const double value =
                parse_double(token.substr(colon + 1), line_no, "malformed feature value");
            if (!std::isfinite(value)) parse_fail(line_no, "non-finite feature value");
            row.entries.emplace_back(index, value);
            dimension = std::max(dimension, index);
        }
        rows.push_back(std::move(row));
    }

    if (rows.empty()) throw std::runtime_error("empty dataset");
    if (mapping.empty() && raw_labels.size() > 2)
        throw std::runtime_error("multi-class labels require a label mapping");

    Dataset dataset;
    dataset.name = name;
    dataset.dimension = dimension;
    dataset.points.reserve(rows.size());
    for (const auto& row : rows) {
        LabeledPoint point;
        if (mapping.empty()) {
            point.label = row.raw_label > 0.0 ? 1.0 : -1.0;
        } else {
            const bool positive =
                std::find(mapping.positive_labels.begin(), mapping.positive_labels.end(),
                          row.raw_label) != mapping.positive_labels.end();
            point.label = positive ? 1.0 : -1.0;
        }
        point.features.assign(dimension, 0.0);
        for (const auto& [index, value] : row.entries) point.features[index - 1] = value;
        dataset.points.push_back(std::move(point));
    }
    return dataset;
}

Dataset parse_libsvm_file(const std::string& path, const LabelMapping& mapping) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("cannot open " + path);
    std::string name = path;
    if (const auto slash = name.find_last_of('/'); slash != std::string::npos)
        name = name.substr(slash + 1);
    return parse_libsvm(in, name, mapping);
}

void write_libsvm(const Dataset& dataset, std::ostream& out) {
    char buf[64];
    for (const auto& point : dataset.points) {
        out << (point.label > 0 ? "+1" : "-1");
        for (std::size_t i = 0; i < point.features.size(); ++i) {
            if (point.features[i] == 0.0) continue;
            const auto [ptr, ec] =
                std::to_chars(buf, buf + sizeof(buf), point.features[i]);
            out << ' ' << i + 1 << ':' << std::string_view(buf, ptr - buf);
            (void)ec;
        }
        out << '\n';
    }
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec,
                                  RandomSource& rng) {
    const std::size_t m = dataset.size();
    if (m < 2) throw std::invalid_argument("split needs at least 2 points");
    if (spec.train_fraction <= 0.0 || spec.train_fraction > 1.0)
        throw std::invalid_argument("train fraction must be in (0,1]");
    if (spec.train_cap == 0) throw std::invalid_argument("train cap must be positive");

    const std::size_t train_size = std::min(
        static_cast<std::size_t>(std::floor(spec.train_fraction * static_cast<double>(m))),
        spec.train_cap);
    if (train_size == 0 || train_size == m) throw std::invalid_argument("split side is empty");

    std::vector<std::size_t> order(m);
    std::iota(order.begin(), order.end(), std::size_t{0});
    for (std::size_t i = m - 1; i > 0; --i)
        std::swap(order[i], order[rng.next_bounded(i + 1)]);

    Dataset train{.points = {}, .dimension = dataset.dimension, .name = dataset.name};
    Dataset test = train;
    train.points.reserve(train_size);
    test.points.reserve(m - train_size);
    for (std::size_t i = 0; i < m; ++i)
        (i < train_size ? train : test).points.push_back(dataset.points[order[i]]);
    return {std::move(train), std::move(test)};
}

std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec) {
    RandomSource rng(spec.seed);
    return split(dataset, spec, rng);
}

Dataset synth_gaussian(std::size_t n_pos, std::size_t n_neg, std::size_t d, double separation,
                       RandomSource& rng) {
    if (n_pos == 0 || n_neg == 0) throw std::invalid_argument("class counts must be positive");
    if (d == 0) throw std::invalid_argument("dimension must be positive");
    if (separation < 0.0) throw std::invalid_argument("separation must be nonnegative");

    Dataset dataset;
    dataset.dimension = d;
    dataset.name = "synth-gaussian";
    dataset.points.reserve(n_pos + n_neg);
    const double shift = separation / 2.0;
    for (std::size_t c = 0; c < 2; ++c) {
        const double label = c == 0 ? 1.0 : -1.0;
        const std::size_t count = c == 0 ? n_pos : n_neg;
        for (std::size_t i = 0; i < count; ++i) {
            LabeledPoint point;
            point.label = label;
            point.features.resize(d);
            for (std::size_t k = 0; k < d; ++k) point.features[k] = rng.normal();
            point.features[0] += label * shift;
            dataset.points.push_back(std::move(point));
        }
    }
    return dataset;
}

NormalizeMode normalize_mode_from_string(const std::string& name) {
    if (name == "unit-l2") return NormalizeMode::UnitL2;
    if (name == "none") return NormalizeMode::None;
    throw std::invalid_argument("unknown normalization mode: " + name);
}

Dataset normalize_features(Dataset dataset, NormalizeMode mode) {
    if (mode == NormalizeMode::None) return dataset;
    for (auto& point : dataset.points) {
        double sq = 0.0;
        for (double v : point.features) sq += v * v;
        if (sq == 0.0) continue;
        const double inv = 1.0 / std::sqrt(sq);
        for (double& v : point.features) v *= inv;
    }
    return dataset;
}

double max_feature_norm(const Dataset& dataset) {
    double worst = 0.0;
    for (const auto& point : dataset.points) {
        double sq = 0.0;
        for (double v : point.features) sq += v * v;
        worst = std::max(worst, sq);
    }
    return std::sqrt(worst);
}

}  // namespace pairstream
