#pragma once

#include <cstdint>
#include <iosfwd>
#include <string>
#include <utility>
#include <vector>

#include "pairstream/core.hpp"

namespace pairstream {

struct SplitSpec {
    double train_fraction = 0.6;
    std::size_t train_cap = 20000;
    std::uint64_t seed = 0;
};

// One-vs-rest binarization for multi-class files: raw labels listed here
// map to +1, everything else to -1.
struct LabelMapping {
    std::vector<double> positive_labels;
    bool empty() const { return positive_labels.empty(); }
};

// Parses LIBSVM sparse text: `<label> <index>:<value> ...` per line, 1-based
// strictly ascending indices, `#` starts a comment. Without a mapping,
// labels > 0 become +1 and labels <= 0 become -1; files with more than two
// distinct raw labels are rejected. Dimension is the largest index seen.
// Errors carry the offending line number.
Dataset parse_libsvm(std::istream& in, const std::string& name = "",
                     const LabelMapping& mapping = {});
Dataset parse_libsvm_file(const std::string& path, const LabelMapping& mapping = {});

// Sparse text form of the dataset (zeros omitted, round-trip exact).
void write_libsvm(const Dataset& dataset, std::ostream& out);

// Shuffled split: train takes min(floor(fraction*m), cap) points of a
// Fisher-Yates permutation, test takes the rest. Throws if either side
// would be empty.
std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec,
                                  RandomSource& rng);
std::pair<Dataset, Dataset> split(const Dataset& dataset, const SplitSpec& spec);

// Two spherical Gaussians at +/- (separation/2) along the first axis.
// Positives are drawn first, one point at a time, coordinates in order,
// each coordinate one normal() call.
Dataset synth_gaussian(std::size_t n_pos, std::size_t n_neg, std::size_t d, double separation,
                       RandomSource& rng);

enum class NormalizeMode { UnitL2, None };

NormalizeMode normalize_mode_from_string(const std::string& name);

// UnitL2 rescales every nonzero point to unit Euclidean norm.
Dataset normalize_features(Dataset dataset, NormalizeMode mode);

double max_feature_norm(const Dataset& dataset);

}  // namespace pairstream
