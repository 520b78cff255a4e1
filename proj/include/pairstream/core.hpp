#pragma once

#include <cstddef>
#include <cstdint>
#include <string>
#include <vector>

namespace pairstream {

// Stream element z = (x, y). Labels are restricted to {-1, +1} for the
// classification tasks; ingestion enforces this.
struct LabeledPoint {
    std::vector<double> features;
    double label = 0.0;
};

enum class TaskKind { AucLinear, MetricMahalanobis };

// Flat real weight vector: length d for the linear AUC scorer, length d*d
// (row-major) for the Mahalanobis metric task.
struct Hypothesis {
    std::vector<double> weights;
    TaskKind task = TaskKind::AucLinear;
};

// Deterministic counter-based generator (splitmix64). Every stochastic
// operation in the library draws from a RandomSource in a documented, fixed
// order, so equal seeds give bit-identical results on any platform.
//
// Draw mappings (each mapping states how many raw u64 draws it consumes):
//   next_u64()      one draw: state += 0x9E3779B97F4A7C15, output = mix(state)
//   next_real()     one draw: (next_u64() >> 11) * 2^-53, uniform in [0, 1)
//   next_bounded(n) unbiased rejection sampling; one draw except with
//                   probability < n / 2^64 per extra draw
//   bernoulli(p)    one draw: next_real() < p
//   normal()        two draws: Box-Muller, cosine branch (the rare
//                   next_real() == 0 is redrawn)
//   child(i)        no draws; an independent source seeded from (seed, i)
class RandomSource {
public:
    explicit RandomSource(std::uint64_t seed) : seed_(seed), state_(seed) {}

    std::uint64_t seed() const { return seed_; }

    // Number of raw u64 draws consumed so far.
    std::uint64_t draw_count() const { return draws_; }

    std::uint64_t next_u64() {
        ++draws_;
        std::uint64_t z = (state_ += 0x9E3779B97F4A7C15ULL);
        z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
        z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
        return z ^ (z >> 31);
    }

    double next_real() { return static_cast<double>(next_u64() >> 11) * 0x1.0p-53; }

    // Uniform integer in [0, n). Unbiased via rejection below 2^64 mod n.
    std::uint64_t next_bounded(std::uint64_t n);

    bool bernoulli(double p) { return next_real() < p; }

    // Standard normal deviate.
    double normal();

    // Independent child source for trial/component `index`, derived from the
    // original seed only (never from the current state).
    RandomSource child(std::uint64_t index) const;

private:
    std::uint64_t seed_;
    std::uint64_t state_;
    std::uint64_t draws_ = 0;
};

struct Dataset {
    std::vector<LabeledPoint> points;
    std::size_t dimension = 0;
    std::string name;

    std::size_t size() const { return points.size(); }
    bool empty() const { return points.empty(); }
};

// Shuffles the dataset into a stream order with a Fisher-Yates pass:
// for i = n-1 down to 1, j = rng.next_bounded(i + 1), swap points i and j.
// Throws std::invalid_argument("empty dataset") on an empty input.
std::vector<LabeledPoint> make_stream(const Dataset& dataset, RandomSource& rng);

}  // namespace pairstream
