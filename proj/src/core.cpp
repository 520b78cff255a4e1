#include "pairstream/core.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pairstream {

std::uint64_t RandomSource::next_bounded(std::uint64_t n) {
    if (n == 0) throw std::invalid_argument("next_bounded: n must be positive");
    const std::uint64_t threshold = (0 - n) % n;  // 2^64 mod n
    std::uint64_t x = next_u64();
    while (x < threshold) x = next_u64();
    return x % n;
}

double RandomSource::normal() {
    double u1 = next_real();
    while (u1 == 0.0) u1 = next_real();
    const double u2 = next_real();
    return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * std::numbers::pi * u2);
}

RandomSource RandomSource::child(std::uint64_t index) const {
    // One splitmix64 step over (seed ^ golden * (index + 1)) keeps children
    // decorrelated from the parent stream and from each other.
    std::uint64_t z = seed_ ^ (0x9E3779B97F4A7C15ULL * (index + 1));
    z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
    z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
    return RandomSource(z ^ (z >> 31));
}

std::vector<LabeledPoint> make_stream(const Dataset& dataset, RandomSource& rng) {
    if (dataset.empty()) throw std::invalid_argument("empty dataset");
    std::vector<LabeledPoint> stream = dataset.points;
    for (std::size_t i = stream.size() - 1; i > 0; --i) {
        const std::uint64_t j = rng.next_bounded(i + 1);
        std::swap(stream[i], stream[j]);
    }
    return stream;
}

}  // namespace pairstream
