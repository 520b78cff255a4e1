#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "pairstream/sampling.hpp"

namespace pairstream {

// Total variation distance between two probability vectors of equal length.
double tv_distance(std::span<const double> p, std::span<const double> q);

// Upper tail probability of the chi-square distribution with `dof` degrees
// of freedom, via the regularized incomplete gamma function.
double chi_square_pvalue(double statistic, std::size_t dof);

// Pearson statistic of `counts` against a uniform expectation.
double chi_square_uniform_statistic(std::span<const std::uint64_t> counts);

struct SlotHistogram {
    std::size_t capacity = 0;
    std::size_t updates = 0;  // points fed; final buffer covers indices 1..updates
    std::size_t trials = 0;
    // counts[slot][stream_index - 1] over the final buffer state of each trial.
    std::vector<std::vector<std::uint64_t>> counts;
};

// Feeds `updates` synthetic points through a fresh buffer per trial (trial i
// uses RandomSource(seed).child(i)) and tallies the final slot contents.
// Policies only ever see step indices, so the point payload is irrelevant.
SlotHistogram simulate_slot_histogram(Policy policy, std::size_t capacity, std::size_t updates,
                                      std::size_t trials, std::uint64_t seed);

// Joint occupancy counts for a capacity-2 buffer: joint[i][j] counts final
// states with slot 0 = z_{i+1} and slot 1 = z_{j+1}.
std::vector<std::vector<std::uint64_t>> simulate_joint_histogram(Policy policy,
                                                                 std::size_t updates,
                                                                 std::size_t trials,
                                                                 std::uint64_t seed);

// Empirical distribution over replacement patterns (bitmask over slots) at
// the first normal update step: prefix fill plus repopulation, then one
// recorded update at t = capacity + 2.
std::vector<double> simulate_pattern_distribution(Policy policy, std::size_t capacity,
                                                  std::size_t trials, std::uint64_t seed);

struct DistTestResult {
    std::string name;
    double statistic = 0.0;
    double threshold = 0.0;
    bool pass = false;
};

// Per-slot chi-square goodness of fit against the uniform law over the seen
// prefix; pass means p-value >= significance for every slot.
std::vector<DistTestResult> marginal_uniformity_tests(const SlotHistogram& hist,
                                                      double significance);

// TV distance of the slot-aggregated occupancy distribution from uniform.
DistTestResult aggregate_marginal_test(const SlotHistogram& hist, double tv_threshold);

// TV distance between the capacity-2 joint distribution and the product of
// its marginals.
DistTestResult joint_independence_test(Policy policy, std::size_t updates, std::size_t trials,
                                       std::uint64_t seed, double tv_threshold);

// Largest absolute deviation of a pattern distribution from the closed-form
// law (1/t)^k (1-1/t)^(s-k) at t = capacity + 2.
DistTestResult pattern_law_test(std::span<const double> empirical, std::size_t capacity,
                                double abs_threshold);

// TV distance between two empirical pattern distributions.
DistTestResult pattern_agreement_test(std::span<const double> a, std::span<const double> b,
                                      double tv_threshold);

// FIFO sanity: final slots must be exactly the last min(s, updates) stream
// indices in order.
DistTestResult fifo_content_test(std::size_t capacity, std::size_t updates, std::uint64_t seed);

}  // namespace pairstream
