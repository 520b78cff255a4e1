#include "pairstream/disttest.hpp"

#include <algorithm>
#include <bit>
#include <cmath>
#include <limits>
#include <stdexcept>

namespace pairstream {

double tv_distance(std::span<const double> p, std::span<const double> q) {
    if (p.size() != q.size()) throw std::invalid_argument("tv_distance: length mismatch");
    double acc = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) acc += std::abs(p[i] - q[i]);
    return 0.5 * acc;
}

namespace {

// Regularized lower incomplete gamma P(a, x); series for x < a+1, Lentz
// continued fraction otherwise.
double gamma_p(double a, double x) {
    if (x < 0.0 || a <= 0.0) throw std::invalid_argument("gamma_p: bad arguments");
    if (x == 0.0) return 0.0;
    const double lg = std::lgamma(a);
    if (x < a + 1.0) {
        double ap = a;
        double sum = 1.0 / a;
        double del = sum;
        for (int i = 0; i < 500; ++i) {
            ap += 1.0;
            del *= x / ap;
            sum += del;
            if (std::abs(del) < std::abs(sum) * 1e-16) break;
        }
        return sum * std::exp(-x + a * std::log(x) - lg);
    }
    const double tiny = 1e-300;
    double b = x + 1.0 - a;
    double c = 1.0 / tiny;
    double d = 1.0 / b;
    double h = d;
    for (int i = 1; i <= 500; ++i) {
        const double an = -static_cast<double>(i) * (static_cast<double>(i) - a);
        b += 2.0;
        d = an * d + b;
        if (std::abs(d) < tiny) d = tiny;
        c = b + an / c;
        if (std::abs(c) < tiny) c = tiny;
        d = 1.0 / d;
        const double delta = d * c;
        h *= delta;
        if (std::abs(delta - 1.0) < 1e-16) break;
    }
    const double q = std::exp(-x + a * std::log(x) - lg) * h;
    return 1.0 - q;
}

LabeledPoint dummy_point(std::size_t t) {
    return LabeledPoint{{static_cast<double>(t)}, 1.0};
}

}  // namespace

double chi_square_pvalue(double statistic, std::size_t dof) {
    if (dof == 0) throw std::invalid_argument("chi_square_pvalue: zero dof");
    if (statistic <= 0.0) return 1.0;
    return 1.0 - gamma_p(static_cast<double>(dof) / 2.0, statistic / 2.0);
}

double chi_square_uniform_statistic(std::span<const std::uint64_t> counts) {
    if (counts.empty()) throw std::invalid_argument("empty counts");
    double total = 0.0;
    for (auto c : counts) total += static_cast<double>(c);
    const double expected = total / static_cast<double>(counts.size());
    if (expected <= 0.0) return std::numeric_limits<double>::infinity();
    double stat = 0.0;
    for (auto c : counts) {
        const double diff = static_cast<double>(c) - expected;
        stat += diff * diff / expected;
    }
    return stat;
}

SlotHistogram simulate_slot_histogram(Policy policy, std::size_t capacity, std::size_t updates,
                                      std::size_t trials, std::uint64_t seed) {
    SlotHistogram hist;
    hist.capacity = capacity;
    hist.updates = updates;
    hist.trials = trials;
    const std::size_t slots = std::min(capacity, updates);
    hist.counts.assign(slots, std::vector<std::uint64_t>(updates, 0));
    RandomSource master(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        RandomSource rng = master.child(trial);
        Buffer buf(policy, capacity);
        for (std::size_t t = 1; t <= updates; ++t) buf.update(dummy_point(t), t, &rng);
        const auto& entries = buf.entries();
        for (std::size_t j = 0; j < entries.size(); ++j)
            ++hist.counts[j][entries[j].stream_index - 1];
    }
    return hist;
}

std::vector<std::vector<std::uint64_t>> simulate_joint_histogram(Policy policy,
                                                                 std::size_t updates,
                                                                 std::size_t trials,
                                                                 std::uint64_t seed) {
    std::vector<std::vector<std::uint64_t>> joint(updates,
                                                  std::vector<std::uint64_t>(updates, 0));
    RandomSource master(seed);
    for (std::size_t trial = 0; trial < trials; ++trial) {
        RandomSource rng = master.child(trial);
        Buffer buf(policy, 2);
        for (std::size_t t = 1; t <= updates; ++t) buf.update(dummy_point(t), t, &rng);
        ++joint[buf.entries()[0].stream_index - 1][buf.entries()[1].stream_index - 1];
    }
    return joint;
}

std::vector<double> simulate_pattern_distribution(Policy policy, std::size_t capacity,
                                                  std::size_t trials, std::uint64_t seed) {
    if (capacity >= 32) throw std::invalid_argument("pattern support too large");
    std::vector<std::uint64_t> counts(std::size_t{1} << capacity, 0);
    RandomSource master(seed);
    const std::size_t t_record = capacity + 2;  // first normal update step
    for (std::size_t trial = 0; trial < trials; ++trial) {
        RandomSource rng = master.child(trial);
        Buffer buf(policy, capacity);
        for (std::size_t t = 1; t < t_record; ++t) buf.update(dummy_point(t), t, &rng);
        const AuxRecord rec = buf.update(dummy_point(t_record), t_record, &rng);
        std::size_t mask = 0;
        for (std::size_t slot : rec.replaced_slots) mask |= std::size_t{1} << slot;
        ++counts[mask];
    }
    std::vector<double> dist(counts.size());
    for (std::size_t i = 0; i < counts.size(); ++i)
        dist[i] = static_cast<double>(counts[i]) / static_cast<double>(trials);
    return dist;
}

std::vector<DistTestResult> marginal_uniformity_tests(const SlotHistogram& hist,
                                                      double significance) {
    std::vector<DistTestResult> results;
    for (std::size_t j = 0; j < hist.counts.size(); ++j) {
        const double stat = chi_square_uniform_statistic(hist.counts[j]);
        const double pvalue = chi_square_pvalue(stat, hist.updates - 1);
        results.push_back({"marginal_chi2_pvalue_slot" + std::to_string(j), pvalue, significance,
                           pvalue >= significance});
    }
    return results;
}

DistTestResult aggregate_marginal_test(const SlotHistogram& hist, double tv_threshold) {
    std::vector<double> empirical(hist.updates, 0.0);
    double total = 0.0;
    for (const auto& slot : hist.counts)
        for (std::size_t i = 0; i < slot.size(); ++i) {
            empirical[i] += static_cast<double>(slot[i]);
            total += static_cast<double>(slot[i]);
        }
    for (auto& v : empirical) v /= total;
    const std::vector<double> uniform(hist.updates, 1.0 / static_cast<double>(hist.updates));
    const double tv = tv_distance(empirical, uniform);
    return {"aggregate_marginal_tv", tv, tv_threshold, tv <= tv_threshold};
}

DistTestResult joint_independence_test(Policy policy, std::size_t updates, std::size_t trials,
                                       std::uint64_t seed, double tv_threshold) {
    const auto joint = simulate_joint_histogram(policy, updates, trials, seed);
    const double n = static_cast<double>(trials);
    std::vector<double> m0(updates, 0.0), m1(updates, 0.0);
    std::vector<double> pj, prod;
    pj.reserve(updates * updates);
    for (std::size_t i = 0; i < updates; ++i)
        for (std::size_t j = 0; j < updates; ++j) {
            const double p = static_cast<double>(joint[i][j]) / n;
            m0[i] += p;
            m1[j] += p;
            pj.push_back(p);
        }
    prod.reserve(updates * updates);
    for (std::size_t i = 0; i < updates; ++i)
        for (std::size_t j = 0; j < updates; ++j) prod.push_back(m0[i] * m1[j]);
    const double tv = tv_distance(pj, prod);
    return {"joint_independence_tv", tv, tv_threshold, tv <= tv_threshold};
}

DistTestResult pattern_law_test(std::span<const double> empirical, std::size_t capacity,
                                double abs_threshold) {
    if (empirical.size() != (std::size_t{1} << capacity))
        throw std::invalid_argument("pattern distribution size mismatch");
    const std::size_t t = capacity + 2;
    double worst = 0.0;
    for (std::size_t mask = 0; mask < empirical.size(); ++mask) {
        const std::size_t k = static_cast<std::size_t>(std::popcount(mask));
        const double expect = replacement_pattern_probability(capacity, t, k);
        worst = std::max(worst, std::abs(empirical[mask] - expect));
    }
    return {"pattern_law_max_abs_error", worst, abs_threshold, worst <= abs_threshold};
}

DistTestResult pattern_agreement_test(std::span<const double> a, std::span<const double> b,
                                      double tv_threshold) {
    const double tv = tv_distance(a, b);
    return {"pattern_agreement_tv", tv, tv_threshold, tv <= tv_threshold};
}

DistTestResult fifo_content_test(std::size_t capacity, std::size_t updates, std::uint64_t seed) {
    RandomSource rng(seed);
    Buffer buf(Policy::Fifo, capacity);
    for (std::size_t t = 1; t <= updates; ++t) buf.update(dummy_point(t), t, &rng);
    const std::size_t held = std::min(capacity, updates);
    bool ok = buf.size() == held;
    for (std::size_t j = 0; ok && j < held; ++j)
        ok = buf.entries()[j].stream_index == updates - held + j + 1;
    return {"fifo_content", ok ? 0.0 : 1.0, 0.0, ok};
}

}  // namespace pairstream
