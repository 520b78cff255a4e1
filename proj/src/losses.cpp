#include "pairstream/losses.hpp"

#include <cmath>
#include <stdexcept>

namespace pairstream {

namespace {

void check_label(double y) {
    if (y != 1.0 && y != -1.0) throw std::invalid_argument("label not in {-1,+1}");
}

double dot(std::span<const double> a, std::span<const double> b) {
    double acc = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) acc += a[i] * b[i];
    return acc;
}

double squared_norm(std::span<const double> a) { return dot(a, a); }

void check_pair(const PairwiseLoss& loss, const Hypothesis& h, const LabeledPoint& z,
                const LabeledPoint& z2) {
    if (h.task != loss.kind) throw std::invalid_argument("hypothesis task does not match loss");
    if (z.features.size() != z2.features.size())
        throw std::invalid_argument("dimension mismatch");
    if (h.weights.size() != weight_length(loss.kind, z.features.size()))
        throw std::invalid_argument("dimension mismatch");
    check_label(z.label);
    check_label(z2.label);
}

// (x - x')^T W (x - x') for row-major W.
double mahalanobis_form(std::span<const double> w, std::span<const double> x,
                        std::span<const double> x2) {
    const std::size_t d = x.size();
    double acc = 0.0;
    for (std::size_t i = 0; i < d; ++i) {
        const double di = x[i] - x2[i];
        if (di == 0.0) continue;
        const double* row = w.data() + i * d;
        double inner = 0.0;
        for (std::size_t j = 0; j < d; ++j) inner += row[j] * (x[j] - x2[j]);
        acc += di * inner;
    }
    return acc;
}

// Hinge margin u for the pair; the loss is max(0, 1 - u) whenever the pair
// is charged.
double pair_margin(const PairwiseLoss& loss, const Hypothesis& h, const LabeledPoint& z,
                   const LabeledPoint& z2) {
    if (loss.kind == TaskKind::AucLinear) {
        const double a = (z.label - z2.label) / 2.0;
        double diff_score = 0.0;
        for (std::size_t i = 0; i < z.features.size(); ++i)
            diff_score += h.weights[i] * (z.features[i] - z2.features[i]);
        return a * diff_score;
    }
    const double m = mahalanobis_form(h.weights, z.features, z2.features);
    return z.label * z2.label * (1.0 - m);
}

}  // namespace

std::size_t weight_length(TaskKind kind, std::size_t dimension) {
    return kind == TaskKind::AucLinear ? dimension : dimension * dimension;
}

double pair_loss(const PairwiseLoss& loss, const Hypothesis& h, const LabeledPoint& z,
                 const LabeledPoint& z2) {
    check_pair(loss, h, z, z2);
    if (loss.kind == TaskKind::AucLinear && z.label == z2.label) return 0.0;
    const double u = pair_margin(loss, h, z, z2);
    double value = u < 1.0 ? 1.0 - u : 0.0;
    if (loss.sigma > 0.0) value += 0.5 * loss.sigma * squared_norm(h.weights);
    return value;
}

void pair_subgradient_accumulate(const PairwiseLoss& loss, const Hypothesis& h,
                                 const LabeledPoint& z, const LabeledPoint& z2,
                                 std::span<double> out) {
    check_pair(loss, h, z, z2);
    if (out.size() != h.weights.size()) throw std::invalid_argument("dimension mismatch");
    if (loss.kind == TaskKind::AucLinear && z.label == z2.label) return;

    if (loss.sigma > 0.0)
        for (std::size_t i = 0; i < out.size(); ++i) out[i] += loss.sigma * h.weights[i];

    const double u = pair_margin(loss, h, z, z2);
    if (u >= 1.0) return;  // hinge inactive (kink takes this branch too)

    if (loss.kind == TaskKind::AucLinear) {
        const double a = (z.label - z2.label) / 2.0;
        for (std::size_t i = 0; i < out.size(); ++i)
            out[i] -= a * (z.features[i] - z2.features[i]);
    } else {
        // d/dW [1 - yy'(1 - M_W)] = yy' (x-x')(x-x')^T
        const double yy = z.label * z2.label;
        const std::size_t d = z.features.size();
        for (std::size_t i = 0; i < d; ++i) {
            const double di = z.features[i] - z2.features[i];
            for (std::size_t j = 0; j < d; ++j)
                out[i * d + j] += yy * di * (z.features[j] - z2.features[j]);
        }
    }
}

std::vector<double> pair_subgradient(const PairwiseLoss& loss, const Hypothesis& h,
                                     const LabeledPoint& z, const LabeledPoint& z2) {
    std::vector<double> g(h.weights.size(), 0.0);
    pair_subgradient_accumulate(loss, h, z, z2, g);
    return g;
}

double all_pairs_penalty(const PairwiseLoss& loss, const Hypothesis& h, const LabeledPoint& z_t,
                         std::span<const LabeledPoint> history) {
    if (history.empty()) throw std::invalid_argument("no pairs");
    double acc = 0.0;
    for (const auto& z : history) acc += pair_loss(loss, h, z_t, z);
    return acc / static_cast<double>(history.size());
}

double buffer_penalty(const PairwiseLoss& loss, const Hypothesis& h, const LabeledPoint& z_t,
                      const Buffer& buf) {
    if (buf.size() == 0) throw std::invalid_argument("empty buffer");
    double acc = 0.0;
    for (const auto& entry : buf.entries()) acc += pair_loss(loss, h, z_t, entry.point);
    return acc / static_cast<double>(buf.size());
}

double expected_risk(const PairwiseLoss& loss, const Hypothesis& h, const Dataset& sample) {
    const std::size_t m = sample.size();
    if (m < 2) throw std::invalid_argument("expected_risk needs at least 2 points");
    double acc = 0.0;
    for (std::size_t i = 0; i < m; ++i)
        for (std::size_t j = i + 1; j < m; ++j)
            acc += pair_loss(loss, h, sample.points[i], sample.points[j]);
    return 2.0 * acc / (static_cast<double>(m) * static_cast<double>(m - 1));
}

double hinge_loss_bound(double radius, double max_pair_diff_norm) {
    return 1.0 + radius * max_pair_diff_norm;
}

}  // namespace pairstream
