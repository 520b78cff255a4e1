#include "pairstream/learners.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pairstream {

namespace {

double l2_norm(std::span<const double> v) {
    double acc = 0.0;
    for (double x : v) acc += x * x;
    return std::sqrt(acc);
}

// Aggregate objective and subgradient for the AUC-linear loss via per-point
// scores: margins become score differences, and the subgradient collapses to
// per-point coefficients. Equivalent to the pair-by-pair form up to
// floating-point association.
struct AucAggregate {
    double objective = 0.0;
    std::vector<double> point_coeffs;  // subgradient = sum_i c_i x_i + sigma * mw * w
    double mixed_weight = 0.0;
};

AucAggregate auc_aggregate(const PairwiseLoss& loss, std::span<const double> w,
                           std::span<const LabeledPoint> stream, bool want_gradient) {
    const std::size_t n = stream.size();
    std::vector<double> scores(n);
    for (std::size_t i = 0; i < n; ++i) {
        if (stream[i].features.size() != w.size())
            throw std::invalid_argument("dimension mismatch");
        if (stream[i].label != 1.0 && stream[i].label != -1.0)
            throw std::invalid_argument("label not in {-1,+1}");
        double s = 0.0;
        for (std::size_t k = 0; k < w.size(); ++k) s += w[k] * stream[i].features[k];
        scores[i] = s;
    }
    double wsq = 0.0;
    for (double x : w) wsq += x * x;
    const double reg = 0.5 * loss.sigma * wsq;

    AucAggregate agg;
    if (want_gradient) agg.point_coeffs.assign(n, 0.0);
    for (std::size_t t = 1; t < n; ++t) {
        const double inv = 1.0 / static_cast<double>(t);
        double step_acc = 0.0;
        for (std::size_t tau = 0; tau < t; ++tau) {
            if (stream[t].label == stream[tau].label) continue;
            agg.mixed_weight += inv;
            const double a = (stream[t].label - stream[tau].label) / 2.0;
            const double u = a * (scores[t] - scores[tau]);
            step_acc += (u < 1.0 ? 1.0 - u : 0.0) + reg;
            if (want_gradient && u < 1.0) {
                agg.point_coeffs[t] -= a * inv;
                agg.point_coeffs[tau] += a * inv;
            }
        }
        agg.objective += step_acc * inv;
    }
    return agg;
}

std::vector<double> aggregate_subgradient(const PairwiseLoss& loss, const Hypothesis& h,
                                          std::span<const LabeledPoint> stream) {
    std::vector<double> g(h.weights.size(), 0.0);
    if (loss.kind == TaskKind::AucLinear) {
        const AucAggregate agg = auc_aggregate(loss, h.weights, stream, true);
        for (std::size_t i = 0; i < stream.size(); ++i) {
            const double c = agg.point_coeffs[i];
            if (c == 0.0) continue;
            for (std::size_t k = 0; k < g.size(); ++k) g[k] += c * stream[i].features[k];
        }
        if (loss.sigma > 0.0)
            for (std::size_t k = 0; k < g.size(); ++k)
                g[k] += loss.sigma * agg.mixed_weight * h.weights[k];
        return g;
    }
    std::vector<double> scratch(h.weights.size());
    for (std::size_t t = 1; t < stream.size(); ++t) {
        std::fill(scratch.begin(), scratch.end(), 0.0);
        for (std::size_t tau = 0; tau < t; ++tau)
            pair_subgradient_accumulate(loss, h, stream[t], stream[tau], scratch);
        const double inv = 1.0 / static_cast<double>(t);
        for (std::size_t k = 0; k < g.size(); ++k) g[k] += inv * scratch[k];
    }
    return g;
}

}  // namespace

std::vector<double> project_l2_ball(std::vector<double> w, double radius) {
    if (radius <= 0.0) throw std::invalid_argument("projection radius must be positive");
    const double norm = l2_norm(w);
    if (norm > radius) {
        const double scale = radius / norm;
        for (double& x : w) x *= scale;
    }
    return w;
}

EnsembleTrace olp_run(std::span<const LabeledPoint> stream, const LearnerConfig& config,
                      RandomSource& rng) {
    const std::size_t n = stream.size();
    if (n < 2) throw std::invalid_argument("stream too short");
    if (config.dimension == 0 || stream[0].features.size() != config.dimension)
        throw std::invalid_argument("dimension mismatch");
    if (config.eta_scale <= 0.0) throw std::invalid_argument("eta must be positive");

    const std::size_t wlen = weight_length(config.loss.kind, config.dimension);
    EnsembleTrace trace;
    trace.task = config.loss.kind;
    trace.hypotheses.reserve(n - 1);
    trace.buffer_penalties.reserve(n - 1);
    if (config.record_snapshots) trace.buffer_snapshots.reserve(n - 1);

    std::vector<double> w(wlen, 0.0);
    std::vector<double> grad(wlen);
    Buffer buf(config.policy, config.buffer_capacity);

    for (std::size_t t = 1; t <= n; ++t) {
        const LabeledPoint& z = stream[t - 1];
        if (t >= 2) {
            Hypothesis h{w, config.loss.kind};
            trace.hypotheses.push_back(w);
            trace.buffer_penalties.push_back(buffer_penalty(config.loss, h, z, buf));
            if (config.record_snapshots) {
                std::vector<std::size_t> snap;
                snap.reserve(buf.size());
                for (const auto& e : buf.entries()) snap.push_back(e.stream_index);
                trace.buffer_snapshots.push_back(std::move(snap));
            }
            std::fill(grad.begin(), grad.end(), 0.0);
            for (const auto& e : buf.entries())
                pair_subgradient_accumulate(config.loss, h, z, e.point, grad);
            const double eta_t = config.eta_scale / std::sqrt(static_cast<double>(t));
            const double scale = eta_t / static_cast<double>(buf.size());
            for (std::size_t k = 0; k < wlen; ++k) w[k] -= scale * grad[k];
            w = project_l2_ball(std::move(w), config.projection_radius);
        }
        buf.update(z, t, &rng);
    }
    return trace;
}

Hypothesis average_hypothesis(const EnsembleTrace& trace) {
    if (trace.hypotheses.empty()) throw std::invalid_argument("empty trace");
    std::vector<double> mean(trace.hypotheses.front().size(), 0.0);
    for (const auto& h : trace.hypotheses)
        for (std::size_t k = 0; k < mean.size(); ++k) mean[k] += h[k];
    const double inv = 1.0 / static_cast<double>(trace.hypotheses.size());
    for (double& x : mean) x *= inv;
    return Hypothesis{std::move(mean), trace.task};
}

Hypothesis best_hypothesis(const EnsembleTrace& trace, const Dataset& validation,
                           const PairwiseLoss& loss) {
    if (trace.hypotheses.empty()) throw std::invalid_argument("empty trace");
    std::size_t best = 0;
    double best_risk = expected_risk(loss, Hypothesis{trace.hypotheses[0], trace.task}, validation);
    for (std::size_t i = 1; i < trace.hypotheses.size(); ++i) {
        const double risk =
            expected_risk(loss, Hypothesis{trace.hypotheses[i], trace.task}, validation);
        if (risk < best_risk) {
            best_risk = risk;
            best = i;
        }
    }
    return Hypothesis{trace.hypotheses[best], trace.task};
}

double aggregate_all_pairs_objective(const PairwiseLoss& loss, const Hypothesis& h,
                                     std::span<const LabeledPoint> stream) {
    if (stream.size() < 2) throw std::invalid_argument("stream too short");
    if (loss.kind == TaskKind::AucLinear) return auc_aggregate(loss, h.weights, stream, false).objective;
    double acc = 0.0;
    for (std::size_t t = 1; t < stream.size(); ++t)
        acc += all_pairs_penalty(loss, h, stream[t], stream.subspan(0, t));
    return acc;
}

Hypothesis batch_all_pairs_minimizer(std::span<const LabeledPoint> stream,
                                     const PairwiseLoss& loss, double radius,
                                     std::size_t iterations) {
    if (iterations == 0) throw std::invalid_argument("iterations must be >= 1");
    if (stream.size() < 2) throw std::invalid_argument("stream too short");
    const std::size_t wlen = weight_length(loss.kind, stream[0].features.size());

    Hypothesis h{std::vector<double>(wlen, 0.0), loss.kind};
    std::vector<double> best = h.weights;
    double best_objective = aggregate_all_pairs_objective(loss, h, stream);
    double step_scale = 0.0;

    for (std::size_t k = 1; k <= iterations; ++k) {
        const std::vector<double> g = aggregate_subgradient(loss, h, stream);
        const double gnorm = l2_norm(g);
        if (gnorm == 0.0) break;  // zero subgradient: global minimum of a convex sum
        if (step_scale == 0.0) step_scale = radius / gnorm;
        const double step = step_scale / std::sqrt(static_cast<double>(k));
        for (std::size_t i = 0; i < wlen; ++i) h.weights[i] -= step * g[i];
        h.weights = project_l2_ball(std::move(h.weights), radius);
        const double objective = aggregate_all_pairs_objective(loss, h, stream);
        if (objective < best_objective) {
            best_objective = objective;
            best = h.weights;
        }
    }
    return Hypothesis{std::move(best), loss.kind};
}

}  // namespace pairstream
