#include "pairstream/eval.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace pairstream {

namespace {

double score(const Hypothesis& h, const LabeledPoint& z) {
    double acc = 0.0;
    for (std::size_t i = 0; i < h.weights.size(); ++i) acc += h.weights[i] * z.features[i];
    return acc;
}

double trace_all_pairs_sum(const EnsembleTrace& trace, std::span<const LabeledPoint> stream,
                           const PairwiseLoss& loss) {
    double acc = 0.0;
    for (std::size_t t = 1; t < stream.size(); ++t) {
        const Hypothesis h{trace.hypotheses[t - 1], trace.task};
        acc += all_pairs_penalty(loss, h, stream[t], stream.subspan(0, t));
    }
    return acc;
}

double fixed_all_pairs_sum(const Hypothesis& h, std::span<const LabeledPoint> stream,
                           const PairwiseLoss& loss) {
    double acc = 0.0;
    for (std::size_t t = 1; t < stream.size(); ++t)
        acc += all_pairs_penalty(loss, h, stream[t], stream.subspan(0, t));
    return acc;
}

double snapshot_penalty(const PairwiseLoss& loss, const Hypothesis& h, const LabeledPoint& z_t,
                        std::span<const std::size_t> snapshot,
                        std::span<const LabeledPoint> stream) {
    if (snapshot.empty()) throw std::invalid_argument("empty buffer snapshot");
    double acc = 0.0;
    for (std::size_t index : snapshot) acc += pair_loss(loss, h, z_t, stream[index - 1]);
    return acc / static_cast<double>(snapshot.size());
}

void check_trace(const EnsembleTrace& trace, std::span<const LabeledPoint> stream) {
    if (stream.size() < 2 || trace.hypotheses.size() != stream.size() - 1)
        throw std::invalid_argument("length mismatch");
}

}  // namespace

double auc_score(const Hypothesis& h, const Dataset& test) {
    if (h.task != TaskKind::AucLinear) throw std::invalid_argument("AUC needs a linear scorer");
    std::vector<std::pair<double, double>> scored;  // (score, label)
    scored.reserve(test.size());
    std::size_t positives = 0, negatives = 0;
    for (const auto& z : test.points) {
        if (z.label != 1.0 && z.label != -1.0) throw std::invalid_argument("label not in {-1,+1}");
        (z.label > 0 ? positives : negatives) += 1;
        scored.emplace_back(score(h, z), z.label);
    }
    if (positives == 0 || negatives == 0) throw std::invalid_argument("AUC undefined");

    // Mann-Whitney via midranks; tie groups get the average rank, which
    // charges exactly one half per tied cross-label pair.
    std::sort(scored.begin(), scored.end(),
              [](const auto& a, const auto& b) { return a.first < b.first; });
    double positive_rank_sum = 0.0;
    std::size_t i = 0;
    while (i < scored.size()) {
        std::size_t j = i;
        while (j < scored.size() && scored[j].first == scored[i].first) ++j;
        const double midrank = (static_cast<double>(i + 1) + static_cast<double>(j)) / 2.0;
        for (std::size_t k = i; k < j; ++k)
            if (scored[k].second > 0) positive_rank_sum += midrank;
        i = j;
    }
    const double p = static_cast<double>(positives);
    const double u = positive_rank_sum - p * (p + 1.0) / 2.0;
    return u / (p * static_cast<double>(negatives));
}

double all_pairs_regret(const EnsembleTrace& trace, std::span<const LabeledPoint> stream,
                        const PairwiseLoss& loss, const Hypothesis& reference) {
    check_trace(trace, stream);
    return trace_all_pairs_sum(trace, stream, loss) -
           fixed_all_pairs_sum(reference, stream, loss);
}

double finite_buffer_regret(const EnsembleTrace& trace, std::span<const LabeledPoint> stream,
                            const PairwiseLoss& loss, const Hypothesis& reference) {
    check_trace(trace, stream);
    if (!trace.has_snapshots() || trace.buffer_snapshots.size() != trace.hypotheses.size())
        throw std::invalid_argument("trace has no buffer snapshots");
    double trace_sum = 0.0, reference_sum = 0.0;
    for (std::size_t t = 1; t < stream.size(); ++t) {
        const auto& snapshot = trace.buffer_snapshots[t - 1];
        const Hypothesis h{trace.hypotheses[t - 1], trace.task};
        trace_sum += snapshot_penalty(loss, h, stream[t], snapshot, stream);
        reference_sum += snapshot_penalty(loss, reference, stream[t], snapshot, stream);
    }
    return trace_sum - reference_sum;
}

RiskReport online_to_batch_report(const EnsembleTrace& trace, const Dataset& holdout,
                                  const PairwiseLoss& loss) {
    if (trace.hypotheses.empty()) throw std::invalid_argument("empty trace");
    RiskReport report;
    double acc = 0.0;
    for (const auto& w : trace.hypotheses)
        acc += expected_risk(loss, Hypothesis{w, trace.task}, holdout);
    report.ensemble_avg_risk = acc / static_cast<double>(trace.hypotheses.size());
    report.avg_hyp_risk = expected_risk(loss, average_hypothesis(trace), holdout);
    report.best_hyp_risk = expected_risk(loss, best_hypothesis(trace, holdout, loss), holdout);
    return report;
}

RegretReport regret_report(const EnsembleTrace& trace, std::span<const LabeledPoint> stream,
                           const PairwiseLoss& loss, const Hypothesis& reference, std::size_t s) {
    RegretReport report;
    report.n = stream.size();
    report.s = s;
    report.all_pairs_regret = all_pairs_regret(trace, stream, loss, reference);
    report.finite_buffer_regret = finite_buffer_regret(trace, stream, loss, reference);
    report.per_step_all_pairs = report.all_pairs_regret / static_cast<double>(stream.size() - 1);
    report.reference_objective = fixed_all_pairs_sum(reference, stream, loss);
    return report;
}

}  // namespace pairstream
