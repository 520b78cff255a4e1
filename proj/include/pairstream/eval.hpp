#pragma once

#include <span>

#include "pairstream/core.hpp"
#include "pairstream/learners.hpp"
#include "pairstream/losses.hpp"

namespace pairstream {

struct RegretReport {
    double all_pairs_regret = 0.0;
    double finite_buffer_regret = 0.0;
    double per_step_all_pairs = 0.0;
    double reference_objective = 0.0;
    std::size_t n = 0;
    std::size_t s = 0;
};

struct RiskReport {
    double ensemble_avg_risk = 0.0;
    double avg_hyp_risk = 0.0;
    double best_hyp_risk = 0.0;
};

// Fraction of (positive, negative) test pairs ranked correctly by w.x, ties
// counting one half. Rank-based; the pair-counting definition is the test
// oracle. Throws "AUC undefined" on a single-class test set.
double auc_score(const Hypothesis& h, const Dataset& test);

// sum_t L_t(h_{t-1}) - sum_t L_t(reference) over the all-pairs penalties.
double all_pairs_regret(const EnsembleTrace& trace, std::span<const LabeledPoint> stream,
                        const PairwiseLoss& loss, const Hypothesis& reference);

// Same difference over the finite-buffer penalties, re-evaluated on the
// recorded buffer snapshots. Requires a trace with snapshots.
double finite_buffer_regret(const EnsembleTrace& trace, std::span<const LabeledPoint> stream,
                            const PairwiseLoss& loss, const Hypothesis& reference);

RiskReport online_to_batch_report(const EnsembleTrace& trace, const Dataset& holdout,
                                  const PairwiseLoss& loss);

RegretReport regret_report(const EnsembleTrace& trace, std::span<const LabeledPoint> stream,
                           const PairwiseLoss& loss, const Hypothesis& reference, std::size_t s);

}  // namespace pairstream
