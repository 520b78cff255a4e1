#pragma once

#include <span>
#include <vector>

#include "pairstream/core.hpp"
#include "pairstream/losses.hpp"
#include "pairstream/sampling.hpp"

namespace pairstream {

struct LearnerConfig {
    double eta_scale = 1.0;
    std::size_t buffer_capacity = 16;
    Policy policy = Policy::Rsx;
    double projection_radius = 1.0;
    PairwiseLoss loss;
    std::size_t dimension = 0;
    bool record_snapshots = true;
};

// Ensemble h_1..h_{n-1} produced by an online run, with the finite-buffer
// penalty each hypothesis incurred and (optionally) the stream indices held
// by the buffer at each step.
struct EnsembleTrace {
    TaskKind task = TaskKind::AucLinear;
    std::vector<std::vector<double>> hypotheses;              // h_{t-1}, t = 2..n
    std::vector<double> buffer_penalties;                     // L^buf_t(h_{t-1})
    std::vector<std::vector<std::size_t>> buffer_snapshots;   // B_t as 1-based indices

    std::size_t steps() const { return hypotheses.size(); }
    bool has_snapshots() const { return !buffer_snapshots.empty(); }
};

// Scales w onto the radius-R Euclidean ball; identity inside the ball.
std::vector<double> project_l2_ball(std::vector<double> w, double radius);

// Projected online subgradient descent over finite-buffer penalties:
// w_0 = 0; at step t the point z_t arrives, eta_t = eta / sqrt(t); for
// t >= 2 the hypothesis h_{t-1} = w_{t-1} and its buffer penalty are
// recorded, then
//   w_t = Pi_R[ w_{t-1} - (eta_t/|B_t|) sum_{z in B_t} grad l(w_{t-1}, z_t, z) ]
// and only afterwards is the buffer updated with z_t. Step 1 admits z_1
// with no penalty and no gradient step.
EnsembleTrace olp_run(std::span<const LabeledPoint> stream, const LearnerConfig& config,
                      RandomSource& rng);

// Coordinate-wise mean of the ensemble.
Hypothesis average_hypothesis(const EnsembleTrace& trace);

// Trace hypothesis with minimal expected risk on the validation set; ties
// break toward the smallest index.
Hypothesis best_hypothesis(const EnsembleTrace& trace, const Dataset& validation,
                           const PairwiseLoss& loss);

// Deterministic projected subgradient descent on the aggregate objective
// F(h) = sum_{t=2}^n all_pairs_penalty(h, z_t, z_1..z_{t-1}), starting from
// zero with steps c/sqrt(k) (c = R / ||g_1||), returning the iterate with
// the lowest objective seen. An approximate infimum used as the regret
// reference.
Hypothesis batch_all_pairs_minimizer(std::span<const LabeledPoint> stream,
                                     const PairwiseLoss& loss, double radius,
                                     std::size_t iterations);

// F(h) above evaluated exactly; shared by the minimizer and the regret
// evaluators.
double aggregate_all_pairs_objective(const PairwiseLoss& loss, const Hypothesis& h,
                                     std::span<const LabeledPoint> stream);

}  // namespace pairstream
