#pragma once

#include <span>
#include <vector>

#include "pairstream/core.hpp"
#include "pairstream/sampling.hpp"

namespace pairstream {

// Pairwise hinge losses with margin 1 and an optional (sigma/2)||w||^2
// regularizer added to every charged pair.
//
//   AUC-linear:  y == y' pairs cost 0; otherwise
//                max(0, 1 - ((y-y')/2) (w.x - w.x')) + (sigma/2)||w||_2^2
//   Metric:      max(0, 1 - y y' (1 - M_W(x,x'))) + (sigma/2)||W||_F^2
//                with M_W(x,x') = (x-x')^T W (x-x')
//
// Both forms are symmetric in the pair order.
struct PairwiseLoss {
    TaskKind kind = TaskKind::AucLinear;
    double sigma = 0.0;
};

std::size_t weight_length(TaskKind kind, std::size_t dimension);

double pair_loss(const PairwiseLoss& loss, const Hypothesis& h, const LabeledPoint& z,
                 const LabeledPoint& z2);

// Subgradient of pair_loss with respect to the weights, accumulated into
// `out` (out += g). At the hinge kink the inactive branch is taken, leaving
// only the regularizer gradient.
void pair_subgradient_accumulate(const PairwiseLoss& loss, const Hypothesis& h,
                                 const LabeledPoint& z, const LabeledPoint& z2,
                                 std::span<double> out);

std::vector<double> pair_subgradient(const PairwiseLoss& loss, const Hypothesis& h,
                                     const LabeledPoint& z, const LabeledPoint& z2);

// (1/(t-1)) sum over the history of pair_loss(h, z_t, z_tau).
double all_pairs_penalty(const PairwiseLoss& loss, const Hypothesis& h, const LabeledPoint& z_t,
                         std::span<const LabeledPoint> history);

// Same average restricted to the buffer contents; duplicate slots count
// with multiplicity.
double buffer_penalty(const PairwiseLoss& loss, const Hypothesis& h, const LabeledPoint& z_t,
                      const Buffer& buf);

// U-statistic estimate of the expected risk over all unordered pairs of the
// sample. The in-scope losses are pair-order symmetric, so a single
// orientation per pair suffices.
double expected_risk(const PairwiseLoss& loss, const Hypothesis& h, const Dataset& sample);

// Loss range bound used by the excess-risk reporting calculators:
// B = 1 + R * max ||x - x'||.
double hinge_loss_bound(double radius, double max_pair_diff_norm);

}  // namespace pairstream
