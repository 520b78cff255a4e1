#pragma once

#include <span>

#include "pairstream/core.hpp"

namespace pairstream {

// Inputs shared by the closed-form Rademacher-complexity calculators and
// the excess-risk RHS evaluators. Fill only the fields a given row needs;
// norm_w is the hypothesis norm bound in whichever norm the requested
// variant regularizes. Logarithms are natural throughout.
struct BoundInputs {
    std::size_t n = 0;          // sample / step count
    std::size_t d = 2;          // input dimension
    double norm_x = 1.0;        // data norm bound in the row's primary norm
    double norm_x_inf = 1.0;    // data sup-norm bound where a row needs both
    double norm_w = 1.0;        // hypothesis norm bound
    double p = 2.0;             // conjugate exponents, 1/p + 1/q = 1
    double q = 2.0;
    double kappa = 1.0;         // kernel bound
    std::size_t num_kernels = 2;
    double lipschitz = 1.0;     // L
    double label_bound = 2.0;   // Y = sup |Y(y,y')|; 2 for (y-y') on {-1,+1}
    double loss_bound = 1.0;    // B
    double delta = 0.1;
    double regret = 0.0;
    std::size_t s = 1;          // buffer capacity
    double c_d = 1.0;
};

enum class AucBoundVariant { LqBall, L1Ball };
enum class MetricBoundVariant { Norm22, Norm21, Norm11, SchattenTrace };
enum class MklBoundVariant { L2Sphere, L1Simplex };
enum class RiskBoundKind { AllPairs, FiniteBuffer };

// Linear AUC classes:
//   LqBall:  2 ||X||_p ||W||_q sqrt((p-1)/n)
//   L1Ball:  2 ||X||_inf ||W||_1 sqrt(e log d / n)
double auc_rademacher_bound(AucBoundVariant variant, const BoundInputs& in);

// Similarity / metric classes:
//   Norm22:        ||X||_2^2 ||W||_{2,2} sqrt(1/n)
//   Norm21:        ||X||_2 ||X||_inf ||W||_{2,1} sqrt(e log d / n)
//   Norm11:        ||X||_inf^2 ||W||_{1,1} sqrt(2 e log d / n)
//   SchattenTrace: ||X||_2^2 ||W||_{S(1)} sqrt(e log d / n)
double metric_rademacher_bound(MetricBoundVariant variant, const BoundInputs& in);

// Kernel-combination classes over num_kernels base kernels:
//   L2Sphere:  kappa^2 sqrt(num_kernels / n)
//   L1Simplex: kappa^2 sqrt(e log(num_kernels) / n)
double mkl_rademacher_bound(MklBoundVariant variant, const BoundInputs& in);

// Composition rule: R_n(loss o H) <= L * Y * R_n(H).
double contraction_bound(double lipschitz, double label_bound, double rad_of_h);

// Excess-risk RHS for reporting:
//   AllPairs:     (4/(n-1)) sum(rad_terms) + regret/(n-1)
//                    + 6 B sqrt(log(n/delta)/(n-1))
//   FiniteBuffer: same shape with the deviation term over the buffer size,
//                    6 B sqrt(log(n/delta)/s)
// The finite-buffer constants (4 and 6) are a fixed reporting convention.
double excess_risk_bound_rhs(RiskBoundKind kind, const BoundInputs& in,
                             std::span<const double> rad_terms);

// Dimension-factor presets: 1 for L2-style classes, sqrt(e log d) for the
// L1/trace-norm classes.
double cd_preset_l2();
double cd_preset_log(std::size_t d);

struct RademacherEstimate {
    double mean = 0.0;
    double std_error = 0.0;
    std::size_t trials = 0;
};

// Monte-Carlo estimate of R_n for the radius-R linear class under the L2
// norm. Per trial (in draw order): one head index, then for each of the n
// tail positions one index draw followed by one sign from the low bit of a
// raw draw; the inner supremum is closed-form,
// R * || (1/n) sum eps_tau (x - x_tau) ||_2.
RademacherEstimate empirical_rademacher_mc(double radius, const Dataset& sample, std::size_t n,
                                           std::size_t trials, RandomSource& rng);

}  // namespace pairstream
