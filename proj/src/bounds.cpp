#include "pairstream/bounds.hpp"

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace pairstream {

namespace {

constexpr double kE = std::numbers::e;

void require_n(const BoundInputs& in) {
    if (in.n == 0) throw std::invalid_argument("sample count n must be positive");
}

double elogd_over_n(std::size_t d, std::size_t n) {
    if (d < 2) throw std::invalid_argument("log-d bound requires d >= 2");
    return kE * std::log(static_cast<double>(d)) / static_cast<double>(n);
}

}  // namespace

double auc_rademacher_bound(AucBoundVariant variant, const BoundInputs& in) {
    require_n(in);
    switch (variant) {
        case AucBoundVariant::LqBall: {
            if (in.p <= 1.0 || in.q <= 1.0) throw std::invalid_argument("exponents must exceed 1");
            if (std::abs(1.0 / in.p + 1.0 / in.q - 1.0) > 1e-9)
                throw std::invalid_argument("p and q must be conjugate");
            return 2.0 * in.norm_x * in.norm_w *
                   std::sqrt((in.p - 1.0) / static_cast<double>(in.n));
        }
        case AucBoundVariant::L1Ball:
            return 2.0 * in.norm_x_inf * in.norm_w * std::sqrt(elogd_over_n(in.d, in.n));
    }
    throw std::logic_error("bad variant");
}

double metric_rademacher_bound(MetricBoundVariant variant, const BoundInputs& in) {
    require_n(in);
    switch (variant) {
        case MetricBoundVariant::Norm22:
            return in.norm_x * in.norm_x * in.norm_w * std::sqrt(1.0 / static_cast<double>(in.n));
        case MetricBoundVariant::Norm21:
            return in.norm_x * in.norm_x_inf * in.norm_w * std::sqrt(elogd_over_n(in.d, in.n));
        case MetricBoundVariant::Norm11:
            return in.norm_x_inf * in.norm_x_inf * in.norm_w *
                   std::sqrt(2.0 * elogd_over_n(in.d, in.n));
        case MetricBoundVariant::SchattenTrace:
            return in.norm_x * in.norm_x * in.norm_w * std::sqrt(elogd_over_n(in.d, in.n));
    }
    throw std::logic_error("bad variant");
}

double mkl_rademacher_bound(MklBoundVariant variant, const BoundInputs& in) {
    require_n(in);
    switch (variant) {
        case MklBoundVariant::L2Sphere:
            return in.kappa * in.kappa *
                   std::sqrt(static_cast<double>(in.num_kernels) / static_cast<double>(in.n));
        case MklBoundVariant::L1Simplex:
            if (in.num_kernels < 2)
                throw std::invalid_argument("simplex bound requires >= 2 kernels");
            return in.kappa * in.kappa *
                   std::sqrt(kE * std::log(static_cast<double>(in.num_kernels)) /
                             static_cast<double>(in.n));
    }
    throw std::logic_error("bad variant");
}

double contraction_bound(double lipschitz, double label_bound, double rad_of_h) {
    if (lipschitz < 0.0 || label_bound < 0.0 || rad_of_h < 0.0)
        throw std::invalid_argument("contraction inputs must be nonnegative");
    return lipschitz * label_bound * rad_of_h;
}

double excess_risk_bound_rhs(RiskBoundKind kind, const BoundInputs& in,
                             std::span<const double> rad_terms) {
    if (in.n < 2) throw std::invalid_argument("n must be >= 2");
    if (in.delta <= 0.0 || in.delta >= 1.0) throw std::invalid_argument("delta must be in (0,1)");
    const double steps = static_cast<double>(in.n - 1);
    double rad_sum = 0.0;
    for (double r : rad_terms) rad_sum += r;
    const double log_term = std::log(static_cast<double>(in.n) / in.delta);
    const double denom =
        kind == RiskBoundKind::AllPairs ? steps : static_cast<double>(in.s);
    if (denom <= 0.0) throw std::invalid_argument("buffer size must be positive");
    return 4.0 / steps * rad_sum + in.regret / steps +
           6.0 * in.loss_bound * std::sqrt(log_term / denom);
}

double cd_preset_l2() { return 1.0; }

double cd_preset_log(std::size_t d) {
    if (d < 2) throw std::invalid_argument("log-d preset requires d >= 2");
    return std::sqrt(kE * std::log(static_cast<double>(d)));
}

RademacherEstimate empirical_rademacher_mc(double radius, const Dataset& sample, std::size_t n,
                                           std::size_t trials, RandomSource& rng) {
    if (trials == 0) throw std::invalid_argument("trials must be >= 1");
    if (sample.size() < 2) throw std::invalid_argument("sample needs at least 2 points");
    if (n == 0) throw std::invalid_argument("n must be positive");
    const std::size_t d = sample.dimension;
    std::vector<double> acc(d);

    double mean = 0.0, m2 = 0.0;
    for (std::size_t trial = 0; trial < trials; ++trial) {
        const LabeledPoint& head = sample.points[rng.next_bounded(sample.size())];
        std::fill(acc.begin(), acc.end(), 0.0);
        for (std::size_t tau = 0; tau < n; ++tau) {
            const LabeledPoint& tail = sample.points[rng.next_bounded(sample.size())];
            const double sign = (rng.next_u64() & 1) ? 1.0 : -1.0;
            for (std::size_t k = 0; k < d; ++k)
                acc[k] += sign * (head.features[k] - tail.features[k]);
        }
        double sq = 0.0;
        for (double v : acc) sq += v * v;
        const double value = radius * std::sqrt(sq) / static_cast<double>(n);
        const double delta = value - mean;
        mean += delta / static_cast<double>(trial + 1);
        m2 += delta * (value - mean);
    }
    RademacherEstimate estimate;
    estimate.mean = mean;
    estimate.trials = trials;
    if (trials > 1) {
        const double variance = m2 / static_cast<double>(trials - 1);
        estimate.std_error = std::sqrt(variance / static_cast<double>(trials));
    }
    return estimate;
}

}  // namespace pairstream
