#include <cmath>
#include <vector>

#include "doctest.h"
#include "pairstream/losses.hpp"

using namespace pairstream;

namespace {

LabeledPoint pt(std::vector<double> x, double y) { return LabeledPoint{std::move(x), y}; }

Hypothesis hyp(std::vector<double> w, TaskKind kind = TaskKind::AucLinear) {
    return Hypothesis{std::move(w), kind};
}

// Independent oracle: the loss formula written out directly.
double auc_loss_oracle(const std::vector<double>& w, const LabeledPoint& z,
                       const LabeledPoint& z2, double sigma) {
    if (z.label == z2.label) return 0.0;
    double sz = 0.0, sz2 = 0.0, wsq = 0.0;
    for (std::size_t i = 0; i < w.size(); ++i) {
        sz += w[i] * z.features[i];
        sz2 += w[i] * z2.features[i];
        wsq += w[i] * w[i];
    }
    const double u = ((z.label - z2.label) / 2.0) * (sz - sz2);
    return std::max(0.0, 1.0 - u) + 0.5 * sigma * wsq;
}

std::vector<double> random_vector(RandomSource& rng, std::size_t d, double scale) {
    std::vector<double> v(d);
    for (auto& x : v) x = scale * (2.0 * rng.next_real() - 1.0);
    return v;
}

LabeledPoint random_point(RandomSource& rng, std::size_t d) {
    return pt(random_vector(rng, d, 1.0), rng.bernoulli(0.5) ? 1.0 : -1.0);
}

}  // namespace

TEST_CASE("auc hinge values") {
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    CHECK(pair_loss(loss, hyp({1, 0}), pt({2, 0}, 1), pt({0, 0}, -1)) == 0.0);
    CHECK(pair_loss(loss, hyp({0, 0}), pt({2, 0}, 1), pt({0, 0}, -1)) == 1.0);
    CHECK(pair_loss(loss, hyp({3, -1}), pt({2, 0}, 1), pt({5, 1}, 1)) == 0.0);
}

TEST_CASE("metric hinge value from the quadratic form") {
    const PairwiseLoss loss{TaskKind::MetricMahalanobis, 0.0};
    // d=1, W=1, x=1, x'=0, same labels: M=1, so the margin is zero.
    CHECK(pair_loss(loss, hyp({1.0}, TaskKind::MetricMahalanobis), pt({1}, 1), pt({0}, 1)) ==
          1.0);
}

TEST_CASE("losses reject bad inputs") {
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    CHECK_THROWS(pair_loss(loss, hyp({1, 0}), pt({1}, 1), pt({0, 0}, -1)));
    CHECK_THROWS(pair_loss(loss, hyp({1}), pt({1}, 0.5), pt({0}, -1)));
}

TEST_CASE("loss matches the direct-formula oracle on random instances") {
    RandomSource rng(8);
    const PairwiseLoss loss{TaskKind::AucLinear, 0.25};
    for (int it = 0; it < 500; ++it) {
        const std::size_t d = 1 + rng.next_bounded(5);
        const auto w = random_vector(rng, d, 2.0);
        const auto z = random_point(rng, d);
        const auto z2 = random_point(rng, d);
        CHECK(pair_loss(loss, hyp(w), z, z2) ==
              doctest::Approx(auc_loss_oracle(w, z, z2, 0.25)).epsilon(1e-13));
    }
}

TEST_CASE("subgradient hand values") {
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    const auto g = pair_subgradient(loss, hyp({0, 0}), pt({1, 0}, 1), pt({0, 0}, -1));
    CHECK(g[0] == -1.0);
    CHECK(g[1] == 0.0);

    // Inactive hinge leaves only the regularizer gradient.
    const PairwiseLoss reg{TaskKind::AucLinear, 0.5};
    const auto g2 = pair_subgradient(reg, hyp({2, 0}), pt({2, 0}, 1), pt({0, 0}, -1));
    CHECK(g2[0] == doctest::Approx(0.5 * 2.0));
    CHECK(g2[1] == 0.0);
}

namespace {

// Hinge margin recomputed independently of the library path.
double margin_oracle(TaskKind kind, const std::vector<double>& w, const LabeledPoint& z,
                     const LabeledPoint& z2) {
    const std::size_t d = z.features.size();
    if (kind == TaskKind::AucLinear) {
        double sz = 0.0, sz2 = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            sz += w[i] * z.features[i];
            sz2 += w[i] * z2.features[i];
        }
        return ((z.label - z2.label) / 2.0) * (sz - sz2);
    }
    double m = 0.0;
    for (std::size_t i = 0; i < d; ++i)
        for (std::size_t j = 0; j < d; ++j)
            m += (z.features[i] - z2.features[i]) * w[i * d + j] *
                 (z.features[j] - z2.features[j]);
    return z.label * z2.label * (1.0 - m);
}

}  // namespace

TEST_CASE("subgradient matches central differences away from the kink") {
    RandomSource rng(21);
    for (TaskKind kind : {TaskKind::AucLinear, TaskKind::MetricMahalanobis}) {
        const PairwiseLoss loss{kind, 0.3};
        const std::size_t d = 3;
        const std::size_t wlen = weight_length(kind, d);
        int done = 0;
        while (done < 100) {
            auto w = random_vector(rng, wlen, 1.5);
            auto z = random_point(rng, d);
            auto z2 = random_point(rng, d);
            if (kind == TaskKind::AucLinear && z.label == z2.label) z2.label = -z.label;
            if (std::abs(margin_oracle(kind, w, z, z2) - 1.0) < 0.05) continue;
            const Hypothesis h = hyp(w, kind);
            const auto g = pair_subgradient(loss, h, z, z2);
            const auto dir = random_vector(rng, wlen, 1.0);
            const double eps = 1e-6;
            Hypothesis hp = h, hm = h;
            for (std::size_t i = 0; i < wlen; ++i) {
                hp.weights[i] += eps * dir[i];
                hm.weights[i] -= eps * dir[i];
            }
            const double fd = (pair_loss(loss, hp, z, z2) - pair_loss(loss, hm, z, z2)) /
                              (2.0 * eps);
            double gd = 0.0;
            for (std::size_t i = 0; i < wlen; ++i) gd += g[i] * dir[i];
            CHECK(fd == doctest::Approx(gd).epsilon(1e-5));
            ++done;
        }
    }
}

TEST_CASE("first-order convexity of the loss") {
    RandomSource rng(33);
    const PairwiseLoss loss{TaskKind::AucLinear, 0.2};
    for (int it = 0; it < 300; ++it) {
        const std::size_t d = 4;
        const auto z = random_point(rng, d);
        auto z2 = random_point(rng, d);
        const Hypothesis h1 = hyp(random_vector(rng, d, 2.0));
        const Hypothesis h2 = hyp(random_vector(rng, d, 2.0));
        const auto g = pair_subgradient(loss, h1, z, z2);
        double lin = 0.0;
        for (std::size_t i = 0; i < d; ++i) lin += g[i] * (h2.weights[i] - h1.weights[i]);
        CHECK(pair_loss(loss, h2, z, z2) >= pair_loss(loss, h1, z, z2) + lin - 1e-9);
    }
}

TEST_CASE("convexity along segments") {
    RandomSource rng(55);
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    for (int it = 0; it < 300; ++it) {
        const std::size_t d = 3;
        const auto z = random_point(rng, d);
        const auto z2 = random_point(rng, d);
        const auto w1 = random_vector(rng, d, 2.0);
        const auto w2 = random_vector(rng, d, 2.0);
        const double alpha = rng.next_real();
        std::vector<double> mix(d);
        for (std::size_t i = 0; i < d; ++i) mix[i] = alpha * w1[i] + (1 - alpha) * w2[i];
        CHECK(pair_loss(loss, hyp(mix), z, z2) <=
              alpha * pair_loss(loss, hyp(w1), z, z2) +
                  (1 - alpha) * pair_loss(loss, hyp(w2), z, z2) + 1e-9);
    }
}

TEST_CASE("quadratic regularizer is sigma-strongly convex with equality") {
    RandomSource rng(66);
    const double sigma = 0.7;
    auto r = [&](const std::vector<double>& w) {
        double sq = 0.0;
        for (double x : w) sq += x * x;
        return 0.5 * sigma * sq;
    };
    for (int it = 0; it < 300; ++it) {
        const auto w1 = random_vector(rng, 5, 3.0);
        const auto w2 = random_vector(rng, 5, 3.0);
        const double alpha = rng.next_real();
        std::vector<double> mix(5);
        double distsq = 0.0;
        for (std::size_t i = 0; i < 5; ++i) {
            mix[i] = alpha * w1[i] + (1 - alpha) * w2[i];
            distsq += (w1[i] - w2[i]) * (w1[i] - w2[i]);
        }
        const double lhs = r(mix);
        const double rhs = alpha * r(w1) + (1 - alpha) * r(w2) -
                           0.5 * sigma * alpha * (1 - alpha) * distsq;
        CHECK(lhs == doctest::Approx(rhs).epsilon(1e-9));
    }
}

TEST_CASE("lipschitz on the unit ball") {
    RandomSource rng(77);
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    for (int it = 0; it < 200; ++it) {
        const std::size_t d = 4;
        auto z = random_point(rng, d);
        auto z2 = random_point(rng, d);
        double max_diff_norm = 0.0;
        for (std::size_t i = 0; i < d; ++i) {
            const double diff = z.features[i] - z2.features[i];
            max_diff_norm += diff * diff;
        }
        const double lip = std::sqrt(max_diff_norm);  // hinge slope is 1
        const auto w1 = random_vector(rng, d, 0.5);
        const auto w2 = random_vector(rng, d, 0.5);
        double dist = 0.0;
        for (std::size_t i = 0; i < d; ++i) dist += (w1[i] - w2[i]) * (w1[i] - w2[i]);
        dist = std::sqrt(dist);
        CHECK(std::abs(pair_loss(loss, hyp(w1), z, z2) - pair_loss(loss, hyp(w2), z, z2)) <=
              lip * dist + 1e-12);
    }
}

TEST_CASE("all pairs penalty") {
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    const Hypothesis h = hyp({0.0});
    const LabeledPoint z = pt({1}, 1);
    const std::vector<LabeledPoint> one{pt({0}, -1)};
    CHECK(all_pairs_penalty(loss, h, z, one) == pair_loss(loss, h, z, one[0]));

    const std::vector<LabeledPoint> two{pt({0}, 1), pt({0}, -1)};
    CHECK(all_pairs_penalty(loss, h, z, two) == doctest::Approx(0.5));

    CHECK_THROWS_WITH(static_cast<void>(all_pairs_penalty(loss, h, z, {})), "no pairs");
}

TEST_CASE("penalties match a brute-force summation oracle") {
    RandomSource rng(88);
    const PairwiseLoss loss{TaskKind::AucLinear, 0.1};
    for (int it = 0; it < 50; ++it) {
        const std::size_t d = 1 + rng.next_bounded(4);
        const auto w = random_vector(rng, d, 1.0);
        const auto z = random_point(rng, d);
        std::vector<LabeledPoint> history;
        const std::size_t m = 1 + rng.next_bounded(20);
        for (std::size_t i = 0; i < m; ++i) history.push_back(random_point(rng, d));
        double oracle = 0.0;
        for (const auto& past : history) oracle += auc_loss_oracle(w, z, past, 0.1);
        oracle /= static_cast<double>(m);
        CHECK(all_pairs_penalty(loss, hyp(w), z, history) ==
              doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("buffer penalty counts duplicates with multiplicity") {
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    RandomSource rng(4);
    Buffer buf(Policy::Fifo, 2);
    const LabeledPoint z1 = pt({0}, -1);
    buf.update(z1, 1, nullptr);
    buf.update(z1, 2, nullptr);
    const Hypothesis h = hyp({0.0});
    const LabeledPoint z = pt({1}, 1);
    CHECK(buffer_penalty(loss, h, z, buf) == pair_loss(loss, h, z, z1));

    Buffer empty(Policy::Fifo, 2);
    CHECK_THROWS_WITH(static_cast<void>(buffer_penalty(loss, h, z, empty)), "empty buffer");
}

TEST_CASE("buffer penalty equals all-pairs penalty on an exact prefix") {
    RandomSource rng(12);
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    std::vector<LabeledPoint> stream;
    for (std::size_t t = 1; t <= 6; ++t) stream.push_back(random_point(rng, 3));
    Buffer buf(Policy::Rsx, 8);
    for (std::size_t t = 1; t <= 5; ++t) buf.update(stream[t - 1], t, &rng);
    const Hypothesis h = hyp(random_vector(rng, 3, 1.0));
    CHECK(buffer_penalty(loss, h, stream[5], buf) ==
          all_pairs_penalty(loss, h, stream[5], std::span(stream).subspan(0, 5)));
}

TEST_CASE("expected risk") {
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    const Hypothesis h = hyp({0.0});
    Dataset mixed{{pt({1}, 1), pt({0}, -1)}, 1, "m"};
    CHECK(expected_risk(loss, h, mixed) == 1.0);

    Dataset same{{pt({1}, 1), pt({0}, 1), pt({2}, 1)}, 1, "s"};
    CHECK(expected_risk(loss, h, same) == 0.0);

    Dataset tiny{{pt({1}, 1)}, 1, "t"};
    CHECK_THROWS(static_cast<void>(expected_risk(loss, h, tiny)));
}

TEST_CASE("expected risk matches the double-loop oracle") {
    RandomSource rng(99);
    const PairwiseLoss loss{TaskKind::AucLinear, 0.05};
    for (int it = 0; it < 30; ++it) {
        const std::size_t d = 2;
        const auto w = random_vector(rng, d, 1.0);
        Dataset sample;
        sample.dimension = d;
        const std::size_t m = 2 + rng.next_bounded(12);
        for (std::size_t i = 0; i < m; ++i) sample.points.push_back(random_point(rng, d));
        double oracle = 0.0;
        for (std::size_t i = 0; i < m; ++i)
            for (std::size_t j = i + 1; j < m; ++j)
                oracle += auc_loss_oracle(w, sample.points[i], sample.points[j], 0.05);
        oracle *= 2.0 / (static_cast<double>(m) * static_cast<double>(m - 1));
        CHECK(expected_risk(loss, hyp(w), sample) == doctest::Approx(oracle).epsilon(1e-12));
    }
}

TEST_CASE("losses are nonnegative") {
    RandomSource rng(111);
    for (TaskKind kind : {TaskKind::AucLinear, TaskKind::MetricMahalanobis}) {
        const PairwiseLoss loss{kind, 0.0};
        const std::size_t d = 3;
        for (int it = 0; it < 200; ++it) {
            const auto w = random_vector(rng, weight_length(kind, d), 2.0);
            CHECK(pair_loss(loss, hyp(w, kind), random_point(rng, d), random_point(rng, d)) >=
                  0.0);
        }
    }
}

TEST_CASE("hinge loss bound") {
    CHECK(hinge_loss_bound(1.0, 2.0) == 3.0);
    CHECK(hinge_loss_bound(0.0, 5.0) == 1.0);
}
