#include <cmath>

#include "doctest.h"
#include "pairstream/learners.hpp"

using namespace pairstream;

namespace {

LabeledPoint pt(std::vector<double> x, double y) { return LabeledPoint{std::move(x), y}; }

std::vector<LabeledPoint> mixed_stream(RandomSource& rng, std::size_t n, std::size_t d,
                                       double spread) {
    std::vector<LabeledPoint> stream;
    for (std::size_t i = 0; i < n; ++i) {
        std::vector<double> x(d);
        for (auto& v : x) v = spread * (2.0 * rng.next_real() - 1.0);
        stream.push_back(pt(std::move(x), i % 2 == 0 ? 1.0 : -1.0));
    }
    return stream;
}

LearnerConfig auc_config(std::size_t d, std::size_t s, Policy policy = Policy::Rsx) {
    LearnerConfig config;
    config.eta_scale = 1.0;
    config.buffer_capacity = s;
    config.policy = policy;
    config.projection_radius = 1.0;
    config.loss = PairwiseLoss{TaskKind::AucLinear, 0.0};
    config.dimension = d;
    return config;
}

double norm(const std::vector<double>& v) {
    double sq = 0.0;
    for (double x : v) sq += x * x;
    return std::sqrt(sq);
}

}  // namespace

TEST_CASE("projection onto the L2 ball") {
    const auto scaled = project_l2_ball({3, 4}, 1.0);
    CHECK(scaled[0] == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(scaled[1] == doctest::Approx(0.8).epsilon(1e-12));
    CHECK(project_l2_ball({0.3, 0.4}, 1.0) == std::vector<double>{0.3, 0.4});
    const auto half = project_l2_ball({4, 0}, 2.0);
    CHECK(half[0] == doctest::Approx(2.0));
    CHECK_THROWS(project_l2_ball({1.0}, 0.0));
}

TEST_CASE("olp single hand-computed step") {
    // Buffer holds ((0), -1); incoming ((1), +1) at t=2 with w=0 gives
    // subgradient -1 and eta_2 = 1/sqrt(2), so w becomes 0.70710678...
    RandomSource rng(1);
    const std::vector<LabeledPoint> stream{pt({0}, -1), pt({1}, 1)};
    const auto trace = olp_run(stream, auc_config(1, 4), rng);
    REQUIRE(trace.hypotheses.size() == 1);
    CHECK(trace.hypotheses[0][0] == 0.0);  // h_1 = w_1 recorded before the step
    CHECK(trace.buffer_penalties[0] == doctest::Approx(1.0));
}

TEST_CASE("olp final weight after the hand-computed step") {
    RandomSource rng(1);
    const std::vector<LabeledPoint> stream{pt({0}, -1), pt({1}, 1), pt({0.5}, 1)};
    const auto trace = olp_run(stream, auc_config(1, 4), rng);
    REQUIRE(trace.hypotheses.size() == 2);
    CHECK(trace.hypotheses[1][0] == doctest::Approx(1.0 / std::sqrt(2.0)).epsilon(1e-12));
}

TEST_CASE("same-label stream learns nothing") {
    RandomSource rng(2);
    std::vector<LabeledPoint> stream;
    for (int i = 0; i < 12; ++i) stream.push_back(pt({double(i), 1.0}, 1.0));
    const auto trace = olp_run(stream, auc_config(2, 4), rng);
    for (const auto& h : trace.hypotheses)
        for (double w : h) CHECK(w == 0.0);
    for (double pen : trace.buffer_penalties) CHECK(pen == 0.0);
}

TEST_CASE("olp is deterministic per seed") {
    RandomSource data_rng(3);
    const auto stream = mixed_stream(data_rng, 60, 3, 1.0);
    RandomSource a(7), b(7);
    const auto ta = olp_run(stream, auc_config(3, 8), a);
    const auto tb = olp_run(stream, auc_config(3, 8), b);
    REQUIRE(ta.hypotheses.size() == tb.hypotheses.size());
    for (std::size_t i = 0; i < ta.hypotheses.size(); ++i)
        CHECK(ta.hypotheses[i] == tb.hypotheses[i]);
    CHECK(ta.buffer_snapshots == tb.buffer_snapshots);
}

TEST_CASE("every trace hypothesis stays inside the ball") {
    RandomSource data_rng(4);
    const auto stream = mixed_stream(data_rng, 80, 3, 5.0);
    RandomSource rng(11);
    auto config = auc_config(3, 8);
    config.eta_scale = 25.0;  // force projection clipping
    const auto trace = olp_run(stream, config, rng);
    for (const auto& h : trace.hypotheses) CHECK(norm(h) <= 1.0 + 1e-12);
}

TEST_CASE("buffer penalty equals all-pairs penalty throughout the prefix regime") {
    RandomSource data_rng(5);
    const auto stream = mixed_stream(data_rng, 20, 2, 1.0);
    for (Policy policy : {Policy::Fifo, Policy::Rs, Policy::Rsx, Policy::Rsx2}) {
        RandomSource rng(6);
        const auto config = auc_config(2, 30, policy);  // s >= n: prefix forever
        const auto trace = olp_run(stream, config, rng);
        for (std::size_t t = 2; t <= stream.size(); ++t) {
            const Hypothesis h{trace.hypotheses[t - 2], TaskKind::AucLinear};
            const double apt = all_pairs_penalty(config.loss, h, stream[t - 1],
                                                 std::span(stream).subspan(0, t - 1));
            CHECK(trace.buffer_penalties[t - 2] == doctest::Approx(apt).epsilon(1e-12));
        }
    }
}

TEST_CASE("olp rejects short streams") {
    RandomSource rng(1);
    const std::vector<LabeledPoint> stream{pt({0}, -1)};
    CHECK_THROWS_WITH(static_cast<void>(olp_run(stream, auc_config(1, 4), rng)),
                      "stream too short");
}

TEST_CASE("average hypothesis") {
    EnsembleTrace trace;
    trace.task = TaskKind::AucLinear;
    trace.hypotheses = {{1.0, 2.0}, {1.0, 2.0}};
    auto avg = average_hypothesis(trace);
    CHECK(avg.weights == std::vector<double>{1.0, 2.0});

    trace.hypotheses = {{1.0, -3.0}, {-1.0, 3.0}};
    avg = average_hypothesis(trace);
    CHECK(avg.weights == std::vector<double>{0.0, 0.0});

    EnsembleTrace empty;
    CHECK_THROWS_WITH(static_cast<void>(average_hypothesis(empty)), "empty trace");
}

TEST_CASE("average hypothesis matches an independent summation") {
    RandomSource rng(13);
    EnsembleTrace trace;
    trace.task = TaskKind::AucLinear;
    for (int i = 0; i < 25; ++i) {
        std::vector<double> w(4);
        for (auto& x : w) x = rng.next_real();
        trace.hypotheses.push_back(w);
    }
    const auto avg = average_hypothesis(trace);
    for (std::size_t k = 0; k < 4; ++k) {
        double acc = 0.0;
        for (const auto& h : trace.hypotheses) acc += h[k];
        CHECK(avg.weights[k] == doctest::Approx(acc / 25.0).epsilon(1e-12));
    }
}

TEST_CASE("best hypothesis picks the validation winner, ties to lowest index") {
    Dataset validation;
    validation.dimension = 1;
    validation.points = {pt({1}, 1), pt({-1}, -1)};
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};

    EnsembleTrace trace;
    trace.task = TaskKind::AucLinear;
    trace.hypotheses = {{0.0}, {1.0}, {1.0}};
    const auto best = best_hypothesis(trace, validation, loss);
    CHECK(best.weights[0] == 1.0);

    EnsembleTrace tie;
    tie.task = TaskKind::AucLinear;
    tie.hypotheses = {{1.0}, {1.0}};
    CHECK(best_hypothesis(tie, validation, loss).weights == tie.hypotheses[0]);

    EnsembleTrace single;
    single.task = TaskKind::AucLinear;
    single.hypotheses = {{0.25}};
    CHECK(best_hypothesis(single, validation, loss).weights[0] == 0.25);
}

TEST_CASE("batch minimizer drives a separable stream to near-zero objective") {
    // Margin > 1 is reachable inside the unit ball: +/-2 on one axis.
    std::vector<LabeledPoint> stream;
    for (int i = 0; i < 12; ++i) stream.push_back(pt({i % 2 == 0 ? 2.0 : -2.0}, i % 2 == 0 ? 1.0 : -1.0));
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    const auto h = batch_all_pairs_minimizer(stream, loss, 1.0, 500);
    CHECK(aggregate_all_pairs_objective(loss, h, stream) <= 0.01);
}

TEST_CASE("batch minimizer on a same-label stream returns zero weights") {
    std::vector<LabeledPoint> stream;
    for (int i = 0; i < 8; ++i) stream.push_back(pt({double(i)}, 1.0));
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    const auto h = batch_all_pairs_minimizer(stream, loss, 1.0, 50);
    CHECK(h.weights[0] == 0.0);
    CHECK(aggregate_all_pairs_objective(loss, h, stream) == 0.0);
}

TEST_CASE("batch minimizer never loses to the origin") {
    RandomSource data_rng(17);
    const auto stream = mixed_stream(data_rng, 40, 3, 1.0);
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    const Hypothesis zero{std::vector<double>(3, 0.0), TaskKind::AucLinear};
    const auto h = batch_all_pairs_minimizer(stream, loss, 1.0, 100);
    CHECK(aggregate_all_pairs_objective(loss, h, stream) <=
          aggregate_all_pairs_objective(loss, zero, stream));
}

TEST_CASE("aggregate objective matches the per-step penalty sum") {
    RandomSource data_rng(19);
    const auto stream = mixed_stream(data_rng, 25, 3, 1.0);
    for (double sigma : {0.0, 0.3}) {
        const PairwiseLoss loss{TaskKind::AucLinear, sigma};
        RandomSource wr(23);
        std::vector<double> w(3);
        for (auto& x : w) x = 2.0 * wr.next_real() - 1.0;
        const Hypothesis h{w, TaskKind::AucLinear};
        double generic = 0.0;
        for (std::size_t t = 1; t < stream.size(); ++t)
            generic += all_pairs_penalty(loss, h, stream[t], std::span(stream).subspan(0, t));
        CHECK(aggregate_all_pairs_objective(loss, h, stream) ==
              doctest::Approx(generic).epsilon(1e-12));
    }
}

TEST_CASE("step schedule decreases") {
    for (std::size_t t = 2; t < 100; ++t)
        CHECK(1.0 / std::sqrt(double(t)) < 1.0 / std::sqrt(double(t - 1)));
}
