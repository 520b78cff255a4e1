#include <cmath>
#include <sstream>

#include "doctest.h"
#include "pairstream/data.hpp"
#include "pairstream/eval.hpp"

using namespace pairstream;

TEST_CASE("libsvm basic rows") {
    std::istringstream in("+1 1:0.5 3:2.0\n-1\n");
    const auto ds = parse_libsvm(in, "t");
    REQUIRE(ds.size() == 2);
    CHECK(ds.dimension == 3);
    CHECK(ds.points[0].label == 1.0);
    CHECK(ds.points[0].features == std::vector<double>{0.5, 0.0, 2.0});
    CHECK(ds.points[1].label == -1.0);
    CHECK(ds.points[1].features == std::vector<double>{0.0, 0.0, 0.0});
}

TEST_CASE("libsvm comments and label binarization") {
    std::istringstream in("# header comment\n2 1:1.0  # trailing\n0 1:-1\n");
    const auto ds = parse_libsvm(in);
    CHECK(ds.points[0].label == 1.0);   // 2 > 0
    CHECK(ds.points[1].label == -1.0);  // 0 <= 0
}

TEST_CASE("libsvm parse errors carry line numbers") {
    {
        std::istringstream in("abc 1:1\n");
        CHECK_THROWS_WITH_AS(static_cast<void>(parse_libsvm(in)),
                             "line 1: non-numeric label 'abc'", std::runtime_error);
    }
    {
        std::istringstream in("+1 1:1\n-1 3:1 2:5\n");
        CHECK_THROWS_WITH_AS(static_cast<void>(parse_libsvm(in)),
                             "line 2: feature indices must be ascending", std::runtime_error);
    }
    {
        std::istringstream in("+1 5\n");
        CHECK_THROWS(static_cast<void>(parse_libsvm(in)));
    }
}

TEST_CASE("multi-class labels need a mapping") {
    std::istringstream in("1 1:1\n2 1:2\n3 1:3\n");
    CHECK_THROWS(static_cast<void>(parse_libsvm(in)));

    std::istringstream again("1 1:1\n2 1:2\n3 1:3\n");
    const auto ds = parse_libsvm(again, "", LabelMapping{{2.0, 3.0}});
    CHECK(ds.points[0].label == -1.0);
    CHECK(ds.points[1].label == 1.0);
    CHECK(ds.points[2].label == 1.0);
}

TEST_CASE("parse-serialize-parse round trip") {
    RandomSource rng(5);
    Dataset ds;
    ds.dimension = 6;
    for (int i = 0; i < 40; ++i) {
        LabeledPoint point;
        point.label = rng.bernoulli(0.5) ? 1.0 : -1.0;
        point.features.resize(6, 0.0);
        for (auto& v : point.features)
            if (rng.bernoulli(0.6)) v = 2.0 * rng.next_real() - 1.0;
        ds.points.push_back(std::move(point));
    }
    // Keep at least one point with the max index so the dimension survives.
    ds.points[0].features[5] = 0.25;

    std::ostringstream out;
    write_libsvm(ds, out);
    std::istringstream in(out.str());
    const auto back = parse_libsvm(in);
    REQUIRE(back.size() == ds.size());
    CHECK(back.dimension == ds.dimension);
    for (std::size_t i = 0; i < ds.size(); ++i) {
        CHECK(back.points[i].label == ds.points[i].label);
        CHECK(back.points[i].features == ds.points[i].features);
    }
}

TEST_CASE("split sizes and partition property") {
    RandomSource gen(3);
    const auto ds = synth_gaussian(60, 40, 3, 1.0, gen);

    RandomSource rng(11);
    const auto [train, test] = split(ds, SplitSpec{0.6, 20000, 0}, rng);
    CHECK(train.size() == 60);
    CHECK(test.size() == 40);

    // Multiset partition: feature sums match.
    double total = 0.0, got = 0.0;
    for (const auto& p : ds.points) total += p.features[0];
    for (const auto& p : train.points) got += p.features[0];
    for (const auto& p : test.points) got += p.features[0];
    CHECK(got == doctest::Approx(total).epsilon(1e-9));

    RandomSource rng2(11);
    const auto [capped, rest] = split(ds, SplitSpec{0.9, 25, 0}, rng2);
    CHECK(capped.size() == 25);
    CHECK(rest.size() == 75);

    CHECK_THROWS(static_cast<void>(split(ds, SplitSpec{1.0, 20000, 0})));
}

TEST_CASE("split is deterministic via the embedded seed") {
    RandomSource gen(4);
    const auto ds = synth_gaussian(30, 30, 2, 1.0, gen);
    const auto [a_train, a_test] = split(ds, SplitSpec{0.5, 1000, 17});
    const auto [b_train, b_test] = split(ds, SplitSpec{0.5, 1000, 17});
    for (std::size_t i = 0; i < a_train.size(); ++i)
        CHECK(a_train.points[i].features == b_train.points[i].features);
}

TEST_CASE("synthetic gaussians are deterministic and centered") {
    RandomSource a(9), b(9);
    const auto d1 = synth_gaussian(50, 50, 4, 3.0, a);
    const auto d2 = synth_gaussian(50, 50, 4, 3.0, b);
    for (std::size_t i = 0; i < d1.size(); ++i)
        CHECK(d1.points[i].features == d2.points[i].features);

    double pos_mean = 0.0, neg_mean = 0.0;
    for (const auto& p : d1.points)
        (p.label > 0 ? pos_mean : neg_mean) += p.features[0];
    pos_mean /= 50.0;
    neg_mean /= 50.0;
    CHECK(pos_mean > 0.5);
    CHECK(neg_mean < -0.5);
}

TEST_CASE("zero separation is chance level") {
    RandomSource rng(31);
    const auto ds = synth_gaussian(400, 400, 2, 0.0, rng);
    const Hypothesis h{{1.0, 0.0}, TaskKind::AucLinear};
    CHECK(std::abs(auc_score(h, ds) - 0.5) < 0.05);

    // A learned hypothesis does no better on indistinguishable classes.
    const auto [train, test] = split(ds, SplitSpec{0.6, 20000, 3});
    RandomSource shuffle(4);
    const auto stream = make_stream(train, shuffle);
    LearnerConfig config;
    config.buffer_capacity = 16;
    config.loss = PairwiseLoss{TaskKind::AucLinear, 0.0};
    config.dimension = 2;
    RandomSource learner(5);
    const auto trace = olp_run(stream, config, learner);
    CHECK(std::abs(auc_score(average_hypothesis(trace), test) - 0.5) < 0.05);
}

TEST_CASE("wide separation is nearly separable for the batch minimizer") {
    RandomSource rng(37);
    auto ds = synth_gaussian(80, 80, 2, 6.0, rng);
    RandomSource shuffle(2);
    const auto stream = make_stream(ds, shuffle);
    const PairwiseLoss loss{TaskKind::AucLinear, 0.0};
    const auto h = batch_all_pairs_minimizer(stream, loss, 1.0, 200);
    CHECK(auc_score(h, ds) >= 0.99);
}

TEST_CASE("normalization") {
    Dataset ds;
    ds.dimension = 2;
    ds.points = {{{3.0, 4.0}, 1.0}, {{0.0, 0.0}, -1.0}};
    const auto unit = normalize_features(ds, NormalizeMode::UnitL2);
    CHECK(unit.points[0].features[0] == doctest::Approx(0.6));
    CHECK(unit.points[0].features[1] == doctest::Approx(0.8));
    CHECK(unit.points[1].features == std::vector<double>{0.0, 0.0});
    CHECK(max_feature_norm(unit) <= 1.0 + 1e-12);

    const auto same = normalize_features(ds, NormalizeMode::None);
    CHECK(same.points[0].features == ds.points[0].features);
}
