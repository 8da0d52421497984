#include <gtest/gtest.h>

#include "slowfast/classify.hpp"
#include "slowfast/errors.hpp"
#include "support.hpp"

using namespace slowfast;
using slowfast::testing::cosine;
using slowfast::testing::pi;
using slowfast::testing::unit_interval;

namespace {

Trajectory run(const Field& u0, double t_end, std::size_t stride = 100, bool grow = false) {
    SolverConfig c;
    c.t_end = t_end;
    c.sample_stride = stride;
    c.grow_dt = grow;
    return evolve(u0, c);
}

// e^{-lambda t} phi sampled every 0.1 without a solver.
Trajectory linear_mode(const GridPtr& g, double t_end) {
    Trajectory tr(g, 2.0);
    const Field phi = cosine(g);
    for (int i = 0; i * 0.1 <= t_end + 1e-12; ++i) {
        const double t = i * 0.1;
        tr.append(measure_sample(std::exp(-t) * phi, 2.0, t, i == 0 ? 0.0 : 0.1));
    }
    return tr;
}

}  // namespace

TEST(Tags, StringsRoundTrip) {
    for (Tag t : {Tag::null_solution, Tag::positive_slow, Tag::negative_slow, Tag::fast}) {
        EXPECT_EQ(tag_from_string(to_string(t)), t);
    }
    EXPECT_EQ(to_string(Tag::positive_slow), "PositiveSlow");
    EXPECT_THROW(tag_from_string("Slow"), std::invalid_argument);
    EXPECT_TRUE(is_slow(Tag::negative_slow));
    EXPECT_FALSE(is_slow(Tag::fast));
}

TEST(SignAnalysis, PositiveDataAreSignedFromTheStart) {
    const auto s = sign_analysis(run(cosine(unit_interval()) + 2.0, 10.0));
    ASSERT_TRUE(s.has_value());
    EXPECT_EQ(*s, 0.0);
}

TEST(SignAnalysis, OddDataNeverAcquireASign) {
    EXPECT_FALSE(sign_analysis(run(cosine(unit_interval()), 50.0)).has_value());
}

TEST(SignAnalysis, SmallPositiveOffsetEventuallySigned) {
    const auto s = sign_analysis(run(cosine(unit_interval()) + 0.05, 20.0));
    ASSERT_TRUE(s.has_value());
    EXPECT_GT(*s, 0.0);
    EXPECT_LT(*s, 20.0);
}

TEST(SlowProfile, ConstantDataMatchClosedFormRatio) {
    const Trajectory tr = run(Field(unit_interval(17), 1.0), 100.0, 500);
    const double stat = slow_profile_statistic(tr, {50.0, 100.0});
    EXPECT_LE(stat, 0.02);
    // |sqrt(2t/(1+2t)) - 1| is largest at the window start.
    const double expected = 1.0 - std::sqrt(100.0 / 101.0);
    EXPECT_NEAR(stat, expected, 1e-4);
}

TEST(SlowProfile, FastTrajectorySignalsNoiseFloor) {
    const Trajectory tr = run(cosine(unit_interval()), 50.0);
    EXPECT_THROW(slow_profile_statistic(tr, {25.0, 50.0}), NoiseFloorError);
    EXPECT_THROW(slow_profile_statistic(tr, {5.0, 10.0}), NoiseFloorError);
}

TEST(SlowProfile, ShiftedStatisticRecoversTheShift) {
    // Constant data: |u| = (p(t + 1/p))^{-1/p} exactly, so the fitted shift is 1/2.
    const Trajectory tr = run(Field(unit_interval(17), 1.0), 60.0, 500);
    const ShiftedProfile s = shifted_profile_statistic(tr, {30.0, 60.0});
    EXPECT_NEAR(s.shift, 0.5, 1e-3);
    EXPECT_LE(s.error, 1e-4);
}

TEST(FastRate, LinearModeGivesUnitRate) {
    const Trajectory tr = linear_mode(unit_interval(), 20.0);
    const RateFit f = fast_rate_fit(tr, TimeWindow{2.0, 20.0});
    EXPECT_NEAR(f.rate, 1.0, 1e-3);
    EXPECT_FALSE(f.truncated);
}

TEST(FastRate, NonlinearCosineInMidWindow) {
    const Trajectory tr = run(cosine(unit_interval()), 20.0);
    const RateFit f = fast_rate_fit(tr, TimeWindow{5.0, 15.0});
    EXPECT_NEAR(f.rate, 1.0, 0.1);
    const GridPtr g = unit_interval();
    const double h = g->spacing(0);
    const double lambda_h = 4.0 / (h * h) * std::pow(std::sin(h / 2.0), 2);
    EXPECT_NEAR(f.rate, effective_decay_rate(lambda_h, 1e-3), 1e-3);
}

TEST(FastRate, ZeroTrajectorySignals) {
    const Trajectory tr = run(Field(unit_interval(17), 0.0), 10.0);
    EXPECT_THROW(fast_rate_fit(tr, TimeWindow{0.0, 10.0}), NoiseFloorError);
}

TEST(FastRate, ShortWindowSignals) {
    const Trajectory tr = linear_mode(unit_interval(33), 2.0);
    EXPECT_THROW(fast_rate_fit(tr, TimeWindow{1.0, 1.5}), NoiseFloorError);
}

TEST(FastRate, EffectiveRateCompensatesBackwardEuler) {
    EXPECT_NEAR(effective_decay_rate(1.0, 1e-3), std::log1p(1e-3) / 1e-3, 1e-15);
    EXPECT_LT(effective_decay_rate(1.0, 0.1), 1.0);
}

TEST(Classify, ZeroIsNull) {
    const Classification c = classify(run(Field(unit_interval(33), 0.0), 20.0));
    EXPECT_EQ(c.tag, Tag::null_solution);
}

TEST(Classify, PositiveDataAreSlow) {
    const Classification c = classify(run(cosine(unit_interval()) + 2.0, 50.0));
    EXPECT_EQ(c.tag, Tag::positive_slow);
}

TEST(Classify, NegativeDataAreSlow) {
    const Classification c = classify(run(-(cosine(unit_interval()) + 2.0), 50.0));
    EXPECT_EQ(c.tag, Tag::negative_slow);
}

TEST(Classify, OddCosineIsFastWithUnitRate) {
    const Trajectory tr = run(cosine(unit_interval()), 50.0);
    const Classification c = classify(tr);
    ASSERT_EQ(c.tag, Tag::fast);
    ASSERT_TRUE(c.fast_rate.has_value());
    EXPECT_NEAR(*c.fast_rate, 1.0, 0.1);
    EXPECT_EQ(*c.matched_eigenvalue, 1.0);
    for (const Sample& s : tr.samples()) {
        if (s.linf > 1e-12) {
            EXPECT_LT(s.min * s.max, 0.0) << s.t;
        }
    }
}

TEST(Classify, SecondModeMatchesEigenvalueFour) {
    const Classification c = classify(run(cosine(unit_interval(), 1.0, 2.0), 20.0, 20));
    ASSERT_EQ(c.tag, Tag::fast);
    EXPECT_EQ(*c.matched_eigenvalue, 4.0);
}

TEST(Classify, SlowTagImpliesPersistentSignAndProfile) {
    const Trajectory tr = run(cosine(unit_interval()) + 0.05, 50.0);
    const Classification c = classify(tr);
    ASSERT_EQ(c.tag, Tag::positive_slow);
    ASSERT_TRUE(c.sign_persistent_from.has_value());
    for (const Sample& s : tr.samples()) {
        if (s.t >= *c.sign_persistent_from) {
            EXPECT_GT(s.min, 0.0);
        }
    }
    const double best = std::min(c.slow_profile_error.value_or(1.0), c.shifted_profile_error.value_or(1.0));
    EXPECT_LE(best, 0.05);
}

TEST(Classify, PositiveScalingKeepsPositiveSlow) {
    const Field base = Field::from_function(unit_interval(), [](double x, double) { return 1.0 + 0.5 * std::cos(x) + x / 10; });
    for (double c : {0.01, 0.5, 3.0}) {
        EXPECT_EQ(classify(run(c * base, 50.0, 100, true)).tag, Tag::positive_slow) << c;
    }
}

TEST(Classify, InconclusiveCarriesPartialStatistics) {
    // A signed trajectory that neither decays like a power nor exponentially.
    const GridPtr g = unit_interval(9);
    Trajectory tr(g, 2.0);
    for (int i = 0; i <= 200; ++i) tr.append(measure_sample(Field(g, 1.0), 2.0, 0.1 * i, 0.1));
    try {
        classify(tr);
        FAIL() << "expected InconclusiveError";
    } catch (const InconclusiveError& e) {
        EXPECT_EQ(e.report().at("tag"), "Inconclusive");
        EXPECT_TRUE(e.report().contains("reason"));
        EXPECT_TRUE(e.report().contains("statistics"));
    }
}

TEST(Classify, RejectsShortHorizon) {
    EXPECT_THROW(classify(run(cosine(unit_interval(33)), 5.0)), std::invalid_argument);
    ClassifyConfig cfg;
    cfg.min_horizon = 1.0;
    EXPECT_NO_THROW(classify(run(Field(unit_interval(33), 1.0), 5.0), cfg));
}

TEST(Classify, JsonReport) {
    const ClassifyConfig cfg;
    const Classification c = classify(run(Field(unit_interval(17), 1.0), 20.0), cfg);
    const auto j = c.to_json(cfg);
    EXPECT_EQ(j.at("tag"), "PositiveSlow");
    EXPECT_TRUE(j.at("statistics").contains("slow_profile_error"));
    EXPECT_EQ(j.at("thresholds").at("slow_tolerance"), 0.05);
    EXPECT_EQ(j.at("sample_count"), c.sample_count);
}

TEST(ClassifyConfig, Validation) {
    ClassifyConfig c;
    c.slow_tolerance = 1.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
    c = ClassifyConfig{};
    c.noise_floor = 0.0;
    EXPECT_THROW(c.validate(), std::invalid_argument);
}

TEST(Classify, ReflectionSymmetryOfTheDiscreteFlow) {
    const GridPtr g = unit_interval(129);
    const Field f = Field::from_function(g, [](double x, double) { return std::cos(x) + 0.4 * std::sin(2 * x) + x * x; });
    const std::size_t n = g->size();
    Field odd(g, 0.0);
    for (std::size_t i = 0; i < n; ++i) odd[i] = 0.5 * (f[i] - f[n - 1 - i]);
    SolverConfig c;
    c.t_end = 5.0;
    double worst = 0.0;
    evolve(odd, c, [&](double, const Field& u) {
        for (std::size_t i = 0; i < n; ++i) worst = std::max(worst, std::abs(u[i] + u[n - 1 - i]));
    });
    EXPECT_LE(worst, 1e-10);
}
