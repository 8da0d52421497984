#include <gtest/gtest.h>

#include <random>

#include "slowfast/errors.hpp"
#include "slowfast/random_fields.hpp"
#include "slowfast/separator.hpp"
#include "support.hpp"

using namespace slowfast;
using slowfast::testing::cosine;
using slowfast::testing::unit_interval;

namespace {

std::vector<Tag> tags(const std::vector<Classification>& cs) {
    std::vector<Tag> out;
    for (const auto& c : cs) out.push_back(c.tag);
    return out;
}

double phi(const Field& w0) { return compute_phi({w0, std::nullopt, {}}).phi; }

Field seeded_field(std::uint64_t seed) {
    std::mt19937_64 rng(seed);
    return random_band_limited(unit_interval(), 6, rng, 1.0);
}

}  // namespace

TEST(Bracket, FromSupNorm) {
    const auto [lo, hi] = initial_bracket(cosine(unit_interval()));
    EXPECT_DOUBLE_EQ(lo, -2.0);
    EXPECT_DOUBLE_EQ(hi, 2.0);
    const auto z = initial_bracket(Field(unit_interval(), 0.0));
    EXPECT_DOUBLE_EQ(z.first, -1.0);
    EXPECT_DOUBLE_EQ(z.second, 1.0);
}

TEST(Phi, ZeroDataGiveZero) {
    const SeparatorResult r = compute_phi({Field(unit_interval(), 0.0), std::nullopt, {}});
    EXPECT_EQ(r.phi, 0.0);
    EXPECT_TRUE(r.exact_hit);
}

TEST(Phi, OddCosineGivesZeroAndValidBracket) {
    const SeparatorResult r = compute_phi({cosine(unit_interval()), std::nullopt, {}});
    EXPECT_NEAR(r.phi, 0.0, 1e-3);
    EXPECT_LE(r.upper - r.lower, 2e-3 + 1e-15);
    EXPECT_LE(r.lower, r.phi);
    EXPECT_GE(r.upper, r.phi);
    EXPECT_EQ(r.lower_classification.tag, Tag::negative_slow);
    EXPECT_EQ(r.upper_classification.tag, Tag::positive_slow);
    ASSERT_GE(r.probes.size(), 2u);
    EXPECT_EQ(r.probes[0].k, -2.0);
    EXPECT_EQ(r.probes[1].k, 2.0);
    const auto j = r.to_json();
    EXPECT_EQ(j.at("probes").size(), r.probes.size());
    EXPECT_EQ(j.at("bracket_tags")[0], "NegativeSlow");
}

TEST(Phi, RandomDataBracketIsOpenOnBothSides) {
    const Field w0 = seeded_field(77);
    SeparatorSettings s;
    const SeparatorResult r = compute_phi({w0, std::nullopt, s});
    EXPECT_LE(r.upper - r.lower, 2.0 * s.tolerance + 1e-15);
    EXPECT_EQ(probe_offset(w0, r.phi + 10 * s.tolerance, s).classification.tag, Tag::positive_slow);
    EXPECT_EQ(probe_offset(w0, r.phi - 10 * s.tolerance, s).classification.tag, Tag::negative_slow);
}

TEST(Phi, RejectsNonzeroMean) {
    EXPECT_THROW(compute_phi({cosine(unit_interval()) + 0.1, std::nullopt, {}}), std::invalid_argument);
}

TEST(Phi, WrongBracketIsFalsified) {
    try {
        compute_phi({cosine(unit_interval()), std::make_pair(0.5, 1.0), {}});
        FAIL() << "expected Falsification";
    } catch (const Falsification& f) {
        EXPECT_EQ(f.report().at("tag"), "PositiveSlow");
        EXPECT_EQ(f.report().at("k"), 0.5);
    }
}

TEST(Phi, HorizonExhaustionKeepsPartialBracket) {
    SeparatorSettings s;
    s.solver.t_end = 10.0;
    s.max_horizon = 20.0;
    s.classifier.slow_tolerance = 1e-12;  // nothing can pass
    try {
        compute_phi({cosine(unit_interval(33)), std::nullopt, s});
        FAIL() << "expected HorizonExhausted";
    } catch (const HorizonExhausted& e) {
        EXPECT_TRUE(e.report().contains("bracket"));
        const auto& probes = e.report().at("probes");
        ASSERT_EQ(probes.size(), 2u);
        EXPECT_EQ(probes[0].at("horizon"), 10.0);
        EXPECT_EQ(probes[1].at("horizon"), 20.0);
        EXPECT_EQ(probes[1].at("tag"), "Inconclusive");
    }
}

TEST(Settings, Validation) {
    SeparatorSettings s;
    s.tolerance = 0.0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
    s = SeparatorSettings{};
    s.max_horizon = 10.0;
    EXPECT_THROW(s.validate(), std::invalid_argument);
}

TEST(Scan, CosineFlanksAndFastCentre) {
    const auto cs = monotonicity_scan(cosine(unit_interval()), {-0.5, -0.1, 0.0, 0.1, 0.5}, {});
    EXPECT_EQ(tags(cs), (std::vector<Tag>{Tag::negative_slow, Tag::negative_slow, Tag::fast, Tag::positive_slow,
                                          Tag::positive_slow}));
}

TEST(Scan, ZeroDataNullCentre) {
    const auto cs = monotonicity_scan(Field(unit_interval(65), 0.0), {-1.0, 0.0, 1.0}, {});
    EXPECT_EQ(tags(cs), (std::vector<Tag>{Tag::negative_slow, Tag::null_solution, Tag::positive_slow}));
}

TEST(Scan, JustAboveAFastOffsetIsSlow) {
    const Field w0 = cosine(unit_interval());
    EXPECT_EQ(probe_offset(w0, 0.0, {}).classification.tag, Tag::fast);
    EXPECT_EQ(probe_offset(w0, 0.01, {}).classification.tag, Tag::positive_slow);
    EXPECT_EQ(probe_offset(w0, -0.01, {}).classification.tag, Tag::negative_slow);
}

TEST(Scan, ShapePredicate) {
    using T = Tag;
    EXPECT_TRUE(is_monotone_sequence({}));
    EXPECT_TRUE(is_monotone_sequence({T::negative_slow, T::positive_slow}));
    EXPECT_TRUE(is_monotone_sequence({T::negative_slow, T::fast, T::positive_slow}));
    EXPECT_TRUE(is_monotone_sequence({T::fast}));
    EXPECT_FALSE(is_monotone_sequence({T::positive_slow, T::negative_slow}));
    EXPECT_FALSE(is_monotone_sequence({T::negative_slow, T::fast, T::fast, T::positive_slow}));
    EXPECT_FALSE(is_monotone_sequence({T::negative_slow, T::positive_slow, T::negative_slow}));
    EXPECT_FALSE(is_monotone_sequence({T::fast, T::null_solution}));
}

TEST(Lipschitz, IdenticalAndOppositeData) {
    const Field w = cosine(unit_interval());
    const LipschitzReport same = lipschitz_probe(w, w, {});
    EXPECT_LE(same.phi_gap, 2e-3);
    EXPECT_EQ(same.linf_distance, 0.0);
    const LipschitzReport opposite = lipschitz_probe(w, -w, {});
    EXPECT_LE(opposite.phi_gap, 2e-3);
    EXPECT_DOUBLE_EQ(opposite.linf_distance, 2.0);
}

TEST(Oddness, ZeroAndRandomData) {
    EXPECT_EQ(oddness_probe(Field(unit_interval(65), 0.0), {}).sum, 0.0);
    const OddnessReport r = oddness_probe(seeded_field(5), {});
    EXPECT_LE(std::abs(r.sum), 2e-3);
}

TEST(Continuity, SmallerPerturbationsMovePhiLess) {
    const Field w0 = seeded_field(31);
    const double base = phi(w0);
    double previous = INFINITY;
    for (double eta : {0.4, 0.1, 0.025}) {
        const Field w = w0 + eta * cosine(unit_interval(), 1.0, 12.0);
        const double shift = std::abs(phi(w) - base);
        EXPECT_LE(shift, previous + 2e-3) << eta;
        previous = shift;
    }
}
