#include <gtest/gtest.h>

#include <cmath>

#include "corpus.hpp"
#include "swcurve/errors.hpp"
#include "swcurve/stress.hpp"

using namespace swcurve;
using namespace swcurve::testing;

TEST(Stress, ZeroShiftLeavesCurveUnchanged) {
    const auto market = ten_year();
    const auto config = config_cp(20);
    const auto base = calibrate_alpha(market, config);
    for (auto scheme : {StressScheme::NaiveFullCurve, StressScheme::StressToLLPThenRecalibrate,
                        StressScheme::StressForwardsToUFR}) {
        const auto r = apply_stress(market, StressSpec::uniform(0.0, scheme), config);
        EXPECT_EQ(r.stressed_market.values, market.values) << to_string(scheme);
        EXPECT_DOUBLE_EQ(r.report.alpha_stressed, r.report.alpha_base);
        for (double t : {3.0, 15.0, 40.0}) EXPECT_DOUBLE_EQ(r.curve.discount(t), base.curve.discount(t));
    }
}

TEST(Stress, NaiveStressMovesTheUltimateForward) {
    const auto config = config_cp(60);
    for (auto dir : {StressDirection::Up, StressDirection::Down}) {
        const auto spec = StressSpec::from_table(ShiftTable::default_table(), dir, StressScheme::NaiveFullCurve);
        const auto r = apply_stress(flat_eur(), spec, config);
        EXPECT_GT(r.report.forward_gap_at_cp, 1e-4);
        EXPECT_FALSE(r.report.within_tolerance);
        EXPECT_NEAR(r.report.forward_gap_at_cp, std::abs(spec.shift_at(config.cp)) * config.omega(), 1e-12);
    }
}

TEST(Stress, ForwardSchemeKeepsUltimateForward) {
    const auto config = config_cp(60);
    const auto spec =
        StressSpec::from_table(ShiftTable::default_table(), StressDirection::Up, StressScheme::StressForwardsToUFR);
    const auto r = apply_stress(flat_eur(), spec, config);
    EXPECT_LE(r.report.forward_gap_at_cp, 1e-4);
    EXPECT_TRUE(r.report.within_tolerance);
    EXPECT_DOUBLE_EQ(r.report.alpha_stressed, r.report.alpha_base);
    // The stressed market rates go up where the shift is positive.
    for (std::size_t i = 0; i < r.stressed_market.size(); ++i)
        EXPECT_GT(r.stressed_market.values[i], flat_eur().values[i]);
}

TEST(Stress, ShiftLookupUsesNearestTenor) {
    StressSpec s;
    s.shifts = {{1.0, 0.5}, {3.0, 0.3}};
    EXPECT_DOUBLE_EQ(s.shift_at(0.2), 0.5);
    EXPECT_DOUBLE_EQ(s.shift_at(2.0), 0.5);
    EXPECT_DOUBLE_EQ(s.shift_at(2.1), 0.3);
    EXPECT_DOUBLE_EQ(s.shift_at(50.0), 0.3);
    EXPECT_THROW(StressSpec{}.shift_at(1.0), InvalidInput);
}

TEST(Stress, RegulatoryFloorBeyondNinetyYears) {
    const auto ok = StressSpec::from_table(ShiftTable::default_table(), StressDirection::Down,
                                           StressScheme::NaiveFullCurve);
    EXPECT_TRUE(regulatory_floor_violations(ok).empty());
    ShiftTable t{{10, 100}, {0.3, 0.1}, {0.3, 0.3}};
    const auto bad = StressSpec::from_table(t, StressDirection::Up, StressScheme::NaiveFullCurve);
    ASSERT_EQ(regulatory_floor_violations(bad).size(), 1u);
    EXPECT_DOUBLE_EQ(regulatory_floor_violations(bad)[0], 100.0);
}

TEST(Stress, SchemeNamesRoundTrip) {
    for (auto s : {StressScheme::NaiveFullCurve, StressScheme::StressToLLPThenRecalibrate,
                   StressScheme::StressForwardsToUFR})
        EXPECT_EQ(parse_scheme(to_string(s)), s);
    EXPECT_THROW(parse_scheme("parallel"), InvalidInput);
}

TEST(Stress, PriceQuotedMarketIsRejected) {
    const auto m = MarketCurve::from_prices({1, 2}, {0.99, 0.97});
    EXPECT_THROW(apply_stress(m, StressSpec::uniform(0.1, StressScheme::NaiveFullCurve), config_cp(60)),
                 InvalidInput);
}

TEST(Stress, PositiveShiftRaisesEveryObservedRate) {
    const auto r = apply_stress(steep_eur(), StressSpec::uniform(0.2, StressScheme::NaiveFullCurve), config_cp(60));
    for (std::size_t i = 0; i < r.stressed_market.size(); ++i)
        EXPECT_GT(r.stressed_market.values[i], steep_eur().values[i]);
}

TEST(Stress, UniformShiftOnFlatMarket) {
    const auto config = config_cp(60);
    const auto naive = apply_stress(flat_eur(), StressSpec::uniform(0.2, StressScheme::NaiveFullCurve), config);
    EXPECT_NEAR(naive.report.forward_gap_at_cp, 0.2 * config.omega(), 1e-12);
    const auto fwd = apply_stress(flat_eur(), StressSpec::uniform(0.2, StressScheme::StressForwardsToUFR), config);
    EXPECT_LE(fwd.report.forward_gap_at_cp, config.tolerance);
}
