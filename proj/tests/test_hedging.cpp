#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "corpus.hpp"
#include "swcurve/errors.hpp"
#include "swcurve/hedging.hpp"

using namespace swcurve;
using namespace swcurve::testing;

// Unit zero-coupon liability at 30 on the flat market, computed at 50 digits with mpmath.
TEST(Hedging, FlatMarketWeightsMatchHighPrecisionReference) {
    const std::vector<double> expected = {3.28753308837088e-6,  -1.37041507068728e-5, 5.35565548900993e-5,
                                          -0.000208372150092832, 0.000810453903567172, -0.00315215113486476,
                                          0.0122598465189286,   -0.0476829354081123, 0.185456017446696,
                                          -0.384889186675673,   0.764649929600062,    -1.63661696494152,
                                          1.96123680810196};
    const auto r = hedge_weights(build_curve(flat_eur(), 0.05, config_cp(60)), 30.0);
    ASSERT_EQ(r.beta.size(), expected.size());
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(r.beta[i], expected[i], 1e-9) << i;
    EXPECT_TRUE(sign_pattern_check(r, expected.size()).holds);
}

TEST(Hedging, AffineRepresentationReproducesCurve) {
    for (const auto& e : corpus()) {
        const auto curve = build_curve(e.market, 0.15, e.config);
        const auto p = e.market.prices();
        for (double t : {0.5, 7.5, 30.0, 80.0}) {
            const auto r = hedge_weights(curve, t);
            double v = r.beta0;
            for (std::size_t i = 0; i < p.size(); ++i) v += r.beta[i] * p[i];
            EXPECT_NEAR(v, curve.discount(t), 1e-10) << e.name << " t " << t;
        }
    }
}

TEST(Hedging, WeightsAreThePriceSensitivities) {
    const auto market = ten_year();
    const auto config = config_cp(20);
    const double alpha = 0.25;
    const double t = 35.0;
    const auto r = hedge_weights(build_curve(market, alpha, config), t);
    const auto p = market.prices();
    for (std::size_t i = 0; i < p.size(); ++i) {
        auto bumped = p;
        bumped[i] += 1e-3;
        const double d =
            (build_curve(MarketCurve::from_prices(market.tenors, bumped), alpha, config).discount(t) -
             build_curve(market, alpha, config).discount(t)) / 1e-3;
        EXPECT_NEAR(d, r.beta[i], 1e-9) << i;
    }
}

TEST(Hedging, LiabilitiesAtSupportingTenorsAreHedgedOneForOne) {
    const auto curve = build_curve(ten_year(), 0.2, config_cp(20));
    const CashFlowSchedule l{{2, 5, 10}, {10, 20, 30}};
    const auto r = hedge_weights_cashflow(curve, l);
    const std::vector<double> expected = {0, 10, 0, 0, 20, 0, 0, 0, 0, 30};
    for (std::size_t i = 0; i < expected.size(); ++i) EXPECT_NEAR(r.beta[i], expected[i], 1e-10);
    EXPECT_NEAR(r.beta0, 0.0, 1e-10);
    EXPECT_NEAR(gross_exposure_ratio(r), 1.0, 1e-12);
}

TEST(Hedging, GrossRatioNeedsPositiveValue) {
    const auto curve = build_curve(ten_year(), 0.2, config_cp(20));
    const auto r = hedge_weights_cashflow(curve, CashFlowSchedule{{1, 2}, {1, -1.5}});
    EXPECT_THROW(gross_exposure_ratio(r), UndefinedRatio);
}

TEST(Hedging, DurationMatchesParallelSpotBump) {
    for (const auto& e : corpus()) {
        const double alpha = 0.2;
        const auto l = geometric_liabilities();
        const auto d = modified_duration_sw(build_curve(e.market, alpha, e.config), l);
        const auto r = e.market.spot_rates();
        const double h = 1e-6;
        auto pv = [&](double shift) {
            std::vector<double> s = r;
            for (double& x : s) x += shift;
            return build_curve(MarketCurve::from_spot_rates(e.market.tenors, s), alpha, e.config).present_value(l);
        };
        const double fd = -(pv(h) - pv(-h)) / (2 * h) / d.present_value;
        EXPECT_NEAR(d.definitional, fd, 1e-6 * std::abs(fd)) << e.name;
        EXPECT_NEAR(d.discrepancy, d.printed_closed_form - d.definitional, 1e-15);
    }
}

TEST(Hedging, MsepBoundsAndMonotoneInAlpha) {
    const auto market = ten_year();
    const auto config = config_cp(20);
    const auto curve = build_curve(market, 0.15, config);
    for (double t = 0.0; t <= 60.0; t += 0.5) {
        const double m = msep(curve, t);
        EXPECT_GE(m, 0.0);
        EXPECT_LE(m, curve.prior_variance(t) * (1 + 1e-12) + 1e-300);
    }
    for (double u : market.tenors) EXPECT_LE(msep(curve, u), 1e-12);
    double prev = msep(build_curve(market, 0.2, config), 20.0);
    for (double a : {0.1, 0.05, 0.02, 0.01}) {
        const double m = msep(build_curve(market, a, config), 20.0);
        EXPECT_LT(m, prev) << a;
        prev = m;
    }
}

TEST(Hedging, MMatrixClassification) {
    const std::vector<double> u = {1, 2, 4, 7, 10};
    EXPECT_TRUE(is_m_matrix(precision_matrix(KernelSpec(OUKernel{0.3, 0.1}), u)).is_m_matrix);
    const auto w = is_m_matrix(precision_matrix(KernelSpec(WilsonKernel{0.05, std::log(1.042)}), kEuroTenors));
    EXPECT_FALSE(w.is_m_matrix);
    EXPECT_FALSE(w.detail.empty());

    Eigen::Matrix2d a;
    a << -1, 0, 0, 1;
    EXPECT_EQ(is_m_matrix(a).failure, MMatrixVerdict::Failure::NonPositiveDiagonal);
    a << 1, 0.5, -0.5, 1;
    EXPECT_EQ(is_m_matrix(a).failure, MMatrixVerdict::Failure::PositiveOffDiagonal);
    a << 1, -2, -2, 1;
    EXPECT_EQ(is_m_matrix(a).failure, MMatrixVerdict::Failure::NonPositiveLeadingMinor);
    EXPECT_EQ(to_string(MMatrixVerdict::Failure::None), "none");
}

TEST(Hedging, OuKernelHedgeIsNonNegative) {
    const auto market = ten_year();
    const auto curve = build_curve(market, KernelSpec(OUKernel{0.4, 0.1}), std::log(1.042));
    for (double t : {11.0, 20.0, 50.0}) {
        const auto r = hedge_weights(curve, t);
        for (double b : r.beta) EXPECT_GE(b, -1e-12);
    }
}

TEST(Hedging, SignPatternCheckFlagsViolations) {
    HedgeReport r;
    r.beta = {0.1, -0.2, 0.3};
    EXPECT_TRUE(sign_pattern_check(r, 3).holds);
    r.beta = {0.1, 0.2, 0.3};
    const auto v = sign_pattern_check(r, 3);
    EXPECT_FALSE(v.holds);
    ASSERT_EQ(v.violations.size(), 1u);
    EXPECT_EQ(v.violations[0], 1u);
    r.beta = {0.0, -0.2, 0.3};
    EXPECT_EQ(sign_pattern_check(r, 3).checked, 2u);
    EXPECT_THROW(sign_pattern_check(r, 4), InvalidInput);
}

TEST(Hedging, NodeHedgesItself) {
    const auto curve = build_curve(steep_eur(), 0.2, config_cp(60));
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const auto r = hedge_weights(curve, curve.tenors()[i]);
        for (std::size_t j = 0; j < r.beta.size(); ++j) EXPECT_NEAR(r.beta[j], i == j ? 1.0 : 0.0, 1e-12);
        EXPECT_NEAR(r.beta0, 0.0, 1e-12);
    }
}

TEST(Hedging, CashflowReportsAggregateLinearly) {
    const auto curve = build_curve(ten_year(), 0.2, config_cp(20));
    const CashFlowSchedule a{{3, 17}, {2.0, 5.0}};
    const CashFlowSchedule b{{9.5, 40}, {-1.0, 3.0}};
    const auto ra = hedge_weights_cashflow(curve, a);
    const auto rb = hedge_weights_cashflow(curve, b);
    const auto rab = hedge_weights_cashflow(curve, a + b);
    for (std::size_t i = 0; i < rab.beta.size(); ++i) EXPECT_NEAR(rab.beta[i], ra.beta[i] + rb.beta[i], 1e-10);
    EXPECT_NEAR(rab.beta0, ra.beta0 + rb.beta0, 1e-10);
    EXPECT_NEAR(rab.liability_pv, ra.liability_pv + rb.liability_pv, 1e-12);

    const auto single = hedge_weights_cashflow(curve, CashFlowSchedule::single(27.0, 1.0));
    const auto direct = hedge_weights(curve, 27.0);
    EXPECT_EQ(single.beta, direct.beta);
}

TEST(Hedging, FlatMarketGrossRatioExceedsOne) {
    const auto r = hedge_weights(build_curve(flat_eur(), 0.05, config_cp(60)), 30.0);
    EXPECT_NEAR(gross_exposure_ratio(r), 9.1, 0.1);
}

TEST(Hedging, OuKernelGrossRatioIsAtMostOne) {
    const auto curve = build_curve(ten_year(), KernelSpec(OUKernel{0.4, 0.1}), std::log(1.042));
    const auto r = hedge_weights(curve, 25.0);
    ASSERT_GE(r.beta0, 0.0);
    EXPECT_LE(gross_exposure_ratio(r), 1.0 + 1e-10);
}

TEST(Hedging, ZeroCouponDurationIsMaturity) {
    const auto curve = build_curve(flat_eur(), 0.05, config_cp(60));
    const auto d = modified_duration_sw(curve, CashFlowSchedule::single(7.0, 1.0));
    EXPECT_NEAR(d.definitional, 7.0, 1e-12);
    const auto stream = modified_duration_sw(curve, geometric_liabilities());
    EXPECT_GT(stream.definitional, 6.0);
    EXPECT_LT(stream.definitional, 9.0);
}

TEST(Hedging, MMatrixEdgeCases) {
    EXPECT_TRUE(is_m_matrix(Eigen::MatrixXd::Identity(4, 4)).is_m_matrix);
    EXPECT_THROW(is_m_matrix(Eigen::MatrixXd::Ones(2, 3)), InvalidInput);
    const std::vector<double> u = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10};
    EXPECT_TRUE(is_m_matrix(precision_matrix(KernelSpec(OUKernel{0.1, 0.01}), u)).is_m_matrix);
}
