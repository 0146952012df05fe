#pragma once

#include <cmath>
#include <vector>

#include "swcurve/market.hpp"

namespace swcurve::testing {

inline const std::vector<double> kEuroTenors = {1, 2, 3, 4, 5, 6, 7, 8, 9, 10, 12, 15, 20};

inline CurveConfig config_cp(double cp) {
    CurveConfig c;
    c.cp = cp;
    return c;
}

/// Flat 4.2% annual market; lies exactly on the UFR curve.
inline MarketCurve flat_eur() {
    return MarketCurve::from_annual_rates(kEuroTenors, std::vector<double>(kEuroTenors.size(), 0.042));
}

/// Annual rate t% at tenor t.
inline MarketCurve steep_eur() {
    std::vector<double> r;
    for (double t : kEuroTenors) r.push_back(t / 100.0);
    return MarketCurve::from_annual_rates(kEuroTenors, r);
}

/// Ten annual rates at tenors 1..10, used with CP = 20.
inline MarketCurve ten_year() {
    return MarketCurve::from_annual_rates({1, 2, 3, 4, 5, 6, 7, 8, 9, 10},
                                          std::vector<double>{0.02, 0.022, 0.024, 0.03, 0.032, 0.04, 0.05, 0.06,
                                                              0.0625, 0.075});
}

/// 10 / 1.1^k, truncated where the amount drops below 1e-9 (k <= 241).
inline CashFlowSchedule geometric_liabilities() {
    CashFlowSchedule s;
    for (int k = 1; k <= 241; ++k) {
        s.times.push_back(k);
        s.amounts.push_back(10.0 / std::pow(1.1, k));
    }
    return s;
}

struct CorpusEntry {
    const char* name;
    MarketCurve market;
    CurveConfig config;
};

inline std::vector<CorpusEntry> corpus() {
    return {{"flat_eur", flat_eur(), config_cp(60)},
            {"steep_eur", steep_eur(), config_cp(60)},
            {"ten_year", ten_year(), config_cp(20)}};
}

}  // namespace swcurve::testing
