#pragma once

#include <cmath>
#include <span>
#include <vector>

namespace swcurve {

enum class QuoteKind { SpotRates, Prices };

/// Observed zero-coupon quotes. Spot rates are continuously compounded;
/// annually compounded quotes are converted on ingestion.
struct MarketCurve {
    std::vector<double> tenors;
    QuoteKind kind = QuoteKind::SpotRates;
    std::vector<double> values;

    static MarketCurve from_spot_rates(std::vector<double> tenors, std::vector<double> rates);
    static MarketCurve from_annual_rates(std::vector<double> tenors, std::span<const double> annual);
    static MarketCurve from_prices(std::vector<double> tenors, std::vector<double> prices);

    void validate() const;
    std::size_t size() const noexcept { return tenors.size(); }
    double last_tenor() const { return tenors.back(); }

    /// p_i = exp(-r_i u_i) for rate quotes, the quotes themselves otherwise.
    std::vector<double> prices() const;
    /// Continuously compounded rates; prices must be positive.
    std::vector<double> spot_rates() const;
};

struct CurveConfig {
    double ufr = 0.042;
    double cp = 60.0;
    double alpha_min = 0.05;
    double alpha_max = 1.0;
    double tolerance = 1e-4;
    double scan_step = 1e-3;
    /// Horizon of the discount-factor health grid (years).
    double horizon = 121.0;

    double omega() const { return std::log1p(ufr); }
    void validate() const;
    /// Throws unless cp >= last market tenor.
    void validate_for(const MarketCurve& market) const;
};

/// Deterministic cash flows: amounts[k] paid at times[k].
struct CashFlowSchedule {
    std::vector<double> times;
    std::vector<double> amounts;

    void validate() const;
    bool empty() const noexcept { return times.empty(); }
    std::size_t size() const noexcept { return times.size(); }

    static CashFlowSchedule single(double t, double amount) { return {{t}, {amount}}; }
};

/// Component-wise sum of two schedules on the union of their payment times.
CashFlowSchedule operator+(const CashFlowSchedule& a, const CashFlowSchedule& b);

double annual_to_continuous(double annual_rate);

}  // namespace swcurve
