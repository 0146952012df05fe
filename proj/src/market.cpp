#include "swcurve/market.hpp"

#include <map>
#include <string>

#include "swcurve/errors.hpp"
#include "swcurve/kernels.hpp"

namespace swcurve {

double annual_to_continuous(double annual_rate) {
    if (!(annual_rate > -1.0) || !std::isfinite(annual_rate))
        throw InvalidInput("annual rate must be finite and > -100%");
    return std::log1p(annual_rate);
}

MarketCurve MarketCurve::from_spot_rates(std::vector<double> tenors, std::vector<double> rates) {
    MarketCurve m{std::move(tenors), QuoteKind::SpotRates, std::move(rates)};
    m.validate();
    return m;
}

MarketCurve MarketCurve::from_annual_rates(std::vector<double> tenors,
                                           std::span<const double> annual) {
    std::vector<double> rates;
    rates.reserve(annual.size());
    for (double r : annual) rates.push_back(annual_to_continuous(r));
    return from_spot_rates(std::move(tenors), std::move(rates));
}

MarketCurve MarketCurve::from_prices(std::vector<double> tenors, std::vector<double> prices) {
    MarketCurve m{std::move(tenors), QuoteKind::Prices, std::move(prices)};
    m.validate();
    return m;
}

void MarketCurve::validate() const {
    if (tenors.size() != values.size())
        throw InvalidInput("market: " + std::to_string(tenors.size()) + " tenors but " +
                           std::to_string(values.size()) + " quotes");
    validate_tenor_grid(tenors);
    for (std::size_t i = 0; i < values.size(); ++i) {
        if (!std::isfinite(values[i])) throw InvalidInput("market: non-finite quote");
        if (kind == QuoteKind::Prices && values[i] <= 0.0)
            throw InvalidInput("market: price at index " + std::to_string(i) + " is not positive");
    }
}

std::vector<double> MarketCurve::prices() const {
    if (kind == QuoteKind::Prices) return values;
    std::vector<double> p(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) p[i] = std::exp(-values[i] * tenors[i]);
    return p;
}

std::vector<double> MarketCurve::spot_rates() const {
    if (kind == QuoteKind::SpotRates) return values;
    std::vector<double> r(values.size());
    for (std::size_t i = 0; i < values.size(); ++i) r[i] = -std::log(values[i]) / tenors[i];
    return r;
}

void CurveConfig::validate() const {
    if (!std::isfinite(ufr) || ufr <= -1.0) throw InvalidInput("config: ufr must be > -100%");
    if (!(omega() > 0.0)) throw InvalidInput("config: ufr must be positive");
    if (!(cp > 0.0)) throw InvalidInput("config: cp must be > 0");
    if (!(alpha_min > 0.0 && alpha_min < alpha_max))
        throw InvalidInput("config: need 0 < alpha_min < alpha_max");
    if (!(tolerance > 0.0)) throw InvalidInput("config: tolerance must be > 0");
    if (!(scan_step > 0.0)) throw InvalidInput("config: scan_step must be > 0");
    if (!(horizon > 0.0)) throw InvalidInput("config: horizon must be > 0");
}

void CurveConfig::validate_for(const MarketCurve& market) const {
    validate();
    if (cp < market.last_tenor())
        throw InvalidInput("config: cp (" + std::to_string(cp) + ") precedes the last liquid point (" +
                           std::to_string(market.last_tenor()) + ")");
}

void CashFlowSchedule::validate() const {
    if (times.size() != amounts.size()) throw InvalidInput("cash flows: times/amounts length mismatch");
    for (std::size_t i = 0; i < times.size(); ++i) {
        if (!std::isfinite(times[i]) || times[i] < 0.0)
            throw InvalidInput("cash flows: time " + std::to_string(i) + " must be finite and >= 0");
        if (i > 0 && !(times[i] > times[i - 1]))
            throw InvalidInput("cash flows: times must be strictly increasing");
        if (!std::isfinite(amounts[i])) throw InvalidInput("cash flows: non-finite amount");
    }
}

CashFlowSchedule operator+(const CashFlowSchedule& a, const CashFlowSchedule& b) {
    std::map<double, double> merged;
    for (std::size_t i = 0; i < a.size(); ++i) merged[a.times[i]] += a.amounts[i];
    for (std::size_t i = 0; i < b.size(); ++i) merged[b.times[i]] += b.amounts[i];
    CashFlowSchedule out;
    for (const auto& [t, c] : merged) {
        out.times.push_back(t);
        out.amounts.push_back(c);
    }
    return out;
}

}  // namespace swcurve
