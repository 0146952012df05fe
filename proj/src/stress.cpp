#include "swcurve/stress.hpp"

#include <cmath>
#include <iterator>

#include "swcurve/errors.hpp"

namespace swcurve {
namespace {

constexpr double kForwardGridStep = 0.25;

// Stress weight for the forward scheme: full up to the last liquid point,
// linear down to zero at the convergence point.
double forward_weight(double t, double llp, double cp) {
    if (t <= llp) return 1.0;
    if (t >= cp) return 0.0;
    return (cp - t) / (cp - llp);
}

// int_0^T s(x) w(x) f(x) dx by the trapezoid rule on a 0.25-year grid plus a partial cell.
double stress_increment(const SmithWilsonCurve& base, const StressSpec& spec, double llp, double cp, double T) {
    auto integrand = [&](double x) {
        const double s = spec.shift_at(x);
        if (s == 0.0) return 0.0;
        return s * forward_weight(x, llp, cp) * base.forward_intensity(x);
    };
    double sum = 0.0;
    double prev_t = 0.0;
    double prev_v = integrand(0.0);
    for (double t = kForwardGridStep; t < T - 1e-12; t += kForwardGridStep) {
        const double v = integrand(t);
        sum += 0.5 * (t - prev_t) * (prev_v + v);
        prev_t = t;
        prev_v = v;
    }
    sum += 0.5 * (T - prev_t) * (prev_v + integrand(T));
    return sum;
}

}  // namespace

ShiftTable ShiftTable::default_table() {
    ShiftTable t;
    for (int y = 1; y <= 90; ++y) {
        const double w = static_cast<double>(y - 1) / 89.0;
        t.tenors.push_back(y);
        t.up.push_back(0.70 + (0.20 - 0.70) * w);
        t.down.push_back(0.75 + (0.20 - 0.75) * w);
    }
    t.tenors.push_back(120.0);
    t.up.push_back(0.20);
    t.down.push_back(0.20);
    return t;
}

void ShiftTable::validate() const {
    if (tenors.empty() || tenors.size() != up.size() || tenors.size() != down.size())
        throw InvalidInput("shift table: columns must be non-empty and of equal length");
    for (std::size_t i = 0; i < tenors.size(); ++i) {
        if (!std::isfinite(tenors[i]) || tenors[i] < 0.0) throw InvalidInput("shift table: bad tenor");
        if (i > 0 && !(tenors[i] > tenors[i - 1])) throw InvalidInput("shift table: tenors must increase");
        if (!std::isfinite(up[i]) || !std::isfinite(down[i])) throw InvalidInput("shift table: non-finite shift");
    }
}

StressSpec StressSpec::from_table(const ShiftTable& table, StressDirection direction, StressScheme scheme) {
    table.validate();
    StressSpec spec;
    spec.direction = direction;
    spec.scheme = scheme;
    for (std::size_t i = 0; i < table.tenors.size(); ++i)
        spec.shifts[table.tenors[i]] = direction == StressDirection::Up ? table.up[i] : -table.down[i];
    return spec;
}

StressSpec StressSpec::uniform(double s, StressScheme scheme) {
    StressSpec spec;
    spec.direction = s < 0.0 ? StressDirection::Down : StressDirection::Up;
    spec.scheme = scheme;
    spec.shifts[0.0] = s;
    return spec;
}

double StressSpec::shift_at(double t) const {
    if (shifts.empty()) throw InvalidInput("stress: empty shift table");
    auto hi = shifts.lower_bound(t);
    if (hi == shifts.end()) return std::prev(hi)->second;
    if (hi == shifts.begin() || hi->first == t) return hi->second;
    auto lo = std::prev(hi);
    return (t - lo->first <= hi->first - t) ? lo->second : hi->second;
}

std::vector<double> regulatory_floor_violations(const StressSpec& spec) {
    std::vector<double> out;
    for (const auto& [t, s] : spec.shifts)
        if (t > 90.0 && std::abs(s) < 0.20) out.push_back(t);
    return out;
}

std::string to_string(StressScheme s) {
    switch (s) {
        case StressScheme::NaiveFullCurve: return "naive";
        case StressScheme::StressToLLPThenRecalibrate: return "llp";
        case StressScheme::StressForwardsToUFR: return "forwards";
    }
    return "unknown";
}

StressScheme parse_scheme(const std::string& name) {
    if (name == "naive") return StressScheme::NaiveFullCurve;
    if (name == "llp") return StressScheme::StressToLLPThenRecalibrate;
    if (name == "forwards") return StressScheme::StressForwardsToUFR;
    throw InvalidInput("unknown stress scheme '" + name + "' (expected naive, llp or forwards)");
}

StressResult apply_stress(const MarketCurve& market, const StressSpec& spec, const CurveConfig& config) {
    market.validate();
    config.validate_for(market);
    if (market.kind != QuoteKind::SpotRates) throw InvalidInput("stress needs a market quoted as spot rates");

    const Calibration base = calibrate_alpha(market, config);
    const double omega = config.omega();
    const double cp = config.cp;

    ConsistencyReport report;
    report.scheme = spec.scheme;
    report.alpha_base = base.curve.alpha();

    if (spec.scheme == StressScheme::StressForwardsToUFR) {
        const double llp = market.last_tenor();
        std::vector<double> rates = market.values;
        for (std::size_t i = 0; i < rates.size(); ++i)
            rates[i] += stress_increment(base.curve, spec, llp, cp, market.tenors[i]) / market.tenors[i];
        MarketCurve stressed = MarketCurve::from_spot_rates(market.tenors, std::move(rates));
        SmithWilsonCurve rebuilt = build_curve(stressed, report.alpha_base, config);
        report.interpretation = "forward intensities stressed with weight 1 to the LLP, phased out linearly by CP; "
                                "spots re-derived and refitted at the base alpha";
        report.alpha_stressed = report.alpha_base;
        report.forward_at_cp = base.curve.forward_intensity(cp) * (1.0 + spec.shift_at(cp) * forward_weight(cp, llp, cp));
        report.forward_gap_at_cp = std::abs(report.forward_at_cp - omega);
        report.within_tolerance = report.forward_gap_at_cp <= config.tolerance;
        report.rebuilt_forward_gap_at_cp = std::abs(rebuilt.forward_intensity(cp) - omega);
        return {std::move(stressed), std::move(rebuilt), report};
    }

    std::vector<double> rates = market.values;
    for (std::size_t i = 0; i < rates.size(); ++i) rates[i] *= 1.0 + spec.shift_at(market.tenors[i]);
    MarketCurve stressed = MarketCurve::from_spot_rates(market.tenors, std::move(rates));
    Calibration refit = calibrate_alpha(stressed, config);
    report.alpha_stressed = refit.curve.alpha();
    report.rebuilt_forward_gap_at_cp = std::abs(refit.curve.forward_intensity(cp) - omega);

    if (spec.scheme == StressScheme::NaiveFullCurve) {
        // d/dt [(1 + s) r(t) t] with s piecewise constant.
        report.interpretation = "stress r_t(1+s_t) applied to the calibrated curve at every tenor";
        report.forward_at_cp = (1.0 + spec.shift_at(cp)) * base.curve.forward_intensity(cp);
    } else {
        report.interpretation = "observed rates stressed up to the LLP, UFR unchanged, alpha recalibrated";
        report.forward_at_cp = refit.curve.forward_intensity(cp);
    }
    report.forward_gap_at_cp = std::abs(report.forward_at_cp - omega);
    report.within_tolerance = report.forward_gap_at_cp <= config.tolerance;
    return {std::move(stressed), std::move(refit.curve), report};
}

}  // namespace swcurve
