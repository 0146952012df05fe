#pragma once

#include <map>
#include <string>
#include <vector>

#include "swcurve/calibration.hpp"
#include "swcurve/curve.hpp"
#include "swcurve/market.hpp"

namespace swcurve {

enum class StressScheme {
    /// r^s_t = r_t (1 + s_t) at every tenor, extrapolated ones included.
    NaiveFullCurve,
    /// Stress observed rates only, keep the UFR, recalibrate alpha.
    StressToLLPThenRecalibrate,
    /// Stress forward intensities, phased out by CP; rebuild at the base alpha.
    StressForwardsToUFR,
};

enum class StressDirection { Up, Down };

/// Relative shift sizes per tenor (tenor, s_up, s_down); s_down is a magnitude.
struct ShiftTable {
    std::vector<double> tenors;
    std::vector<double> up;
    std::vector<double> down;

    /// Stand-in table: up 70% -> 20% and down 75% -> 20% linearly over 1..90
    /// years, flat 20% beyond. Replace with the official table via CSV.
    static ShiftTable default_table();
    void validate() const;
};

struct StressSpec {
    /// Signed multiplicative shifts s_t keyed by tenor.
    std::map<double, double> shifts;
    StressDirection direction = StressDirection::Up;
    StressScheme scheme = StressScheme::NaiveFullCurve;

    static StressSpec from_table(const ShiftTable& table, StressDirection direction, StressScheme scheme);
    static StressSpec uniform(double s, StressScheme scheme);

    /// Shift of the nearest tabulated tenor (ties go to the shorter tenor).
    double shift_at(double t) const;
};

/// Tabulated tenors beyond 90 years whose |s| is below the 20% floor.
std::vector<double> regulatory_floor_violations(const StressSpec& spec);

struct ConsistencyReport {
    StressScheme scheme = StressScheme::NaiveFullCurve;
    std::string interpretation;
    double alpha_base = 0.0;
    double alpha_stressed = 0.0;
    /// Forward intensity of the stressed term structure at CP, and |that - omega|.
    double forward_at_cp = 0.0;
    double forward_gap_at_cp = 0.0;
    bool within_tolerance = false;
    /// |f(CP) - omega| of the Smith-Wilson curve refitted to the stressed quotes.
    double rebuilt_forward_gap_at_cp = 0.0;
};

struct StressResult {
    MarketCurve stressed_market;
    SmithWilsonCurve curve;
    ConsistencyReport report;
};

/// Requires rate quotes. Calibration failures of the stressed market propagate
/// as CalibrationFailure with their diagnostics.
StressResult apply_stress(const MarketCurve& market, const StressSpec& spec, const CurveConfig& config);

std::string to_string(StressScheme s);
StressScheme parse_scheme(const std::string& name);

}  // namespace swcurve
