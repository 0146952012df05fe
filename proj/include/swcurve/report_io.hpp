#pragma once

#include <istream>
#include <string>
#include <vector>

#include <json.hpp>

#include "swcurve/calibration.hpp"
#include "swcurve/curve.hpp"
#include "swcurve/hedging.hpp"
#include "swcurve/market.hpp"
#include "swcurve/stochastic_oracle.hpp"
#include "swcurve/stress.hpp"

namespace swcurve::io {

inline constexpr const char* kVersion = "0.1.0";

/// First line of every CSV written by the tools; parsers skip '#' lines.
std::string csv_header_comment();

/// %.12g
std::string format_number(double v);
/// Rounds to 12 significant digits for JSON output.
double round12(double v);

/// CSV with header `tenor,quote,kind`, kind in {rate, rate_annual, price}.
/// Rates are absolute decimals; rate_annual is converted to continuous compounding.
MarketCurve parse_market_csv(std::istream& in);
/// CSV with header `time,amount`.
CashFlowSchedule parse_cashflow_csv(std::istream& in);
/// CSV with header `tenor,s_up,s_down`.
ShiftTable parse_shift_table_csv(std::istream& in);
/// JSON object with any of ufr, cp, alpha_min, alpha_max, tolerance, scan_step, horizon.
CurveConfig parse_config_json(const nlohmann::json& j);

/// Columns t,P,spot,forward on a regular grid; spot is blank where P <= 0,
/// forward blank where P == 0. The spot at t = 0 is the forward intensity there.
std::string curve_csv(const SmithWilsonCurve& curve, double horizon, double step = 0.25);
nlohmann::json health_json(const SmithWilsonCurve& curve, const CurveHealth& health);
nlohmann::json diagnostics_json(const CalibrationDiagnostics& diag);

/// Columns alpha,h,g,P_cp,is_singular_bracket; the flag marks a sign change of
/// P_cp between this row and the next.
std::string scan_csv(const std::vector<CriterionSample>& samples);

nlohmann::json to_json(const HedgeReport& report);
/// Rows i,tenor,beta,exposure rounded to two decimals.
std::string hedge_table_csv(const HedgeReport& report);

nlohmann::json to_json(const DurationReport& d);
nlohmann::json to_json(const ConsistencyReport& r);

}  // namespace swcurve::io
