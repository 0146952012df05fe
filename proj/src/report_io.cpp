#include "swcurve/report_io.hpp"

#include <cmath>
#include <cstdio>
#include <sstream>

#include "swcurve/errors.hpp"

namespace swcurve::io {
namespace {

std::string trim(const std::string& s) {
    const auto b = s.find_first_not_of(" \t\r\n");
    if (b == std::string::npos) return "";
    const auto e = s.find_last_not_of(" \t\r\n");
    return s.substr(b, e - b + 1);
}

std::vector<std::string> split(const std::string& line) {
    std::vector<std::string> out;
    std::stringstream ss(line);
    std::string cell;
    while (std::getline(ss, cell, ',')) out.push_back(trim(cell));
    if (!line.empty() && line.back() == ',') out.emplace_back();
    return out;
}

double parse_double(const std::string& s, std::size_t line_no) {
    try {
        std::size_t pos = 0;
        const double v = std::stod(s, &pos);
        if (pos != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
        return v;
    } catch (const std::exception&) {
        throw ParseError("line " + std::to_string(line_no) + ": '" + s + "' is not a number");
    }
}

// Data rows of a CSV with the given header; blank and '#' lines are skipped.
std::vector<std::vector<std::string>> read_table(std::istream& in, const std::vector<std::string>& header) {
    std::vector<std::vector<std::string>> rows;
    std::string line;
    std::size_t line_no = 0;
    bool have_header = false;
    while (std::getline(in, line)) {
        ++line_no;
        const std::string t = trim(line);
        if (t.empty() || t.front() == '#') continue;
        auto cells = split(t);
        if (!have_header) {
            if (cells != header) {
                std::string expected;
                for (const auto& h : header) expected += (expected.empty() ? "" : ",") + h;
                throw ParseError("line " + std::to_string(line_no) + ": expected header '" + expected + "'");
            }
            have_header = true;
            continue;
        }
        if (cells.size() != header.size())
            throw ParseError("line " + std::to_string(line_no) + ": expected " + std::to_string(header.size()) +
                             " columns");
        cells.push_back(std::to_string(line_no));
        rows.push_back(std::move(cells));
    }
    if (!have_header) throw ParseError("empty input: missing header");
    if (rows.empty()) throw ParseError("no data rows");
    return rows;
}

std::string fmt2(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.2f", v);
    std::string s(buf);
    if (s == "-0.00") s = "0.00";
    return s;
}

}  // namespace

std::string csv_header_comment() { return std::string("# swcurve ") + kVersion + "\n"; }

std::string format_number(double v) {
    char buf[64];
    std::snprintf(buf, sizeof buf, "%.12g", v);
    return buf;
}

double round12(double v) {
    if (!std::isfinite(v)) return v;
    return std::stod(format_number(v));
}

MarketCurve parse_market_csv(std::istream& in) {
    const auto rows = read_table(in, {"tenor", "quote", "kind"});
    std::vector<double> tenors;
    std::vector<double> rates;
    std::vector<double> prices;
    bool any_price = false;
    bool any_rate = false;
    for (const auto& r : rows) {
        const std::size_t line_no = std::stoul(r[3]);
        const double u = parse_double(r[0], line_no);
        const double q = parse_double(r[1], line_no);
        tenors.push_back(u);
        if (r[2] == "rate") {
            rates.push_back(q);
            prices.push_back(std::exp(-q * u));
            any_rate = true;
        } else if (r[2] == "rate_annual") {
            if (!(q > -1.0)) throw ParseError("line " + r[3] + ": annual rate must exceed -100%");
            rates.push_back(std::log1p(q));
            prices.push_back(std::pow(1.0 + q, -u));
            any_rate = true;
        } else if (r[2] == "price") {
            rates.push_back(0.0);
            prices.push_back(q);
            any_price = true;
        } else {
            throw ParseError("line " + r[3] + ": unknown kind '" + r[2] + "' (rate, rate_annual, price)");
        }
    }
    try {
        if (any_price && !any_rate) return MarketCurve::from_prices(std::move(tenors), std::move(prices));
        if (!any_price) return MarketCurve::from_spot_rates(std::move(tenors), std::move(rates));
        return MarketCurve::from_prices(std::move(tenors), std::move(prices));
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
}

CashFlowSchedule parse_cashflow_csv(std::istream& in) {
    const auto rows = read_table(in, {"time", "amount"});
    CashFlowSchedule s;
    for (const auto& r : rows) {
        const std::size_t line_no = std::stoul(r[2]);
        s.times.push_back(parse_double(r[0], line_no));
        s.amounts.push_back(parse_double(r[1], line_no));
    }
    try {
        s.validate();
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
    return s;
}

ShiftTable parse_shift_table_csv(std::istream& in) {
    const auto rows = read_table(in, {"tenor", "s_up", "s_down"});
    ShiftTable t;
    for (const auto& r : rows) {
        const std::size_t line_no = std::stoul(r[3]);
        t.tenors.push_back(parse_double(r[0], line_no));
        t.up.push_back(parse_double(r[1], line_no));
        t.down.push_back(parse_double(r[2], line_no));
    }
    try {
        t.validate();
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
    return t;
}

CurveConfig parse_config_json(const nlohmann::json& j) {
    if (!j.is_object()) throw ParseError("config must be a JSON object");
    CurveConfig c;
    auto read = [&](const char* key, double& field) {
        if (!j.contains(key)) return;
        if (!j.at(key).is_number()) throw ParseError(std::string("config: '") + key + "' must be a number");
        field = j.at(key).get<double>();
    };
    read("ufr", c.ufr);
    read("cp", c.cp);
    read("alpha_min", c.alpha_min);
    read("alpha_max", c.alpha_max);
    read("tolerance", c.tolerance);
    read("scan_step", c.scan_step);
    read("horizon", c.horizon);
    try {
        c.validate();
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
    return c;
}

std::string curve_csv(const SmithWilsonCurve& curve, double horizon, double step) {
    std::ostringstream out;
    out << csv_header_comment() << "t,P,spot,forward\n";
    const auto n = static_cast<long>(std::floor(horizon / step + 1e-9));
    for (long k = 0; k <= n; ++k) {
        const double t = static_cast<double>(k) * step;
        const double p = curve.discount(t);
        out << format_number(t) << ',' << format_number(p) << ',';
        // The spot rate at t = 0 is its limit, the forward intensity.
        if (t == 0.0)
            out << format_number(curve.forward_intensity(0.0));
        else if (p > 0.0)
            out << format_number(curve.spot_rate(t));
        out << ',';
        if (p != 0.0) out << format_number(curve.forward_intensity(t));
        out << '\n';
    }
    return out.str();
}

nlohmann::json health_json(const SmithWilsonCurve& curve, const CurveHealth& health) {
    nlohmann::json j;
    j["alpha"] = round12(curve.alpha());
    j["omega"] = round12(curve.omega());
    j["kernel"] = curve.kernel().name();
    j["grid_step"] = health.grid_step;
    j["horizon"] = health.horizon;
    j["positive"] = health.positive();
    j["condition_number"] = round12(health.condition_number);
    j["min_discount"] = round12(health.min_discount);
    j["min_discount_tenor"] = health.min_discount_tenor;
    nlohmann::json intervals = nlohmann::json::array();
    for (const auto& iv : health.negative_intervals) intervals.push_back({{"first", iv.first}, {"last", iv.last}});
    j["negative_intervals"] = intervals;
    j["first_negative_tenor"] = health.first_negative_tenor ? nlohmann::json(*health.first_negative_tenor) : nlohmann::json();
    j["first_zero_crossing"] =
        health.first_zero_crossing ? nlohmann::json(round12(*health.first_zero_crossing)) : nlohmann::json();
    return j;
}

nlohmann::json diagnostics_json(const CalibrationDiagnostics& d) {
    nlohmann::json j;
    j["converged"] = d.converged;
    j["alpha_star"] = d.alpha_star ? nlohmann::json(round12(*d.alpha_star)) : nlohmann::json();
    j["alpha_escalated"] = d.alpha_escalated ? nlohmann::json(round12(*d.alpha_escalated)) : nlohmann::json();
    j["negative_df_detected"] = d.negative_df_detected;
    nlohmann::json sing = nlohmann::json::array();
    for (const auto& s : d.singularities)
        sing.push_back({{"lo", round12(s.lo)},
                        {"hi", round12(s.hi)},
                        {"alpha0", round12(s.alpha0)},
                        {"p_cp_at_alpha0", round12(s.p_cp_at_alpha0)}});
    j["singularities"] = sing;
    j["n_samples"] = d.h_samples.size();
    return j;
}

std::string scan_csv(const std::vector<CriterionSample>& samples) {
    std::ostringstream out;
    out << csv_header_comment() << "alpha,h,g,P_cp,is_singular_bracket\n";
    for (std::size_t i = 0; i < samples.size(); ++i) {
        const auto& s = samples[i];
        const bool bracket = i + 1 < samples.size() &&
                             ((s.p_cp > 0.0 && samples[i + 1].p_cp < 0.0) || (s.p_cp < 0.0 && samples[i + 1].p_cp > 0.0) ||
                              s.p_cp == 0.0);
        out << format_number(s.alpha) << ',';
        if (!s.singular) out << format_number(s.h);
        out << ',';
        if (!s.singular) out << format_number(s.g);
        out << ',' << format_number(s.p_cp) << ',' << (bracket ? 1 : 0) << '\n';
    }
    return out.str();
}

nlohmann::json to_json(const HedgeReport& r) {
    auto arr = [](const std::vector<double>& v) {
        nlohmann::json a = nlohmann::json::array();
        for (double x : v) a.push_back(round12(x));
        return a;
    };
    nlohmann::json j;
    j["beta0"] = round12(r.beta0);
    j["tenors"] = arr(r.tenors);
    j["beta"] = arr(r.beta);
    j["exposures"] = arr(r.exposures);
    j["sign_pattern"] = r.sign_pattern;
    j["gross_exposure"] = round12(r.gross_exposure);
    j["liability_pv"] = round12(r.liability_pv);
    return j;
}

std::string hedge_table_csv(const HedgeReport& r) {
    std::ostringstream out;
    out << csv_header_comment() << "i,tenor,beta,exposure\n";
    for (std::size_t i = 0; i < r.beta.size(); ++i)
        out << (i + 1) << ',' << format_number(r.tenors[i]) << ',' << fmt2(r.beta[i]) << ',' << fmt2(r.exposures[i])
            << '\n';
    return out.str();
}

nlohmann::json to_json(const DurationReport& d) {
    return {{"present_value", round12(d.present_value)},
            {"definitional", round12(d.definitional)},
            {"printed_closed_form", round12(d.printed_closed_form)},
            {"discrepancy", round12(d.discrepancy)}};
}

nlohmann::json to_json(const ConsistencyReport& r) {
    return {{"scheme", to_string(r.scheme)},
            {"interpretation", r.interpretation},
            {"alpha_base", round12(r.alpha_base)},
            {"alpha_stressed", round12(r.alpha_stressed)},
            {"forward_at_cp", round12(r.forward_at_cp)},
            {"forward_gap_at_cp", round12(r.forward_gap_at_cp)},
            {"within_tolerance", r.within_tolerance},
            {"rebuilt_forward_gap_at_cp", round12(r.rebuilt_forward_gap_at_cp)}};
}

}  // namespace swcurve::io
