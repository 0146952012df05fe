// Batch front-end: every subcommand reads CSV/JSON inputs and writes its
// reports into --out. Exit codes: 0 ok, 1 internal, 2 parse, 3 calibration,
// 4 oracle hard fail.
#include <cmath>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "swcurve/calibration.hpp"
#include "swcurve/curve.hpp"
#include "swcurve/errors.hpp"
#include "swcurve/hedging.hpp"
#include "swcurve/kernels.hpp"
#include "swcurve/report_io.hpp"
#include "swcurve/stochastic_oracle.hpp"
#include "swcurve/stress.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace swcurve;

namespace {

enum ExitCode { kOk = 0, kInternal = 1, kParse = 2, kCalibration = 3, kOracleFail = 4 };

// Raised by the oracle command after its report is written.
struct OracleHardFail {
    json report;
};

struct Options {
    std::string market;
    std::string liabilities;
    std::string config;
    std::string out = ".";
    std::string range;
    std::string scheme = "naive";
    std::string shifts;
    std::string direction = "up";
    std::optional<double> alpha;
    std::optional<double> step;
    std::optional<double> horizon;
    std::optional<double> uniform_shift;
    std::uint64_t seed = 1;
    bool escalate = false;
};

std::ifstream open_input(const std::string& path, const char* what) {
    if (path.empty()) throw ParseError(std::string("missing --") + what);
    std::ifstream in(path);
    if (!in) throw ParseError(std::string("cannot open ") + what + " file '" + path + "'");
    return in;
}

json read_config_json(const Options& o) {
    if (o.config.empty()) return json::object();
    auto in = open_input(o.config, "config");
    try {
        return json::parse(in);
    } catch (const json::parse_error& e) {
        throw ParseError(std::string("config: ") + e.what());
    }
}

CurveConfig load_config(const Options& o) {
    CurveConfig c = io::parse_config_json(read_config_json(o));
    if (o.horizon) c.horizon = *o.horizon;
    c.validate();
    return c;
}

MarketCurve load_market(const Options& o) {
    auto in = open_input(o.market, "market");
    return io::parse_market_csv(in);
}

CashFlowSchedule load_liabilities(const Options& o) {
    auto in = open_input(o.liabilities, "liabilities");
    return io::parse_cashflow_csv(in);
}

void write_file(const Options& o, const std::string& name, const std::string& content) {
    fs::create_directories(o.out);
    const fs::path p = fs::path(o.out) / name;
    std::ofstream f(p);
    if (!f) throw Error("cannot write " + p.string());
    f << content;
}

void write_json(const Options& o, const std::string& name, const json& j) {
    write_file(o, name, j.dump(2) + "\n");
}

// Curve at --alpha if given, else the calibrated alpha (optionally escalated).
struct Fitted {
    SmithWilsonCurve curve;
    std::optional<CalibrationDiagnostics> diagnostics;
};

Fitted fit(const MarketCurve& market, const CurveConfig& config, const Options& o) {
    config.validate_for(market);
    if (o.alpha) return {build_curve(market, *o.alpha, config), std::nullopt};
    Calibration c = o.escalate ? escalate_alpha_for_positivity(market, config, config.horizon)
                               : calibrate_alpha(market, config);
    return {std::move(c.curve), std::move(c.diagnostics)};
}

json curve_summary(const Fitted& f, const CurveConfig& config) {
    json j = io::health_json(f.curve, f.curve.health(config.horizon));
    j["ufr"] = config.ufr;
    j["cp"] = config.cp;
    if (f.diagnostics) j["calibration"] = io::diagnostics_json(*f.diagnostics);
    return j;
}

int cmd_build(const Options& o) {
    const CurveConfig config = load_config(o);
    const MarketCurve market = load_market(o);
    const Fitted f = fit(market, config, o);
    write_file(o, "curve.csv", io::curve_csv(f.curve, config.horizon));
    const json health = curve_summary(f, config);
    write_json(o, "health.json", health);
    std::cout << health.dump(2) << '\n';
    return kOk;
}

std::pair<double, double> parse_range(const std::string& s, const CurveConfig& c) {
    if (s.empty()) return {c.alpha_min, c.alpha_max};
    const auto colon = s.find(':');
    if (colon == std::string::npos) throw ParseError("--range must be lo:hi");
    try {
        return {std::stod(s.substr(0, colon)), std::stod(s.substr(colon + 1))};
    } catch (const std::exception&) {
        throw ParseError("--range must be lo:hi with numeric bounds");
    }
}

int cmd_scan(const Options& o) {
    const CurveConfig config = load_config(o);
    const MarketCurve market = load_market(o);
    config.validate_for(market);
    const auto [lo, hi] = parse_range(o.range, config);
    if (!(lo > 0.0 && lo <= hi && hi <= config.alpha_max))
        throw ParseError("--range must satisfy 0 < lo <= hi <= alpha_max");
    const double step = o.step.value_or(config.scan_step);
    const auto samples = scan_alpha(market, config, lo, hi, step);
    const auto brackets = find_singularities(market, config, samples);
    write_file(o, "scan.csv", io::scan_csv(samples));
    json j;
    j["range"] = {lo, hi};
    j["step"] = step;
    j["n_samples"] = samples.size();
    j["singularities"] = json::array();
    for (const auto& b : brackets)
        j["singularities"].push_back({{"lo", io::round12(b.lo)},
                                      {"hi", io::round12(b.hi)},
                                      {"alpha0", io::round12(b.alpha0)},
                                      {"p_cp_at_alpha0", io::round12(b.p_cp_at_alpha0)}});
    write_json(o, "scan.json", j);
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int cmd_hedge(const Options& o) {
    const CurveConfig config = load_config(o);
    const MarketCurve market = load_market(o);
    const CashFlowSchedule liabilities = load_liabilities(o);
    const Fitted f = fit(market, config, o);
    const HedgeReport h = hedge_weights_cashflow(f.curve, liabilities);
    json j = io::to_json(h);
    j["alpha"] = io::round12(f.curve.alpha());
    j["sign_pattern_check"] = sign_pattern_check(h, f.curve.size()).holds;
    if (h.liability_pv > 0.0) j["gross_exposure_ratio"] = io::round12(gross_exposure_ratio(h));
    if (h.liability_pv != 0.0) j["duration"] = io::to_json(modified_duration_sw(f.curve, liabilities));
    double extrapolated = 0.0;
    for (std::size_t k = 0; k < liabilities.size(); ++k)
        if (liabilities.times[k] > market.last_tenor())
            extrapolated += liabilities.amounts[k] * f.curve.discount(liabilities.times[k]);
    j["extrapolated_pv"] = io::round12(extrapolated);
    write_json(o, "hedge.json", j);
    write_file(o, "hedge_table.csv", io::hedge_table_csv(h));
    std::cout << j.dump(2) << '\n';
    return kOk;
}

int cmd_stress(const Options& o) {
    const CurveConfig config = load_config(o);
    const MarketCurve market = load_market(o);
    config.validate_for(market);
    StressScheme scheme;
    try {
        scheme = parse_scheme(o.scheme);
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }
    StressSpec spec;
    if (o.uniform_shift) {
        spec = StressSpec::uniform(*o.uniform_shift, scheme);
    } else {
        ShiftTable table = ShiftTable::default_table();
        if (!o.shifts.empty()) {
            auto in = open_input(o.shifts, "shifts");
            table = io::parse_shift_table_csv(in);
        }
        if (o.direction != "up" && o.direction != "down") throw ParseError("--direction must be up or down");
        spec = StressSpec::from_table(table, o.direction == "up" ? StressDirection::Up : StressDirection::Down,
                                      scheme);
    }
    const StressResult r = apply_stress(market, spec, config);
    json j = io::to_json(r.report);
    j["regulatory_floor_violations"] = regulatory_floor_violations(spec);
    write_json(o, "stress.json", j);
    write_file(o, "stressed_curve.csv", io::curve_csv(r.curve, config.horizon));
    std::cout << j.dump(2) << '\n';
    return kOk;
}

SimulationConfig load_simulation(const json& root, const CurveConfig& curve_config) {
    SimulationConfig s;
    s.omega = curve_config.omega();
    const json o = root.contains("oracle") ? root.at("oracle") : json::object();
    if (!o.is_object()) throw ParseError("config: 'oracle' must be an object");
    try {
        if (o.contains("alpha")) s.alpha = o.at("alpha").get<double>();
        if (o.contains("n_paths")) s.n_paths = o.at("n_paths").get<std::size_t>();
        if (o.contains("dt")) s.dt = o.at("dt").get<double>();
        if (o.contains("horizon")) s.horizon = o.at("horizon").get<double>();
        if (o.contains("seed")) s.seed = o.at("seed").get<std::uint64_t>();
        if (o.contains("record_interval")) s.record_interval = o.at("record_interval").get<double>();
        if (o.contains("block_size")) s.block_size = o.at("block_size").get<std::size_t>();
    } catch (const json::exception& e) {
        throw ParseError(std::string("config.oracle: ") + e.what());
    }
    return s;
}

int cmd_oracle(const Options& o, bool seed_given) {
    const json root = read_config_json(o);
    const CurveConfig config = io::parse_config_json(root);
    SimulationConfig sim = load_simulation(root, config);
    if (seed_given) sim.seed = o.seed;

    std::optional<MarketCurve> market;
    double t_cond = 0.0;
    if (!o.market.empty()) {
        market = load_market(o);
        const Fitted f = fit(*market, config, o);
        sim.alpha = f.curve.alpha();
        t_cond = market->last_tenor() + 5.0;
        sim.horizon = std::max(sim.horizon, t_cond);
    } else if (o.alpha) {
        sim.alpha = *o.alpha;
    }
    try {
        sim.validate();
    } catch (const InvalidInput& e) {
        throw ParseError(e.what());
    }

    const PathEnsemble ens = simulate_paths(sim);
    const std::vector<std::pair<double, double>> probes = {{1, 1}, {1, 2}, {2, 5}, {3, 8}, {5, 10}};
    json checks = json::array();
    double max_abs_z = 0.0;
    auto record = [&](const std::string& name, double s, double t, const Estimate& e, double exact) {
        const double z = (e.value - exact) / std::max(e.standard_error, 1e-300);
        max_abs_z = std::max(max_abs_z, std::abs(z));
        checks.push_back({{"check", name},
                          {"s", s},
                          {"t", t},
                          {"estimate", io::round12(e.value)},
                          {"standard_error", io::round12(e.standard_error)},
                          {"closed_form", io::round12(exact)},
                          {"z", io::round12(z)}});
    };
    for (const auto& [s, t] : probes) {
        if (t > sim.horizon) continue;
        record("cov_X_vs_K", s, t, empirical_covariance(ens, s, t, Process::X), ou_covariance(sim.alpha, s, t));
        record("cov_Xbar_vs_H", s, t, empirical_covariance(ens, s, t, Process::Xbar), h_kernel(sim.alpha, s, t));
        record("cov_Y_vs_W", s, t, empirical_covariance(ens, s, t, Process::Y),
               wilson_kernel(sim.alpha, sim.omega, s, t));
    }
    if (market) {
        const ConditionalCheck c = conditional_expectation_check(ens, sim, *market, t_cond);
        max_abs_z = std::max(max_abs_z, std::abs(c.z_score));
        checks.push_back({{"check", "conditional_mean_vs_P"},
                          {"t", t_cond},
                          {"estimate", io::round12(c.mc_estimate)},
                          {"standard_error", io::round12(c.standard_error)},
                          {"closed_form", io::round12(c.closed_form)},
                          {"z", io::round12(c.z_score)}});
    }

    json report;
    report["alpha"] = io::round12(sim.alpha);
    report["omega"] = io::round12(sim.omega);
    report["n_paths"] = sim.n_paths;
    report["dt"] = sim.dt;
    report["horizon"] = sim.horizon;
    report["seed"] = sim.seed;
    report["checks"] = checks;
    report["max_abs_z"] = io::round12(max_abs_z);
    report["status"] = max_abs_z >= 4.0 ? "fail" : (max_abs_z >= 3.0 ? "warn" : "pass");
    report["warnings"] = json::array();
    if (sim.n_paths < 10000)
        report["warnings"].push_back("low power: fewer than 10000 paths, z-scores are weak evidence");
    write_json(o, "oracle.json", report);
    std::cout << report.dump(2) << '\n';
    if (max_abs_z >= 4.0) throw OracleHardFail{report};
    return kOk;
}

json error_json(const std::string& kind, const std::string& message) {
    return {{"error", kind}, {"message", message}};
}

}  // namespace

int main(int argc, char** argv) {
    CLI::App app{"Smith-Wilson curve construction, calibration, hedging and stress tooling"};
    app.require_subcommand(1);
    Options o;

    auto add_common = [&](CLI::App* sub, bool needs_market) {
        auto* m = sub->add_option("--market", o.market, "market CSV (tenor,quote,kind)");
        if (needs_market) m->required();
        sub->add_option("--config", o.config, "JSON config with CurveConfig fields");
        sub->add_option("--alpha", o.alpha, "fixed alpha instead of calibration");
        sub->add_option("--out", o.out, "output directory")->capture_default_str();
        sub->add_option("--horizon", o.horizon, "curve horizon in years");
    };

    auto* build = app.add_subcommand("build", "fit the curve; write curve.csv and health.json");
    add_common(build, true);
    build->add_flag("--escalate", o.escalate, "raise alpha until discount factors are positive to the horizon");

    auto* scan = app.add_subcommand("scan-alpha", "tabulate h(alpha); write scan.csv and scan.json");
    add_common(scan, true);
    scan->add_option("--range", o.range, "lo:hi (default alpha_min:alpha_max)");
    scan->add_option("--step", o.step, "grid step (default scan_step)");

    auto* hedge = app.add_subcommand("hedge", "replicating weights; write hedge.json and hedge_table.csv");
    add_common(hedge, true);
    hedge->add_option("--liabilities", o.liabilities, "liability CSV (time,amount)")->required();
    hedge->add_flag("--escalate", o.escalate, "hedge on the positivity-escalated curve");

    auto* stress = app.add_subcommand("stress", "stress the market; write stress.json and stressed_curve.csv");
    add_common(stress, true);
    stress->add_option("--scheme", o.scheme, "naive | llp | forwards")->capture_default_str();
    stress->add_option("--shifts", o.shifts, "shift table CSV (tenor,s_up,s_down)");
    stress->add_option("--direction", o.direction, "up | down")->capture_default_str();
    stress->add_option("--uniform-shift", o.uniform_shift, "relative shift applied at every tenor");

    auto* oracle = app.add_subcommand("oracle", "Monte-Carlo check of the stochastic representation");
    add_common(oracle, false);
    auto* seed_opt = oracle->add_option("--seed", o.seed, "RNG seed (overrides config)");

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        const int code = app.exit(e);
        return code == 0 ? kOk : kParse;
    }

    try {
        if (*build) return cmd_build(o);
        if (*scan) return cmd_scan(o);
        if (*hedge) return cmd_hedge(o);
        if (*stress) return cmd_stress(o);
        if (*oracle) return cmd_oracle(o, seed_opt->count() > 0);
    } catch (const OracleHardFail& f) {
        std::cerr << json({{"error", "oracle_hard_fail"}, {"max_abs_z", f.report.at("max_abs_z")}}).dump() << '\n';
        return kOracleFail;
    } catch (const ParseError& e) {
        std::cerr << error_json("parse", e.what()).dump() << '\n';
        return kParse;
    } catch (const InvalidInput& e) {
        std::cerr << error_json("invalid_input", e.what()).dump() << '\n';
        return kParse;
    } catch (const CalibrationFailure& e) {
        json j = error_json("calibration", e.what());
        j["diagnostics"] = io::diagnostics_json(e.diagnostics);
        std::cerr << j.dump() << '\n';
        return kCalibration;
    } catch (const SingularSystem& e) {
        json j = error_json("singular_system", e.what());
        j["condition_number"] = e.condition_number;
        j["min_eigenvalue"] = e.min_eigenvalue;
        std::cerr << j.dump() << '\n';
        return kCalibration;
    } catch (const Error& e) {
        std::cerr << error_json("calibration", e.what()).dump() << '\n';
        return kCalibration;
    } catch (const std::exception& e) {
        std::cerr << error_json("internal", e.what()).dump() << '\n';
        return kInternal;
    }
    return kInternal;
}
