#include "swcurve/calibration.hpp"

#include <cmath>
#include <exception>
#include <functional>
#include <limits>
#include <stdexcept>
#include <string>

namespace swcurve {
namespace {

constexpr double kNaN = std::numeric_limits<double>::quiet_NaN();
constexpr double kHealthStep = 0.25;

int sign(double x) { return (x > 0.0) - (x < 0.0); }

double singular_scale(const CurveConfig& config) { return std::exp(-config.omega() * config.cp); }

std::vector<double> scan_grid(double lo, double hi, double step) {
    if (!(lo > 0.0) || !(hi >= lo) || !(step > 0.0))
        throw InvalidInput("alpha scan needs 0 < lo <= hi and step > 0");
    const auto n = static_cast<long>(std::floor((hi - lo) / step + 1e-9));
    std::vector<double> grid(static_cast<std::size_t>(n + 1));
    for (long k = 0; k <= n; ++k) grid[static_cast<std::size_t>(k)] = lo + static_cast<double>(k) * step;
    return grid;
}

// Bisection on a predicate with pred(lo) false and pred(hi) true; returns an
// alpha where the predicate holds.
double bisect_predicate(double lo, double hi, const std::function<bool(double)>& pred) {
    for (int i = 0; i < 100 && hi - lo > 1e-12; ++i) {
        const double mid = 0.5 * (lo + hi);
        (pred(mid) ? hi : lo) = mid;
    }
    return hi;
}

}  // namespace

double kappa(const MarketCurve& market, double alpha, const CurveConfig& config) {
    const SmithWilsonCurve curve = build_curve(market, alpha, config);
    const auto& u = curve.tenors();
    const Eigen::VectorXd& b = curve.zeta();
    double num = 1.0;
    double den = 0.0;
    for (std::size_t i = 0; i < u.size(); ++i) {
        const double qb = std::exp(-config.omega() * u[i]) * b[static_cast<Eigen::Index>(i)];
        num += alpha * u[i] * qb;
        den += std::sinh(alpha * u[i]) * qb;
    }
    if (den == 0.0 || b.cwiseAbs().maxCoeff() == 0.0)
        throw DegenerateKappa("kappa denominator vanishes: market coincides with the UFR curve");
    return num / den;
}

double h_from_kappa(double alpha, double kappa_value, double cp) {
    return alpha / (1.0 - kappa_value * std::exp(alpha * cp));
}

double sinh_weight(const MarketCurve& market, double alpha, const CurveConfig& config) {
    const SmithWilsonCurve curve = build_curve(market, alpha, config);
    double b_sum = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double u = curve.tenors()[i];
        b_sum += std::sinh(alpha * u) * std::exp(-config.omega() * u) * curve.zeta()[static_cast<Eigen::Index>(i)];
    }
    return b_sum;
}

CriterionSample h_signed(const MarketCurve& market, double alpha, const CurveConfig& config) {
    config.validate_for(market);
    const SmithWilsonCurve curve = build_curve(market, alpha, config);
    CriterionSample s;
    s.alpha = alpha;
    s.p_cp = curve.discount(config.cp);
    if (std::abs(s.p_cp) < 1e-14 * singular_scale(config))
        throw CriterionSingularity("P(CP) vanishes at alpha = " + std::to_string(alpha), alpha);
    s.h = curve.forward_intensity(config.cp) - config.omega();
    s.g = std::abs(s.h);

    // Closed-form cross-check: h = -alpha e^{-alpha CP} B / (e^{omega CP} P(CP)).
    double b_sum = 0.0;
    double b_scale = 0.0;
    for (std::size_t i = 0; i < curve.size(); ++i) {
        const double u = curve.tenors()[i];
        const double term =
            std::sinh(alpha * u) * std::exp(-config.omega() * u) * curve.zeta()[static_cast<Eigen::Index>(i)];
        b_sum += term;
        b_scale += std::abs(term);
    }
    if (std::abs(b_sum) > 1e-10 * b_scale && s.g > 1e-14 && sign(s.h) != -sign(b_sum) * sign(s.p_cp))
        throw std::logic_error("criterion sign cross-check failed at alpha = " + std::to_string(alpha));
    return s;
}

CriterionSample evaluate_criterion(const MarketCurve& market, double alpha, const CurveConfig& config) {
    try {
        return h_signed(market, alpha, config);
    } catch (const CriterionSingularity&) {
        const SmithWilsonCurve curve = build_curve(market, alpha, config);
        return {alpha, kNaN, kNaN, curve.discount(config.cp), true};
    }
}

std::vector<CriterionSample> scan_alpha_serial(const MarketCurve& market, const CurveConfig& config,
                                               double lo, double hi, double step) {
    config.validate_for(market);
    const std::vector<double> grid = scan_grid(lo, hi, step);
    std::vector<CriterionSample> out;
    out.reserve(grid.size());
    for (double a : grid) out.push_back(evaluate_criterion(market, a, config));
    return out;
}

std::vector<CriterionSample> scan_alpha(const MarketCurve& market, const CurveConfig& config, double lo,
                                        double hi, double step) {
    config.validate_for(market);
    const std::vector<double> grid = scan_grid(lo, hi, step);
    std::vector<CriterionSample> out(grid.size());
    std::exception_ptr error;
    const auto n = static_cast<long>(grid.size());
#pragma omp parallel for schedule(static)
    for (long k = 0; k < n; ++k) {
        try {
            out[static_cast<std::size_t>(k)] = evaluate_criterion(market, grid[static_cast<std::size_t>(k)], config);
        } catch (...) {
#pragma omp critical(swcurve_scan_error)
            if (!error) error = std::current_exception();
        }
    }
    if (error) std::rethrow_exception(error);
    return out;
}

std::vector<SingularityBracket> find_singularities(const MarketCurve& market, const CurveConfig& config,
                                                   const std::vector<CriterionSample>& samples) {
    std::vector<SingularityBracket> out;
    const double target = 1e-12 * singular_scale(config);
    auto p_cp = [&](double a) { return build_curve(market, a, config).discount(config.cp); };
    for (std::size_t i = 0; i + 1 < samples.size(); ++i) {
        const CriterionSample& a = samples[i];
        const CriterionSample& b = samples[i + 1];
        if (a.p_cp == 0.0) {
            out.push_back({a.alpha, a.alpha, a.alpha, 0.0});
            continue;
        }
        if (sign(a.p_cp) * sign(b.p_cp) >= 0) continue;
        double lo = a.alpha;
        double hi = b.alpha;
        const int lo_sign = sign(a.p_cp);
        double mid = 0.5 * (lo + hi);
        double pm = p_cp(mid);
        for (int it = 0; it < 200 && std::abs(pm) >= target && hi - lo > 4 * std::numeric_limits<double>::epsilon() * hi; ++it) {
            (sign(pm) == lo_sign ? lo : hi) = mid;
            mid = 0.5 * (lo + hi);
            pm = p_cp(mid);
        }
        out.push_back({a.alpha, b.alpha, mid, pm});
    }
    return out;
}

Calibration calibrate_alpha(const MarketCurve& market, const CurveConfig& config) {
    config.validate_for(market);
    CalibrationDiagnostics diag;

    const SmithWilsonCurve at_min = build_curve(market, config.alpha_min, config);
    if (at_min.zeta().cwiseAbs().maxCoeff() == 0.0) {
        // Market lies on the UFR curve: the criterion holds identically.
        diag.h_samples.push_back({config.alpha_min, 0.0, 0.0, at_min.discount(config.cp), false});
        diag.alpha_star = config.alpha_min;
        diag.converged = true;
        diag.negative_df_detected = !at_min.health(config.horizon, kHealthStep).positive();
        return {at_min, std::move(diag)};
    }

    diag.h_samples = scan_alpha(market, config, config.alpha_min, config.alpha_max, config.scan_step);
    const auto all_singularities = find_singularities(market, config, diag.h_samples);

    std::size_t k = 0;
    while (k < diag.h_samples.size() &&
           (diag.h_samples[k].singular || !(diag.h_samples[k].g <= config.tolerance)))
        ++k;
    if (k == diag.h_samples.size()) {
        diag.singularities = all_singularities;
        throw CalibrationFailure("no alpha in [" + std::to_string(config.alpha_min) + ", " +
                                     std::to_string(config.alpha_max) + "] satisfies the convergence criterion",
                                 std::move(diag));
    }
    double alpha_star = diag.h_samples[k].alpha;
    if (k > 0) {
        alpha_star = bisect_predicate(diag.h_samples[k - 1].alpha, alpha_star, [&](double a) {
            const CriterionSample s = evaluate_criterion(market, a, config);
            return !s.singular && s.g <= config.tolerance;
        });
    }
    for (const auto& s : all_singularities)
        if (s.alpha0 <= alpha_star) diag.singularities.push_back(s);
    diag.alpha_star = alpha_star;
    diag.converged = true;
    SmithWilsonCurve curve = build_curve(market, alpha_star, config);
    diag.negative_df_detected = !curve.health(config.horizon, kHealthStep).positive();
    return {std::move(curve), std::move(diag)};
}

Calibration escalate_alpha_for_positivity(const MarketCurve& market, const CurveConfig& config,
                                          double horizon) {
    Calibration base = calibrate_alpha(market, config);
    const double alpha_star = *base.diagnostics.alpha_star;
    if (base.curve.health(horizon, kHealthStep).positive()) return base;

    CalibrationDiagnostics diag = std::move(base.diagnostics);
    diag.negative_df_detected = true;
    auto admissible = [&](double a) {
        const CriterionSample s = evaluate_criterion(market, a, config);
        return !s.singular && s.g <= config.tolerance &&
               build_curve(market, a, config).health(horizon, kHealthStep).positive();
    };
    if (diag.h_samples.size() <= 1)
        diag.h_samples = scan_alpha(market, config, config.alpha_min, config.alpha_max, config.scan_step);

    std::optional<double> escalated;
    double prev = alpha_star;
    for (const auto& s : diag.h_samples) {
        if (s.alpha <= alpha_star) continue;
        if (!s.singular && s.g <= config.tolerance && admissible(s.alpha)) {
            escalated = bisect_predicate(prev, s.alpha, admissible);
            break;
        }
        prev = s.alpha;
    }
    const auto all_singularities = find_singularities(market, config, diag.h_samples);
    if (!escalated) {
        diag.singularities = all_singularities;
        throw CalibrationFailure("no alpha up to " + std::to_string(config.alpha_max) +
                                     " gives positive discount factors up to " + std::to_string(horizon),
                                 std::move(diag));
    }
    diag.singularities.clear();
    for (const auto& s : all_singularities)
        if (s.alpha0 <= *escalated) diag.singularities.push_back(s);
    diag.alpha_escalated = escalated;
    return {build_curve(market, *escalated, config), std::move(diag)};
}

}  // namespace swcurve
