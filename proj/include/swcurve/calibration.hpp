#pragma once

#include <optional>
#include <vector>

#include "swcurve/curve.hpp"
#include "swcurve/errors.hpp"
#include "swcurve/market.hpp"

namespace swcurve {

/// One evaluation of the convergence criterion h(alpha) = f(CP) - omega.
struct CriterionSample {
    double alpha = 0.0;
    double h = 0.0;    ///< NaN when singular
    double g = 0.0;    ///< |h|, NaN when singular
    double p_cp = 0.0; ///< P(CP; alpha)
    bool singular = false;
};

/// A cell of the alpha scan across which P(CP; alpha) changes sign,
/// refined by bisection to the pole alpha0 of h.
struct SingularityBracket {
    double lo = 0.0;
    double hi = 0.0;
    double alpha0 = 0.0;
    double p_cp_at_alpha0 = 0.0;
};

struct CalibrationDiagnostics {
    std::optional<double> alpha_star;
    bool converged = false;
    std::vector<CriterionSample> h_samples;
    std::vector<SingularityBracket> singularities;
    bool negative_df_detected = false;
    std::optional<double> alpha_escalated;
};

struct Calibration {
    SmithWilsonCurve curve;
    CalibrationDiagnostics diagnostics;
};

class CalibrationFailure : public Error {
public:
    CalibrationFailure(const std::string& what, CalibrationDiagnostics diag)
        : Error(what), diagnostics(std::move(diag)) {}
    CalibrationDiagnostics diagnostics;
};

/// kappa = (1 + alpha u'Qb) / (sinh[alpha u'] Qb), with b solving p = q + QHQ b.
/// Throws DegenerateKappa when the denominator vanishes (market on the UFR curve).
double kappa(const MarketCurve& market, double alpha, const CurveConfig& config);

/// Signed closed form alpha / (1 - kappa e^{alpha CP}).
double h_from_kappa(double alpha, double kappa_value, double cp);

/// sinh[alpha u'] Qb. The closed form implies sign(h) = -sign(B) sign(P(CP)) for CP >= u_N.
double sinh_weight(const MarketCurve& market, double alpha, const CurveConfig& config);

/// h(alpha) = f(CP) - omega through the curve's forward intensity.
/// Throws CriterionSingularity when P(CP; alpha) vanishes.
CriterionSample h_signed(const MarketCurve& market, double alpha, const CurveConfig& config);

/// h_signed that records a singular sample instead of throwing.
CriterionSample evaluate_criterion(const MarketCurve& market, double alpha, const CurveConfig& config);

/// Grid alpha_k = lo + k*step for k = 0..floor((hi-lo)/step). OpenMP-parallel,
/// results ordered by alpha and identical to scan_alpha_serial.
std::vector<CriterionSample> scan_alpha(const MarketCurve& market, const CurveConfig& config, double lo,
                                        double hi, double step);
std::vector<CriterionSample> scan_alpha_serial(const MarketCurve& market, const CurveConfig& config,
                                               double lo, double hi, double step);

/// Sign changes of P(CP) between consecutive samples, each refined until
/// |P(CP; alpha0)| < 1e-12 exp(-omega CP) or the bracket collapses.
std::vector<SingularityBracket> find_singularities(const MarketCurve& market, const CurveConfig& config,
                                                   const std::vector<CriterionSample>& samples);

/// Smallest alpha >= alpha_min with |f(CP) - omega| <= tolerance:
/// grid scan, then bisection inside the first admissible cell.
Calibration calibrate_alpha(const MarketCurve& market, const CurveConfig& config);

/// Raises alpha above the calibrated value until the criterion holds and
/// P(t) > 0 on the 0.25-year grid up to horizon. Not a regulatory requirement.
Calibration escalate_alpha_for_positivity(const MarketCurve& market, const CurveConfig& config,
                                          double horizon);

}  // namespace swcurve
