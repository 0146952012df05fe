#pragma once

#include <span>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "swcurve/curve.hpp"
#include "swcurve/kernels.hpp"
#include "swcurve/market.hpp"

namespace swcurve {

/// |beta_i| at or below this is classified as a structural zero.
inline constexpr double kSignThreshold = 1e-12;

/// Replicating portfolio of a liability: beta0 in cash plus beta_i units of
/// each supporting instrument, valid while alpha is held fixed.
struct HedgeReport {
    double beta0 = 0.0;
    std::vector<double> tenors;     ///< maturity of each supporting instrument
    std::vector<double> beta;
    std::vector<double> exposures;  ///< beta_i * p_i
    std::vector<int> sign_pattern;
    double gross_exposure = 0.0;    ///< sum |beta_i * p_i|
    double liability_pv = 0.0;
};

/// Hedge of one unit paid at t.
HedgeReport hedge_weights(const SmithWilsonCurve& curve, double t);

/// Hedge of a cash-flow stream, aggregated linearly over payment dates.
HedgeReport hedge_weights_cashflow(const SmithWilsonCurve& curve, const CashFlowSchedule& cashflows);

struct SignPatternVerdict {
    bool holds = true;
    std::size_t checked = 0;               ///< entries with |beta| > kSignThreshold
    std::vector<std::size_t> violations;   ///< zero-based indices
};

/// Checks sign(beta_i) = (-1)^{N-i} (1-based i) on the non-negligible entries.
SignPatternVerdict sign_pattern_check(const HedgeReport& report, std::size_t n_support);

/// gross_exposure / liability_pv; throws UndefinedRatio unless the PV is positive.
double gross_exposure_ratio(const HedgeReport& report);

struct DurationReport {
    double present_value = 0.0;
    /// -(1/P^c) dP^c/d(delta) for a parallel bump of the observed spot rates, alpha fixed.
    double definitional = 0.0;
    /// sum_i c_i W(t_i,u) W^{-1} u / P^c, the alternative closed form.
    double printed_closed_form = 0.0;
    double discrepancy = 0.0;
};

/// Modified duration with respect to the observed continuously compounded spot rates.
DurationReport modified_duration_sw(const SmithWilsonCurve& curve, const CashFlowSchedule& cashflows);

/// Mean squared error of prediction Var[Y_t | observations], clamped at 0.
double msep(const SmithWilsonCurve& curve, double t);

struct MMatrixVerdict {
    enum class Failure {
        None,
        NonPositiveDiagonal,
        PositiveOffDiagonal,
        NonPositiveLeadingMinor,
        NonPositivePrincipalMinor,
    };
    bool is_m_matrix = true;
    Failure failure = Failure::None;
    std::string detail;
};

/// Sign pattern plus positivity of principal minors (every subset for n <= 8,
/// leading minors otherwise). Entries within zero_tolerance * max|A| of zero
/// count as zero.
MMatrixVerdict is_m_matrix(const Eigen::MatrixXd& a, double zero_tolerance = 1e-12);

/// Inverse of the kernel matrix on a tenor grid.
Eigen::MatrixXd precision_matrix(const KernelSpec& kernel, std::span<const double> tenors);

std::string to_string(MMatrixVerdict::Failure f);

}  // namespace swcurve
