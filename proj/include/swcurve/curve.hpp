#pragma once

#include <optional>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "swcurve/kernels.hpp"
#include "swcurve/market.hpp"

namespace swcurve {

/// Discount-factor diagnostics on a regular grid.
struct CurveHealth {
    struct Interval {
        double first;  ///< first grid tenor with P <= 0
        double last;   ///< last grid tenor of the same run
    };
    double grid_step = 0.25;
    double horizon = 0.0;
    std::vector<Interval> negative_intervals;
    /// P changes sign inside (first_negative_tenor - grid_step, first_negative_tenor].
    std::optional<double> first_negative_tenor;
    /// Root of P in that cell, refined by bisection.
    std::optional<double> first_zero_crossing;
    double min_discount = 1.0;
    double min_discount_tenor = 0.0;
    double condition_number = 1.0;

    bool positive() const noexcept { return negative_intervals.empty(); }
};

/// Discount curve P(t) = exp(-omega t) + sum_j w_j K(t, tau_j), fitted so that
/// it prices every supporting instrument exactly. Immutable once built.
///
/// For zero-coupon input the nodes tau are the market tenors and w = zeta.
/// For coupon instruments w = C' zeta, with C the instrument-by-cash-flow
/// matrix on the union payment grid and one zeta per instrument.
class SmithWilsonCurve {
public:
    double alpha() const noexcept { return kernel_.speed(); }
    double omega() const noexcept { return omega_; }
    const KernelSpec& kernel() const noexcept { return kernel_; }

    /// Maturity of each supporting instrument (the market tenors u).
    const std::vector<double>& tenors() const noexcept { return tenors_; }
    /// Quoted instrument prices p.
    const std::vector<double>& prices() const noexcept { return prices_; }
    const Eigen::VectorXd& zeta() const noexcept { return zeta_; }
    std::size_t size() const noexcept { return tenors_.size(); }
    bool zero_coupon() const noexcept { return zero_coupon_; }
    double condition_number() const noexcept { return condition_; }

    double discount(double t) const;
    double discount_derivative(double t) const;
    /// -P'(t)/P(t); throws SingularForward where P(t) == 0.
    double forward_intensity(double t) const;
    /// -log P(t) / t; throws NoRealSpotRate where P(t) <= 0.
    double spot_rate(double t) const;
    double present_value(const CashFlowSchedule& cashflows) const;
    CurveHealth health(double horizon, double step = 0.25) const;

    // Gaussian-conditioning pieces, used by hedging and the MSEP.
    /// Cov[Y_t, instrument values] = C k(t).
    Eigen::VectorXd instrument_covariance(double t) const;
    /// Prior mean of the instrument values, C exp(-omega tau).
    const Eigen::VectorXd& instrument_prior_means() const noexcept { return prior_means_; }
    /// Solves G x = rhs with the instrument Gram matrix G = C K C'.
    Eigen::VectorXd solve_gram(const Eigen::VectorXd& rhs) const;
    double prior_mean(double t) const;
    double prior_variance(double t) const { return kernel_(t, t); }

private:
    friend SmithWilsonCurve build_curve_coupon(std::span<const CashFlowSchedule> instruments,
                                               std::span<const double> prices,
                                               const KernelSpec& kernel, double omega);
    friend SmithWilsonCurve build_curve(const MarketCurve& market, const KernelSpec& kernel,
                                        double omega);

    SmithWilsonCurve(KernelSpec kernel, double omega) : kernel_(std::move(kernel)), omega_(omega) {}

    KernelSpec kernel_;
    double omega_;
    bool zero_coupon_ = true;
    std::vector<double> tenors_;
    std::vector<double> prices_;
    std::vector<double> nodes_;
    Eigen::MatrixXd cashflows_;
    Eigen::VectorXd zeta_;
    Eigen::VectorXd node_weights_;
    Eigen::VectorXd prior_means_;
    Eigen::LLT<Eigen::MatrixXd> gram_;
    double condition_ = 1.0;
};

/// Smith-Wilson fit of zero-coupon quotes with the Wilson kernel at fixed alpha.
SmithWilsonCurve build_curve(const MarketCurve& market, double alpha, const CurveConfig& config);

/// Same interpolation system with an arbitrary covariance kernel.
SmithWilsonCurve build_curve(const MarketCurve& market, const KernelSpec& kernel, double omega);

/// Fit to coupon-bearing instruments: price_k = sum_j c_kj P(t_j).
SmithWilsonCurve build_curve_coupon(std::span<const CashFlowSchedule> instruments,
                                    std::span<const double> prices, double alpha,
                                    const CurveConfig& config);

SmithWilsonCurve build_curve_coupon(std::span<const CashFlowSchedule> instruments,
                                    std::span<const double> prices, const KernelSpec& kernel,
                                    double omega);

}  // namespace swcurve
