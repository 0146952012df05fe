#pragma once

#include <span>
#include <string>
#include <variant>

#include <Eigen/Dense>

namespace swcurve {

/// H(s,t): covariance of the integrated Ornstein-Uhlenbeck process.
double h_kernel(double alpha, double s, double t);

/// Wilson function W(s,t) = exp(-omega (s+t)) H(s,t).
double wilson_kernel(double alpha, double omega, double s, double t);

/// K(s,t) = alpha^2 exp(-alpha max) cosh(alpha min): covariance of the OU process X.
double ou_covariance(double alpha, double s, double t);

/// Stationary OU covariance (sigma^2 / 2a) exp(-a |s-t|).
double alt_ou_kernel(double a, double sigma, double s, double t);

/// dH/ds, the derivative in the first argument.
double h_kernel_ds(double alpha, double s, double t);

struct WilsonKernel {
    double alpha;
    double omega;
};

struct IntegratedOUKernel {
    double alpha;
};

struct OUKernel {
    double a;
    double sigma;
};

/// Covariance kernel driving a kriging-type discount curve.
class KernelSpec {
public:
    using Variant = std::variant<WilsonKernel, IntegratedOUKernel, OUKernel>;

    KernelSpec(WilsonKernel k);
    KernelSpec(IntegratedOUKernel k);
    KernelSpec(OUKernel k);

    double operator()(double s, double t) const;
    /// Derivative of the kernel in its first argument.
    double d_first(double s, double t) const;

    /// True when precision matrices on any tenor grid are M-matrices.
    /// Only asserted here; tests verify it with is_m_matrix.
    bool precision_is_m_matrix() const noexcept;

    /// Mean-reversion parameter for Wilson/IntegratedOU, `a` for OU.
    double speed() const noexcept;

    std::string name() const;
    const Variant& variant() const noexcept { return kernel_; }

private:
    Variant kernel_;
};

/// Pairwise kernel evaluations on a strictly increasing, positive tenor grid.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, std::span<const double> tenors);

/// Cross-kernel matrix (K(s_i, t_j)) with no ordering requirement.
Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, std::span<const double> s,
                              std::span<const double> t);

void validate_tenor_grid(std::span<const double> tenors);

}  // namespace swcurve
