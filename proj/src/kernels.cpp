#include "swcurve/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "swcurve/errors.hpp"

namespace swcurve {
namespace {

void check_rate(double v, const char* name) {
    if (!std::isfinite(v) || v <= 0.0)
        throw InvalidInput(std::string(name) + " must be finite and > 0, got " + std::to_string(v));
}

void check_time(double v) {
    if (!std::isfinite(v) || v < 0.0)
        throw InvalidInput("kernel argument must be finite and >= 0, got " + std::to_string(v));
}

// e^{-y} - 1 + y, accurate for small y where the direct form cancels.
double exp_residual(double y) {
    if (y < 1.0) {
        double term = y * y / 2.0;
        double sum = 0.0;
        for (int k = 3; k < 30 && term != 0.0; ++k) {
            sum += term;
            term *= -y / k;
        }
        return sum;
    }
    return std::expm1(-y) + y;
}

}  // namespace

// With x = alpha*min, d = alpha*(max-min):
//   H = (e^{-2x} - 1 + 2x)/2 + (1 - e^{-d})(1 - e^{-2x})/2
// Both terms are non-negative and only negative exponents appear, so large
// alpha*t neither overflows sinh nor cancels.
double h_kernel(double alpha, double s, double t) {
    check_rate(alpha, "alpha");
    check_time(s);
    check_time(t);
    const double lo = std::min(s, t);
    const double hi = std::max(s, t);
    const double x = alpha * lo;
    const double d = alpha * (hi - lo);
    return 0.5 * exp_residual(2.0 * x) + 0.5 * std::expm1(-d) * std::expm1(-2.0 * x);
}

double wilson_kernel(double alpha, double omega, double s, double t) {
    check_rate(omega, "omega");
    return std::exp(-omega * (s + t)) * h_kernel(alpha, s, t);
}

double ou_covariance(double alpha, double s, double t) {
    check_rate(alpha, "alpha");
    check_time(s);
    check_time(t);
    const double lo = std::min(s, t);
    const double hi = std::max(s, t);
    return alpha * alpha * 0.5 * (std::exp(-alpha * (hi - lo)) + std::exp(-alpha * (hi + lo)));
}

double alt_ou_kernel(double a, double sigma, double s, double t) {
    check_rate(a, "a");
    check_rate(sigma, "sigma");
    check_time(s);
    check_time(t);
    return sigma * sigma / (2.0 * a) * std::exp(-a * std::abs(s - t));
}

double h_kernel_ds(double alpha, double s, double t) {
    check_rate(alpha, "alpha");
    check_time(s);
    check_time(t);
    if (s < t) {
        const double d = alpha * (t - s);
        return alpha * 0.5 * (-std::expm1(-d) - std::expm1(-d - 2.0 * alpha * s));
    }
    const double d = alpha * (s - t);
    return alpha * 0.5 * std::exp(-d) * -std::expm1(-2.0 * alpha * t);
}

namespace {

template <class... Fs>
struct overloaded : Fs... {
    using Fs::operator()...;
};
template <class... Fs>
overloaded(Fs...) -> overloaded<Fs...>;

}  // namespace

KernelSpec::KernelSpec(WilsonKernel k) : kernel_(k) {
    check_rate(k.alpha, "alpha");
    check_rate(k.omega, "omega");
}

KernelSpec::KernelSpec(IntegratedOUKernel k) : kernel_(k) { check_rate(k.alpha, "alpha"); }

KernelSpec::KernelSpec(OUKernel k) : kernel_(k) {
    check_rate(k.a, "a");
    check_rate(k.sigma, "sigma");
}

double KernelSpec::operator()(double s, double t) const {
    return std::visit(
        overloaded{
            [&](const WilsonKernel& k) { return wilson_kernel(k.alpha, k.omega, s, t); },
            [&](const IntegratedOUKernel& k) { return h_kernel(k.alpha, s, t); },
            [&](const OUKernel& k) { return alt_ou_kernel(k.a, k.sigma, s, t); },
        },
        kernel_);
}

double KernelSpec::d_first(double s, double t) const {
    return std::visit(
        overloaded{
            [&](const WilsonKernel& k) {
                return std::exp(-k.omega * (s + t)) *
                       (h_kernel_ds(k.alpha, s, t) - k.omega * h_kernel(k.alpha, s, t));
            },
            [&](const IntegratedOUKernel& k) { return h_kernel_ds(k.alpha, s, t); },
            [&](const OUKernel& k) {
                const double v = alt_ou_kernel(k.a, k.sigma, s, t);
                return s < t ? k.a * v : -k.a * v;
            },
        },
        kernel_);
}

bool KernelSpec::precision_is_m_matrix() const noexcept {
    return std::holds_alternative<OUKernel>(kernel_);
}

double KernelSpec::speed() const noexcept {
    return std::visit(overloaded{
                          [](const WilsonKernel& k) { return k.alpha; },
                          [](const IntegratedOUKernel& k) { return k.alpha; },
                          [](const OUKernel& k) { return k.a; },
                      },
                      kernel_);
}

std::string KernelSpec::name() const {
    return std::visit(overloaded{
                          [](const WilsonKernel&) { return std::string("wilson"); },
                          [](const IntegratedOUKernel&) { return std::string("integrated_ou"); },
                          [](const OUKernel&) { return std::string("ou"); },
                      },
                      kernel_);
}

void validate_tenor_grid(std::span<const double> tenors) {
    if (tenors.empty()) throw InvalidInput("tenor grid is empty");
    for (std::size_t i = 0; i < tenors.size(); ++i) {
        if (!std::isfinite(tenors[i]) || tenors[i] <= 0.0)
            throw InvalidInput("tenor " + std::to_string(i) + " must be finite and > 0");
        if (i > 0 && !(tenors[i] > tenors[i - 1]))
            throw InvalidInput("tenors must be strictly increasing (index " + std::to_string(i) + ")");
    }
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, std::span<const double> tenors) {
    validate_tenor_grid(tenors);
    const auto n = static_cast<Eigen::Index>(tenors.size());
    Eigen::MatrixXd m(n, n);
    for (Eigen::Index i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j <= i; ++j) {
            m(i, j) = spec(tenors[i], tenors[j]);
            m(j, i) = m(i, j);
        }
    }
    return m;
}

Eigen::MatrixXd kernel_matrix(const KernelSpec& spec, std::span<const double> s,
                              std::span<const double> t) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(s.size()), static_cast<Eigen::Index>(t.size()));
    for (std::size_t i = 0; i < s.size(); ++i)
        for (std::size_t j = 0; j < t.size(); ++j)
            m(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = spec(s[i], t[j]);
    return m;
}

}  // namespace swcurve
