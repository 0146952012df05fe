#include <gtest/gtest.h>

#include <cmath>
#include <algorithm>
#include <limits>
#include <random>

#include "swcurve/errors.hpp"
#include "swcurve/kernels.hpp"

using namespace swcurve;

namespace {
const double kOmega = std::log(1.042);

void expect_rel(double actual, double expected, double rel) {
    EXPECT_NEAR(actual, expected, rel * std::abs(expected)) << "expected " << expected;
}
}  // namespace

// Reference values computed at 50 digits with mpmath.
TEST(Kernels, FrozenHighPrecisionValues) {
    expect_rel(h_kernel(0.22, 20, 30), 4.3446067716692281812, 1e-14);
    expect_rel(wilson_kernel(0.1, kOmega, 5, 12), 0.17045316697789844695, 1e-14);
    expect_rel(ou_covariance(0.1, 2, 5), 0.0061870176223656369039, 1e-14);
}

TEST(Kernels, SmallArgumentsKeepRelativeAccuracy) {
    expect_rel(h_kernel(1e-3, 1e-3, 2e-3), 1.999997833334999999e-12, 1e-12);
    expect_rel(h_kernel(1e-6, 0.5, 0.5), 2.499999166666875e-13, 1e-12);
    EXPECT_EQ(h_kernel(0.3, 0.0, 7.0), 0.0);
}

TEST(Kernels, SymmetricInArguments) {
    for (double s : {0.5, 3.0, 17.0})
        for (double t : {0.25, 4.0, 40.0}) {
            EXPECT_EQ(h_kernel(0.13, s, t), h_kernel(0.13, t, s));
            EXPECT_EQ(ou_covariance(0.13, s, t), ou_covariance(0.13, t, s));
        }
}

TEST(Kernels, WilsonIsDiscountScaledH) {
    const std::vector<double> u = {1, 2, 5, 10, 20, 30};
    const Eigen::MatrixXd w = kernel_matrix(KernelSpec(WilsonKernel{0.12, kOmega}), u);
    const Eigen::MatrixXd h = kernel_matrix(KernelSpec(IntegratedOUKernel{0.12}), u);
    for (std::size_t i = 0; i < u.size(); ++i)
        for (std::size_t j = 0; j < u.size(); ++j) {
            const double qhq = std::exp(-kOmega * u[i]) * h(i, j) * std::exp(-kOmega * u[j]);
            EXPECT_NEAR(w(i, j), qhq, 1e-14 * std::abs(qhq));
        }
}

TEST(Kernels, DerivativeMatchesFiniteDifference) {
    const double a = 0.17;
    for (auto [s, t] : {std::pair{2.0, 9.0}, {9.0, 2.0}, {0.3, 0.1}}) {
        const double e = 1e-6;
        const double fd = (h_kernel(a, s + e, t) - h_kernel(a, s - e, t)) / (2 * e);
        EXPECT_NEAR(h_kernel_ds(a, s, t), fd, 1e-8);
    }
}

TEST(Kernels, OUKernelShapeAndRightDerivative) {
    const KernelSpec k(OUKernel{0.5, 0.2});
    EXPECT_NEAR(k(3, 3), 0.04 / 1.0, 1e-15);
    EXPECT_NEAR(k(1, 3), 0.04 * std::exp(-1.0), 1e-15);
    EXPECT_TRUE(k.precision_is_m_matrix());
    EXPECT_FALSE(KernelSpec(WilsonKernel{0.1, kOmega}).precision_is_m_matrix());
    const double e = 1e-7;
    EXPECT_NEAR(k.d_first(2, 2), (k(2 + e, 2) - k(2, 2)) / e, 1e-6);
}

TEST(Kernels, RejectsInvalidArguments) {
    const double nan = std::numeric_limits<double>::quiet_NaN();
    EXPECT_THROW(h_kernel(0.0, 1, 2), InvalidInput);
    EXPECT_THROW(h_kernel(-0.1, 1, 2), InvalidInput);
    EXPECT_THROW(h_kernel(0.1, -1, 2), InvalidInput);
    EXPECT_THROW(h_kernel(0.1, nan, 2), InvalidInput);
    EXPECT_THROW(wilson_kernel(0.1, 0.0, 1, 2), InvalidInput);
    EXPECT_THROW(KernelSpec(OUKernel{0.1, 0.0}), InvalidInput);
}

TEST(Kernels, GridMustBeStrictlyIncreasing) {
    const KernelSpec k(IntegratedOUKernel{0.1});
    EXPECT_THROW(kernel_matrix(k, std::vector<double>{1, 2, 2}), InvalidInput);
    EXPECT_THROW(kernel_matrix(k, std::vector<double>{}), InvalidInput);
    EXPECT_THROW(kernel_matrix(k, std::vector<double>{0, 1}), InvalidInput);
}

TEST(Kernels, AlternativeOuKernelValues) {
    EXPECT_NEAR(alt_ou_kernel(1.0, 1.0, 0.0, std::log(2.0)), 0.25, 1e-15);
    EXPECT_NEAR(alt_ou_kernel(0.4, 0.3, 7.0, 7.0), 0.09 / 0.8, 1e-15);
    const Eigen::MatrixXd k = kernel_matrix(KernelSpec(OUKernel{0.7, 0.2}), std::vector<double>{1, 2, 3});
    const Eigen::MatrixXd inv = k.inverse();
    for (int i = 0; i < 3; ++i)
        for (int j = 0; j < 3; ++j)
            if (i != j) EXPECT_LE(inv(i, j), 1e-12 * inv.cwiseAbs().maxCoeff());
}

TEST(Kernels, BoundaryValues) {
    EXPECT_EQ(wilson_kernel(0.1, kOmega, 0.0, 5.0), 0.0);
    EXPECT_NEAR(ou_covariance(0.3, 0.0, 0.0), 0.09, 1e-15);
    const Eigen::MatrixXd one = kernel_matrix(KernelSpec(WilsonKernel{0.1, kOmega}), std::vector<double>{1.0});
    EXPECT_EQ(one.rows(), 1);
    EXPECT_DOUBLE_EQ(one(0, 0), wilson_kernel(0.1, kOmega, 1, 1));
}

TEST(Kernels, LargeArgumentsStayFinite) {
    const double h = h_kernel(10.0, 100.0, 120.0);
    EXPECT_TRUE(std::isfinite(h));
    EXPECT_NEAR(h, 1000.0, 1e-9);
    EXPECT_TRUE(std::isfinite(ou_covariance(10.0, 100.0, 120.0)));
}

TEST(Kernels, RandomGridsFactorize) {
    std::mt19937_64 rng(5);
    std::uniform_int_distribution<int> n(1, 20);
    std::uniform_real_distribution<double> alpha(0.05, 1.0);
    for (int g = 0; g < 200; ++g) {
        std::vector<double> u;
        std::uniform_real_distribution<double> t(0.25, 120.0);
        const int size = n(rng);
        while (static_cast<int>(u.size()) < size) {
            const double x = std::round(t(rng) * 4.0) / 4.0;
            if (std::find(u.begin(), u.end(), x) == u.end()) u.push_back(x);
        }
        std::sort(u.begin(), u.end());
        const Eigen::MatrixXd w = kernel_matrix(KernelSpec(WilsonKernel{alpha(rng), kOmega}), u);
        EXPECT_EQ(w.llt().info(), Eigen::Success) << "grid " << g;
    }
}
