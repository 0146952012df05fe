#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "swcurve/market.hpp"

namespace swcurve {

/// Simulation of dX = -alpha X dt + alpha^{3/2} dB with X_0 ~ N(0, alpha^2),
/// Xbar_t = int_0^t X ds and Y_t = exp(-omega t)(1 + Xbar_t).
struct SimulationConfig {
    double alpha = 0.1;
    double omega = 0.04114194;
    std::size_t n_paths = 100000;
    double dt = 1.0 / 64.0;
    double horizon = 10.0;
    std::uint64_t seed = 1;
    /// Spacing of the stored time grid; a multiple of dt.
    double record_interval = 1.0;
    /// Paths per independently seeded block.
    std::size_t block_size = 4096;

    void validate() const;
    std::size_t steps() const;
    std::size_t record_stride() const;
};

enum class Process { X, Xbar, Y };

/// Recorded paths, stored time-major: value(p, k, i) is path i at times[k].
struct PathEnsemble {
    std::vector<double> times;
    std::size_t n_paths = 0;
    std::vector<double> x;
    std::vector<double> xbar;
    std::vector<double> y;

    /// Throws OffGridTime unless t is (within 1e-9) a recorded time.
    std::size_t time_index(double t) const;
    std::span<const double> series(Process p, std::size_t time_index) const;
};

/// OpenMP over path blocks; bit-identical to simulate_paths_serial.
PathEnsemble simulate_paths(const SimulationConfig& config);
PathEnsemble simulate_paths_serial(const SimulationConfig& config);

struct Estimate {
    double value = 0.0;
    double standard_error = 0.0;
};

Estimate empirical_mean(const PathEnsemble& ensemble, double t, Process which);
/// Unbiased sample covariance with the standard error of the mean of centred products.
Estimate empirical_covariance(const PathEnsemble& ensemble, double s, double t, Process which);

struct ConditionalCheck {
    double mc_estimate = 0.0;
    double standard_error = 0.0;
    double closed_form = 0.0;
    double z_score = 0.0;
};

/// Plugs empirical moments of Y into the Gaussian conditioning formula and
/// compares with the fitted curve at t. The plug-in estimate equals the
/// least-squares prediction of Y_t from Y_u at u = p, whose standard error is used.
ConditionalCheck conditional_expectation_check(const PathEnsemble& ensemble, const SimulationConfig& config,
                                               const MarketCurve& market, double t);
ConditionalCheck conditional_expectation_check(const SimulationConfig& config, const MarketCurve& market,
                                               double t);

struct TenorGridPair {
    std::vector<double> s;
    std::vector<double> t;
};

struct TotalPositivityVerdict {
    struct Violation {
        std::size_t grid = 0;
        std::vector<std::size_t> rows;
        std::vector<std::size_t> cols;
        double minor = 0.0;
    };
    bool holds = true;
    std::size_t minors_checked = 0;
    double min_minor = 0.0;
    std::vector<Violation> violations;
};

/// Every minor of every order of (K(s_i, t_j)) for each grid pair, K the OU covariance.
TotalPositivityVerdict total_positivity_minors(double alpha, std::span<const TenorGridPair> grids,
                                               double tolerance = 1e-12);

}  // namespace swcurve
