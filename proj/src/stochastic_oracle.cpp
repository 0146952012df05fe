#include "swcurve/stochastic_oracle.hpp"

#include <cmath>
#include <functional>
#include <random>
#include <string>

#include <Eigen/Dense>

#include "swcurve/curve.hpp"
#include "swcurve/errors.hpp"
#include "swcurve/kernels.hpp"

namespace swcurve {
namespace {

std::size_t checked_ratio(double num, double den, const char* what) {
    const double r = num / den;
    const double n = std::round(r);
    if (n < 1.0 || std::abs(r - n) > 1e-9 * std::max(1.0, r))
        throw InvalidInput(std::string(what) + " must be a positive integer multiple of dt");
    return static_cast<std::size_t>(n);
}

PathEnsemble allocate(const SimulationConfig& c) {
    PathEnsemble e;
    e.n_paths = c.n_paths;
    const std::size_t stride = c.record_stride();
    for (std::size_t k = 0; k <= c.steps(); k += stride) e.times.push_back(static_cast<double>(k) * c.dt);
    const std::size_t cells = e.times.size() * e.n_paths;
    e.x.assign(cells, 0.0);
    e.xbar.assign(cells, 0.0);
    e.y.assign(cells, 0.0);
    return e;
}

void simulate_block(const SimulationConfig& c, std::size_t block, PathEnsemble& e) {
    std::seed_seq seq{static_cast<std::uint32_t>(c.seed), static_cast<std::uint32_t>(c.seed >> 32),
                      static_cast<std::uint32_t>(block), static_cast<std::uint32_t>(block >> 32)};
    std::mt19937_64 rng(seq);
    std::normal_distribution<double> normal;

    const std::size_t first = block * c.block_size;
    const std::size_t last = std::min(first + c.block_size, c.n_paths);
    const std::size_t steps = c.steps();
    const std::size_t stride = c.record_stride();
    const std::size_t n = e.n_paths;
    const double decay = std::exp(-c.alpha * c.dt);
    // Exact OU transition: Var[X_{t+dt} | X_t] = (alpha^2/2)(1 - e^{-2 alpha dt}).
    const double step_sd = std::sqrt(0.5 * c.alpha * c.alpha * -std::expm1(-2.0 * c.alpha * c.dt));

    for (std::size_t i = first; i < last; ++i) {
        double x = c.alpha * normal(rng);
        double xbar = 0.0;
        e.x[i] = x;
        e.xbar[i] = 0.0;
        e.y[i] = 1.0;
        std::size_t rec = 1;
        for (std::size_t k = 1; k <= steps; ++k) {
            const double next = x * decay + step_sd * normal(rng);
            xbar += 0.5 * c.dt * (x + next);
            x = next;
            if (k % stride == 0) {
                const std::size_t cell = rec * n + i;
                e.x[cell] = x;
                e.xbar[cell] = xbar;
                e.y[cell] = std::exp(-c.omega * e.times[rec]) * (1.0 + xbar);
                ++rec;
            }
        }
    }
}

std::size_t block_count(const SimulationConfig& c) { return (c.n_paths + c.block_size - 1) / c.block_size; }

}  // namespace

void SimulationConfig::validate() const {
    if (!(alpha > 0.0) || !(omega > 0.0)) throw InvalidInput("simulation: alpha and omega must be > 0");
    if (n_paths < 1) throw InvalidInput("simulation: need at least one path");
    if (!(dt > 0.0) || !(dt <= horizon)) throw InvalidInput("simulation: need 0 < dt <= horizon");
    if (block_size < 1) throw InvalidInput("simulation: block_size must be >= 1");
    (void)steps();
    (void)record_stride();
}

std::size_t SimulationConfig::steps() const { return checked_ratio(horizon, dt, "horizon"); }

std::size_t SimulationConfig::record_stride() const {
    return checked_ratio(record_interval, dt, "record_interval");
}

std::size_t PathEnsemble::time_index(double t) const {
    for (std::size_t k = 0; k < times.size(); ++k)
        if (std::abs(times[k] - t) <= 1e-9) return k;
    throw OffGridTime("time " + std::to_string(t) + " is not on the simulation record grid", t);
}

std::span<const double> PathEnsemble::series(Process p, std::size_t k) const {
    const std::vector<double>& v = p == Process::X ? x : (p == Process::Xbar ? xbar : y);
    return {v.data() + k * n_paths, n_paths};
}

PathEnsemble simulate_paths_serial(const SimulationConfig& config) {
    config.validate();
    PathEnsemble e = allocate(config);
    for (std::size_t b = 0; b < block_count(config); ++b) simulate_block(config, b, e);
    return e;
}

PathEnsemble simulate_paths(const SimulationConfig& config) {
    config.validate();
    PathEnsemble e = allocate(config);
    const auto blocks = static_cast<long>(block_count(config));
#pragma omp parallel for schedule(dynamic, 1)
    for (long b = 0; b < blocks; ++b) simulate_block(config, static_cast<std::size_t>(b), e);
    return e;
}

Estimate empirical_mean(const PathEnsemble& ensemble, double t, Process which) {
    const auto v = ensemble.series(which, ensemble.time_index(t));
    const double n = static_cast<double>(v.size());
    double mean = 0.0;
    for (double a : v) mean += a;
    mean /= n;
    double ss = 0.0;
    for (double a : v) ss += (a - mean) * (a - mean);
    const double var = v.size() > 1 ? ss / (n - 1.0) : 0.0;
    return {mean, std::sqrt(var / n)};
}

Estimate empirical_covariance(const PathEnsemble& ensemble, double s, double t, Process which) {
    if (ensemble.n_paths < 2) throw InvalidInput("covariance needs at least two paths");
    const auto a = ensemble.series(which, ensemble.time_index(s));
    const auto b = ensemble.series(which, ensemble.time_index(t));
    const double n = static_cast<double>(a.size());
    double ma = 0.0;
    double mb = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        ma += a[i];
        mb += b[i];
    }
    ma /= n;
    mb /= n;
    double sum = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) sum += (a[i] - ma) * (b[i] - mb);
    const double mean_product = sum / n;
    double ss = 0.0;
    for (std::size_t i = 0; i < a.size(); ++i) {
        const double d = (a[i] - ma) * (b[i] - mb) - mean_product;
        ss += d * d;
    }
    return {sum / (n - 1.0), std::sqrt(ss / (n - 1.0) / n)};
}

ConditionalCheck conditional_expectation_check(const PathEnsemble& ensemble, const SimulationConfig& config,
                                               const MarketCurve& market, double t) {
    market.validate();
    const std::vector<double> p = market.prices();
    const auto m = static_cast<Eigen::Index>(market.size());
    const std::size_t n = ensemble.n_paths;
    if (n <= market.size() + 1)
        throw DegenerateEmpiricalCovariance("need more paths than supporting tenors; increase n_paths");

    std::vector<std::span<const double>> xs;
    for (double u : market.tenors) xs.push_back(ensemble.series(Process::Y, ensemble.time_index(u)));
    const auto ys = ensemble.series(Process::Y, ensemble.time_index(t));

    Eigen::VectorXd xmean = Eigen::VectorXd::Zero(m);
    double ymean = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) xmean[j] += xs[static_cast<std::size_t>(j)][i];
        ymean += ys[i];
    }
    xmean /= static_cast<double>(n);
    ymean /= static_cast<double>(n);

    Eigen::MatrixXd sxx = Eigen::MatrixXd::Zero(m, m);
    Eigen::VectorXd sxy = Eigen::VectorXd::Zero(m);
    Eigen::VectorXd d(m);
    for (std::size_t i = 0; i < n; ++i) {
        for (Eigen::Index j = 0; j < m; ++j) d[j] = xs[static_cast<std::size_t>(j)][i] - xmean[j];
        sxx.selfadjointView<Eigen::Lower>().rankUpdate(d);
        sxy += d * (ys[i] - ymean);
    }
    sxx = sxx.selfadjointView<Eigen::Lower>();
    const double dof = static_cast<double>(n) - 1.0;
    sxx /= dof;
    sxy /= dof;

    Eigen::LDLT<Eigen::MatrixXd> ldlt(sxx);
    if (ldlt.info() != Eigen::Success || !ldlt.isPositive() || ldlt.vectorD().minCoeff() <= 0.0)
        throw DegenerateEmpiricalCovariance("empirical covariance of Y at the tenors is singular; increase n_paths");
    const Eigen::VectorXd coef = ldlt.solve(sxy);

    const Eigen::VectorXd pv = Eigen::Map<const Eigen::VectorXd>(p.data(), m);
    const Eigen::VectorXd shift = pv - xmean;

    double rss = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        double fit = ymean;
        for (Eigen::Index j = 0; j < m; ++j) fit += coef[j] * (xs[static_cast<std::size_t>(j)][i] - xmean[j]);
        rss += (ys[i] - fit) * (ys[i] - fit);
    }
    const double sigma2 = rss / (static_cast<double>(n) - static_cast<double>(m) - 1.0);

    ConditionalCheck out;
    out.mc_estimate = ymean + coef.dot(shift);
    out.standard_error =
        std::sqrt(sigma2 * (1.0 / static_cast<double>(n) + shift.dot(ldlt.solve(shift)) / dof));
    const SmithWilsonCurve curve =
        build_curve(market, KernelSpec(WilsonKernel{config.alpha, config.omega}), config.omega);
    out.closed_form = curve.discount(t);
    out.z_score = (out.mc_estimate - out.closed_form) / std::max(out.standard_error, 1e-12);
    return out;
}

ConditionalCheck conditional_expectation_check(const SimulationConfig& config, const MarketCurve& market,
                                               double t) {
    return conditional_expectation_check(simulate_paths(config), config, market, t);
}

namespace {

void for_each_subset(std::size_t n, std::size_t k, const std::function<void(const std::vector<std::size_t>&)>& f) {
    std::vector<std::size_t> idx(k);
    for (std::size_t i = 0; i < k; ++i) idx[i] = i;
    while (true) {
        f(idx);
        std::size_t i = k;
        while (i > 0 && idx[i - 1] == n - k + i - 1) --i;
        if (i == 0) return;
        ++idx[i - 1];
        for (std::size_t j = i; j < k; ++j) idx[j] = idx[j - 1] + 1;
    }
}

}  // namespace

TotalPositivityVerdict total_positivity_minors(double alpha, std::span<const TenorGridPair> grids,
                                               double tolerance) {
    TotalPositivityVerdict v;
    bool first = true;
    for (std::size_t g = 0; g < grids.size(); ++g) {
        const auto& pair = grids[g];
        if (pair.s.size() != pair.t.size() || pair.s.empty())
            throw InvalidInput("total positivity: grids must be non-empty and of equal size");
        for (std::size_t i = 1; i < pair.s.size(); ++i)
            if (!(pair.s[i] > pair.s[i - 1]) || !(pair.t[i] > pair.t[i - 1]))
                throw InvalidInput("total positivity: grids must be strictly increasing");
        const std::size_t n = pair.s.size();
        Eigen::MatrixXd k(static_cast<Eigen::Index>(n), static_cast<Eigen::Index>(n));
        for (std::size_t i = 0; i < n; ++i)
            for (std::size_t j = 0; j < n; ++j)
                k(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = ou_covariance(alpha, pair.s[i], pair.t[j]);
        for (std::size_t order = 1; order <= n; ++order) {
            for_each_subset(n, order, [&](const std::vector<std::size_t>& rows) {
                for_each_subset(n, order, [&](const std::vector<std::size_t>& cols) {
                    const auto o = static_cast<Eigen::Index>(order);
                    Eigen::MatrixXd sub(o, o);
                    for (Eigen::Index r = 0; r < o; ++r)
                        for (Eigen::Index c = 0; c < o; ++c)
                            sub(r, c) = k(static_cast<Eigen::Index>(rows[static_cast<std::size_t>(r)]),
                                          static_cast<Eigen::Index>(cols[static_cast<std::size_t>(c)]));
                    const double det = sub.partialPivLu().determinant();
                    ++v.minors_checked;
                    if (first || det < v.min_minor) v.min_minor = det;
                    first = false;
                    if (det < -tolerance) v.violations.push_back({g, rows, cols, det});
                });
            });
        }
    }
    v.holds = v.violations.empty();
    return v;
}

}  // namespace swcurve
