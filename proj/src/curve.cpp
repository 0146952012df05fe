#include "swcurve/curve.hpp"

#include <cmath>
#include <limits>
#include <map>
#include <string>

#include "swcurve/errors.hpp"

namespace swcurve {
namespace {

void check_tenor(double t) {
    if (!std::isfinite(t) || t < 0.0)
        throw InvalidInput("tenor must be finite and >= 0, got " + std::to_string(t));
}

Eigen::VectorXd to_vector(std::span<const double> v) {
    return Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size()));
}

}  // namespace

double SmithWilsonCurve::prior_mean(double t) const { return std::exp(-omega_ * t); }

double SmithWilsonCurve::discount(double t) const {
    check_tenor(t);
    double sum = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j)
        sum += node_weights_[static_cast<Eigen::Index>(j)] * kernel_(t, nodes_[j]);
    return std::exp(-omega_ * t) + sum;
}

double SmithWilsonCurve::discount_derivative(double t) const {
    check_tenor(t);
    double sum = 0.0;
    for (std::size_t j = 0; j < nodes_.size(); ++j)
        sum += node_weights_[static_cast<Eigen::Index>(j)] * kernel_.d_first(t, nodes_[j]);
    return -omega_ * std::exp(-omega_ * t) + sum;
}

double SmithWilsonCurve::forward_intensity(double t) const {
    const double p = discount(t);
    if (p == 0.0) throw SingularForward("forward intensity undefined where P(t) = 0", t);
    return -discount_derivative(t) / p;
}

double SmithWilsonCurve::spot_rate(double t) const {
    if (!(t > 0.0)) throw InvalidInput("spot rate needs t > 0");
    const double p = discount(t);
    if (!(p > 0.0))
        throw NoRealSpotRate("discount factor " + std::to_string(p) + " at t = " + std::to_string(t) +
                                 " has no real spot rate",
                             t, p);
    return -std::log(p) / t;
}

double SmithWilsonCurve::present_value(const CashFlowSchedule& cashflows) const {
    cashflows.validate();
    double pv = 0.0;
    for (std::size_t k = 0; k < cashflows.size(); ++k)
        pv += cashflows.amounts[k] * discount(cashflows.times[k]);
    return pv;
}

CurveHealth SmithWilsonCurve::health(double horizon, double step) const {
    if (!(horizon > 0.0) || !(step > 0.0)) throw InvalidInput("health grid needs horizon, step > 0");
    CurveHealth h;
    h.grid_step = step;
    h.horizon = horizon;
    h.condition_number = condition_;
    const auto n = static_cast<long>(std::floor(horizon / step + 1e-9));
    bool in_run = false;
    for (long k = 1; k <= n; ++k) {
        const double t = static_cast<double>(k) * step;
        const double p = discount(t);
        if (p < h.min_discount) {
            h.min_discount = p;
            h.min_discount_tenor = t;
        }
        if (p <= 0.0) {
            if (!in_run) h.negative_intervals.push_back({t, t});
            h.negative_intervals.back().last = t;
            in_run = true;
            if (!h.first_negative_tenor) h.first_negative_tenor = t;
        } else {
            in_run = false;
        }
    }
    if (h.first_negative_tenor) {
        double lo = *h.first_negative_tenor - step;
        double hi = *h.first_negative_tenor;
        for (int i = 0; i < 200 && hi - lo > 1e-13 * hi; ++i) {
            const double mid = 0.5 * (lo + hi);
            (discount(mid) > 0.0 ? lo : hi) = mid;
        }
        h.first_zero_crossing = hi;
    }
    return h;
}

Eigen::VectorXd SmithWilsonCurve::instrument_covariance(double t) const {
    check_tenor(t);
    Eigen::VectorXd k(static_cast<Eigen::Index>(nodes_.size()));
    for (std::size_t j = 0; j < nodes_.size(); ++j) k[static_cast<Eigen::Index>(j)] = kernel_(t, nodes_[j]);
    if (zero_coupon_) return k;
    return cashflows_ * k;
}

Eigen::VectorXd SmithWilsonCurve::solve_gram(const Eigen::VectorXd& rhs) const { return gram_.solve(rhs); }

namespace {

struct Fit {
    Eigen::LLT<Eigen::MatrixXd> llt;
    Eigen::VectorXd solution;
    double condition;
};

Fit factor_and_solve(const Eigen::MatrixXd& gram, const Eigen::VectorXd& rhs) {
    Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(gram, Eigen::EigenvaluesOnly);
    const double lmin = eig.eigenvalues().minCoeff();
    const double lmax = eig.eigenvalues().maxCoeff();
    const double cond = std::abs(lmin) > 0.0 ? std::abs(lmax / lmin) : std::numeric_limits<double>::infinity();
    Fit fit{Eigen::LLT<Eigen::MatrixXd>(gram), {}, cond};
    if (fit.llt.info() != Eigen::Success || !(lmin > 0.0))
        throw SingularSystem("kernel matrix is not numerically positive definite (condition " +
                                 std::to_string(cond) + ", min eigenvalue " + std::to_string(lmin) + ")",
                             cond, lmin);
    fit.solution = fit.llt.solve(rhs);
    // one step of iterative refinement
    fit.solution += fit.llt.solve(rhs - gram * fit.solution);
    return fit;
}

}  // namespace

SmithWilsonCurve build_curve(const MarketCurve& market, const KernelSpec& kernel, double omega) {
    market.validate();
    if (!(omega > 0.0) || !std::isfinite(omega)) throw InvalidInput("omega must be finite and > 0");
    SmithWilsonCurve c(kernel, omega);
    c.zero_coupon_ = true;
    c.tenors_ = market.tenors;
    c.prices_ = market.prices();
    c.nodes_ = market.tenors;
    const auto n = static_cast<Eigen::Index>(c.tenors_.size());
    c.cashflows_ = Eigen::MatrixXd::Identity(n, n);
    c.prior_means_.resize(n);
    for (Eigen::Index i = 0; i < n; ++i) c.prior_means_[i] = std::exp(-omega * c.tenors_[static_cast<std::size_t>(i)]);

    const Eigen::MatrixXd gram = kernel_matrix(kernel, c.tenors_);
    Fit fit = factor_and_solve(gram, to_vector(c.prices_) - c.prior_means_);
    c.gram_ = std::move(fit.llt);
    c.zeta_ = fit.solution;
    c.node_weights_ = c.zeta_;
    c.condition_ = fit.condition;
    return c;
}

SmithWilsonCurve build_curve(const MarketCurve& market, double alpha, const CurveConfig& config) {
    config.validate();
    return build_curve(market, KernelSpec(WilsonKernel{alpha, config.omega()}), config.omega());
}

SmithWilsonCurve build_curve_coupon(std::span<const CashFlowSchedule> instruments,
                                    std::span<const double> prices, const KernelSpec& kernel,
                                    double omega) {
    if (instruments.empty()) throw InvalidInput("no instruments");
    if (instruments.size() != prices.size())
        throw InvalidInput("instrument count does not match price count");
    std::map<double, Eigen::Index> grid;
    for (const auto& ins : instruments) {
        ins.validate();
        if (ins.empty()) throw InvalidInput("instrument without cash flows");
        for (double t : ins.times) grid.emplace(t, 0);
    }
    Eigen::Index col = 0;
    std::vector<double> nodes;
    for (auto& [t, idx] : grid) {
        idx = col++;
        nodes.push_back(t);
    }
    const auto n = static_cast<Eigen::Index>(instruments.size());
    Eigen::MatrixXd cf = Eigen::MatrixXd::Zero(n, col);
    for (Eigen::Index k = 0; k < n; ++k) {
        const auto& ins = instruments[static_cast<std::size_t>(k)];
        for (std::size_t j = 0; j < ins.size(); ++j) cf(k, grid.at(ins.times[j])) = ins.amounts[j];
    }

    // An instrument that does not raise the rank of the rows before it is redundant.
    std::vector<std::size_t> dependent;
    Eigen::Index rank = 0;
    for (Eigen::Index k = 0; k < n; ++k) {
        Eigen::FullPivLU<Eigen::MatrixXd> lu(cf.topRows(k + 1));
        lu.setThreshold(1e-12);
        const Eigen::Index r = lu.rank();
        if (r == rank) dependent.push_back(static_cast<std::size_t>(k));
        rank = r;
    }
    if (!dependent.empty()) {
        std::string list;
        for (auto i : dependent) list += (list.empty() ? "" : ", ") + std::to_string(i);
        throw RankDeficient("cash-flow matrix is rank deficient; dependent instruments: " + list, dependent);
    }

    SmithWilsonCurve c(kernel, omega);
    c.zero_coupon_ = false;
    for (const auto& ins : instruments) c.tenors_.push_back(ins.times.back());
    c.prices_.assign(prices.begin(), prices.end());
    c.nodes_ = nodes;
    c.cashflows_ = cf;
    Eigen::VectorXd q(col);
    for (Eigen::Index j = 0; j < col; ++j) q[j] = std::exp(-omega * nodes[static_cast<std::size_t>(j)]);
    c.prior_means_ = cf * q;

    const Eigen::MatrixXd knodes = kernel_matrix(kernel, nodes, nodes);
    const Eigen::MatrixXd gram = cf * knodes * cf.transpose();
    Fit fit = factor_and_solve(gram, to_vector(prices) - c.prior_means_);
    c.gram_ = std::move(fit.llt);
    c.zeta_ = fit.solution;
    c.node_weights_ = cf.transpose() * c.zeta_;
    c.condition_ = fit.condition;
    return c;
}

SmithWilsonCurve build_curve_coupon(std::span<const CashFlowSchedule> instruments,
                                    std::span<const double> prices, double alpha,
                                    const CurveConfig& config) {
    config.validate();
    return build_curve_coupon(instruments, prices, KernelSpec(WilsonKernel{alpha, config.omega()}),
                              config.omega());
}

}  // namespace swcurve
