#include "swcurve/hedging.hpp"

#include <cmath>
#include <string>

#include "swcurve/errors.hpp"

namespace swcurve {
namespace {

void finish(const SmithWilsonCurve& curve, HedgeReport& r) {
    const auto& p = curve.prices();
    r.tenors = curve.tenors();
    r.exposures.resize(r.beta.size());
    r.sign_pattern.resize(r.beta.size());
    r.gross_exposure = 0.0;
    for (std::size_t i = 0; i < r.beta.size(); ++i) {
        r.exposures[i] = r.beta[i] * p[i];
        r.gross_exposure += std::abs(r.exposures[i]);
        r.sign_pattern[i] = std::abs(r.beta[i]) <= kSignThreshold ? 0 : (r.beta[i] > 0.0 ? 1 : -1);
    }
}

Eigen::VectorXd beta_vector(const SmithWilsonCurve& curve, double t) {
    return curve.solve_gram(curve.instrument_covariance(t));
}

}  // namespace

HedgeReport hedge_weights(const SmithWilsonCurve& curve, double t) {
    const Eigen::VectorXd b = beta_vector(curve, t);
    HedgeReport r;
    r.beta.assign(b.data(), b.data() + b.size());
    r.beta0 = curve.prior_mean(t) - b.dot(curve.instrument_prior_means());
    r.liability_pv = curve.discount(t);
    finish(curve, r);
    return r;
}

HedgeReport hedge_weights_cashflow(const SmithWilsonCurve& curve, const CashFlowSchedule& cashflows) {
    cashflows.validate();
    Eigen::VectorXd b = Eigen::VectorXd::Zero(static_cast<Eigen::Index>(curve.size()));
    HedgeReport r;
    for (std::size_t k = 0; k < cashflows.size(); ++k) {
        const double t = cashflows.times[k];
        const double c = cashflows.amounts[k];
        const Eigen::VectorXd bk = beta_vector(curve, t);
        b += c * bk;
        r.beta0 += c * (curve.prior_mean(t) - bk.dot(curve.instrument_prior_means()));
        r.liability_pv += c * curve.discount(t);
    }
    r.beta.assign(b.data(), b.data() + b.size());
    finish(curve, r);
    return r;
}

SignPatternVerdict sign_pattern_check(const HedgeReport& report, std::size_t n_support) {
    if (report.beta.size() != n_support)
        throw InvalidInput("report has " + std::to_string(report.beta.size()) + " weights, expected " +
                           std::to_string(n_support));
    SignPatternVerdict v;
    for (std::size_t i = 0; i < n_support; ++i) {
        if (std::abs(report.beta[i]) <= kSignThreshold) continue;
        ++v.checked;
        const int expected = ((n_support - 1 - i) % 2 == 0) ? 1 : -1;
        if ((report.beta[i] > 0.0 ? 1 : -1) != expected) v.violations.push_back(i);
    }
    v.holds = v.violations.empty();
    return v;
}

double gross_exposure_ratio(const HedgeReport& report) {
    if (!(report.liability_pv > 0.0))
        throw UndefinedRatio("gross exposure ratio needs a positive liability PV, got " +
                             std::to_string(report.liability_pv));
    return report.gross_exposure / report.liability_pv;
}

DurationReport modified_duration_sw(const SmithWilsonCurve& curve, const CashFlowSchedule& cashflows) {
    if (!curve.zero_coupon()) throw InvalidInput("modified duration needs a zero-coupon curve");
    const HedgeReport h = hedge_weights_cashflow(curve, cashflows);
    if (h.liability_pv == 0.0) throw UndefinedRatio("modified duration undefined for zero present value");
    // dp_i/d(delta) = -u_i p_i, so dP^c/d(delta) = -sum_i beta^c_i u_i p_i.
    double sensitivity = 0.0;
    double printed = 0.0;
    for (std::size_t i = 0; i < h.beta.size(); ++i) {
        sensitivity += h.beta[i] * h.tenors[i] * curve.prices()[i];
        printed += h.beta[i] * h.tenors[i];
    }
    DurationReport d;
    d.present_value = h.liability_pv;
    d.definitional = sensitivity / h.liability_pv;
    d.printed_closed_form = printed / h.liability_pv;
    d.discrepancy = d.printed_closed_form - d.definitional;
    return d;
}

double msep(const SmithWilsonCurve& curve, double t) {
    const Eigen::VectorXd k = curve.instrument_covariance(t);
    const double v = curve.prior_variance(t) - k.dot(curve.solve_gram(k));
    return v > 0.0 ? v : 0.0;
}

Eigen::MatrixXd precision_matrix(const KernelSpec& kernel, std::span<const double> tenors) {
    const Eigen::MatrixXd k = kernel_matrix(kernel, tenors);
    return k.llt().solve(Eigen::MatrixXd::Identity(k.rows(), k.cols()));
}

std::string to_string(MMatrixVerdict::Failure f) {
    switch (f) {
        case MMatrixVerdict::Failure::None: return "none";
        case MMatrixVerdict::Failure::NonPositiveDiagonal: return "non-positive diagonal";
        case MMatrixVerdict::Failure::PositiveOffDiagonal: return "positive off-diagonal entry";
        case MMatrixVerdict::Failure::NonPositiveLeadingMinor: return "non-positive leading principal minor";
        case MMatrixVerdict::Failure::NonPositivePrincipalMinor: return "non-positive principal minor";
    }
    return "unknown";
}

MMatrixVerdict is_m_matrix(const Eigen::MatrixXd& a, double zero_tolerance) {
    if (a.rows() != a.cols() || a.rows() == 0) throw InvalidInput("is_m_matrix needs a non-empty square matrix");
    const Eigen::Index n = a.rows();
    const double tol = zero_tolerance * a.cwiseAbs().maxCoeff();
    MMatrixVerdict v;
    auto fail = [&](MMatrixVerdict::Failure f, std::string detail) {
        v.is_m_matrix = false;
        v.failure = f;
        v.detail = std::move(detail);
        return v;
    };
    for (Eigen::Index i = 0; i < n; ++i)
        if (!(a(i, i) > tol))
            return fail(MMatrixVerdict::Failure::NonPositiveDiagonal, "A(" + std::to_string(i) + "," +
                                                                          std::to_string(i) + ") <= 0");
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < n; ++j)
            if (i != j && a(i, j) > tol)
                return fail(MMatrixVerdict::Failure::PositiveOffDiagonal,
                            "A(" + std::to_string(i) + "," + std::to_string(j) + ") = " + std::to_string(a(i, j)));

    for (Eigen::Index k = 1; k <= n; ++k) {
        const double det = a.topLeftCorner(k, k).partialPivLu().determinant();
        if (!(det > 0.0))
            return fail(MMatrixVerdict::Failure::NonPositiveLeadingMinor,
                        "leading minor of order " + std::to_string(k) + " = " + std::to_string(det));
    }
    if (n <= 8) {
        for (unsigned mask = 1; mask < (1u << n); ++mask) {
            std::vector<Eigen::Index> idx;
            for (Eigen::Index i = 0; i < n; ++i)
                if (mask & (1u << i)) idx.push_back(i);
            const auto m = static_cast<Eigen::Index>(idx.size());
            Eigen::MatrixXd sub(m, m);
            for (Eigen::Index r = 0; r < m; ++r)
                for (Eigen::Index c = 0; c < m; ++c) sub(r, c) = a(idx[r], idx[c]);
            const double det = sub.partialPivLu().determinant();
            if (!(det > 0.0))
                return fail(MMatrixVerdict::Failure::NonPositivePrincipalMinor,
                            "principal minor on index mask " + std::to_string(mask) + " = " + std::to_string(det));
        }
    }
    return v;
}

}  // namespace swcurve
