#pragma once

#include <stdexcept>
#include <string>
#include <vector>

namespace swcurve {

/// Base class for every failure raised by the library.
class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidInput : public Error {
public:
    using Error::Error;
};

/// The kernel (Gram) matrix could not be factorized as symmetric positive definite.
class SingularSystem : public Error {
public:
    SingularSystem(const std::string& what, double condition_number, double min_eigenvalue)
        : Error(what), condition_number(condition_number), min_eigenvalue(min_eigenvalue) {}
    double condition_number;
    double min_eigenvalue;
};

/// Coupon instruments whose cash-flow vectors are linearly dependent on earlier ones.
class RankDeficient : public Error {
public:
    RankDeficient(const std::string& what, std::vector<std::size_t> indices)
        : Error(what), offending_instruments(std::move(indices)) {}
    std::vector<std::size_t> offending_instruments;
};

/// P(t) <= 0, so no real continuously compounded spot rate exists.
class NoRealSpotRate : public Error {
public:
    NoRealSpotRate(const std::string& what, double tenor, double discount)
        : Error(what), tenor(tenor), discount(discount) {}
    double tenor;
    double discount;
};

/// P(t) == 0, so the forward intensity -P'/P is undefined.
class SingularForward : public Error {
public:
    SingularForward(const std::string& what, double tenor) : Error(what), tenor(tenor) {}
    double tenor;
};

/// kappa has a vanishing denominator (market exactly on the UFR curve).
class DegenerateKappa : public Error {
public:
    using Error::Error;
};

/// The convergence criterion has a pole at this alpha (P(CP; alpha) == 0).
class CriterionSingularity : public Error {
public:
    CriterionSingularity(const std::string& what, double alpha) : Error(what), alpha(alpha) {}
    double alpha;
};

class UndefinedRatio : public Error {
public:
    using Error::Error;
};

/// Requested time is not on the simulation record grid.
class OffGridTime : public Error {
public:
    OffGridTime(const std::string& what, double time) : Error(what), time(time) {}
    double time;
};

/// Empirical covariance not invertible; more paths are needed.
class DegenerateEmpiricalCovariance : public Error {
public:
    using Error::Error;
};

class ParseError : public Error {
public:
    using Error::Error;
};

}  // namespace swcurve
