#pragma once

#include <stdexcept>
#include <string>

namespace levyerg {

enum class ErrorKind {
    ModelInvalid,
    Divergence,
    TailIndexMismatch,
    QuadratureFailure,
    SeriesDivergence,
    InvalidRateFunction,
    Precondition,
    OutOfRange,
    Explosion,
    Cutoff,
    BalanceViolation,
    NotApplicable,
    NoInwardDrift,
    Config,
};

const char* to_string(ErrorKind kind);

/// Base error of the library. Every failure carries a kind so callers
/// (the CLI in particular) can map it without string matching.
class Error : public std::runtime_error {
public:
    Error(ErrorKind kind, const std::string& what)
        : std::runtime_error(what), kind_(kind) {}

    ErrorKind kind() const noexcept { return kind_; }

private:
    ErrorKind kind_;
};

/// Adaptive quadrature did not reach tolerance; reports the panel with the
/// largest remaining error estimate.
class QuadratureError : public Error {
public:
    QuadratureError(const std::string& what, double lo, double hi, double err)
        : Error(ErrorKind::QuadratureFailure, what), lo_(lo), hi_(hi), err_(err) {}

    double panel_lo() const noexcept { return lo_; }
    double panel_hi() const noexcept { return hi_; }
    double panel_error() const noexcept { return err_; }

private:
    double lo_, hi_, err_;
};

/// A simulated chain left the representable range.
class ExplosionError : public Error {
public:
    ExplosionError(const std::string& what, long long step, long long replica, double state)
        : Error(ErrorKind::Explosion, what), step_(step), replica_(replica), state_(state) {}

    long long step() const noexcept { return step_; }
    long long replica() const noexcept { return replica_; }
    double state() const noexcept { return state_; }

private:
    long long step_;
    long long replica_;
    double state_;
};

inline void require(bool cond, ErrorKind kind, const std::string& msg) {
    if (!cond) throw Error(kind, msg);
}

}  // namespace levyerg
