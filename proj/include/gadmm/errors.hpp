#pragma once

#include <cstddef>
#include <optional>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>

namespace gadmm {

class Error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class InvalidArgument : public Error {
public:
    using Error::Error;
};

// Non-finite data or iterates.
class NumericDomainError : public Error {
public:
    using Error::Error;
};

class UnsupportedVariant : public Error {
public:
    using Error::Error;
};

class SizeLimitError : public Error {
public:
    using Error::Error;
};

class InsufficientSamples : public Error {
public:
    using Error::Error;
};

// The proximal-gradient inner loop could not decrease the local objective.
class InnerDivergence : public Error {
public:
    InnerDivergence(const std::string& what, std::size_t user, std::optional<std::size_t> round = std::nullopt)
        : Error(what), user_(user), round_(round) {}

    std::size_t user() const noexcept { return user_; }
    std::optional<std::size_t> round() const noexcept { return round_; }

private:
    std::size_t user_;
    std::optional<std::size_t> round_;
};

// Hyperplane-projection line search ran out of backtracks.
class StepSearchFailed : public Error {
public:
    StepSearchFailed(const std::string& what, int last_l) : Error(what), last_l_(last_l) {}
    int last_l() const noexcept { return last_l_; }

private:
    int last_l_;
};

class NotConverged : public Error {
public:
    NotConverged(const std::string& what, Eigen::VectorXd best) : Error(what), best_(std::move(best)) {}
    const Eigen::VectorXd& best_iterate() const noexcept { return best_; }

private:
    Eigen::VectorXd best_;
};

}  // namespace gadmm
