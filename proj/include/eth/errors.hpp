#pragma once

#include <stdexcept>
#include <string>

namespace eth {

/// A truncation window (eps, Lambda, lambda or x-degree) ran out.
class TruncationExhausted : public std::runtime_error
{
public:
    TruncationExhausted(std::string window, const std::string &what)
        : std::runtime_error(what), window_(std::move(window)) {}

    const std::string &window() const noexcept { return window_; }

private:
    std::string window_;
};

class PreconditionError : public std::invalid_argument
{
public:
    using std::invalid_argument::invalid_argument;
};

/// A compatibility condition failed while integrating a system.
class IntegrabilityError : public std::runtime_error
{
public:
    using std::runtime_error::runtime_error;
};

class ConsistencyError : public std::logic_error
{
public:
    using std::logic_error::logic_error;
};

} // namespace eth
