#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace growth {

// Invalid parameter value (negative rate, empty extent, malformed grid...).
class ArgumentError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

// Query outside the domain on which an object is defined.
class DomainError : public std::domain_error {
public:
    using std::domain_error::domain_error;
};

// The supplied data container cannot decide the query; widen it and retry.
class UndecidableError : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

// A light-cone trimmed window has no exact sites left.
class WindowExhausted : public std::runtime_error {
public:
    WindowExhausted(const std::string& what, std::int64_t required_width)
        : std::runtime_error(what), required_width_(required_width) {}
    std::int64_t required_width() const noexcept { return required_width_; }

private:
    std::int64_t required_width_;
};

// A variational optimum sits on the edge of the search grid.
class GridNotLocalized : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

}  // namespace growth
