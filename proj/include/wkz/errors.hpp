#pragma once

#include <cstdint>
#include <stdexcept>
#include <string>

namespace wkz {

// Raised when a request exceeds a configured cell/cost budget.  Carries the
// cost that would have been needed so callers can report it.
class BudgetError : public std::runtime_error {
public:
    BudgetError(std::string what, uint64_t required, uint64_t allowed)
        : std::runtime_error(std::move(what)), required_(required), allowed_(allowed) {}
    uint64_t required() const { return required_; }
    uint64_t allowed() const { return allowed_; }

private:
    uint64_t required_;
    uint64_t allowed_;
};

// Invalid run configuration (bad key, unparsable value, missing input).
class ConfigError : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

} // namespace wkz
