#pragma once

#include <stdexcept>
#include <string>

namespace isinggof {

struct ValidationError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct InvalidSwapError : std::logic_error {
    using std::logic_error::logic_error;
};

struct InfeasibleFiberError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct DoesNotFitError : std::invalid_argument {
    using std::invalid_argument::invalid_argument;
};

struct BudgetExceededError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

struct UnderSampledError : std::runtime_error {
    UnderSampledError(int chain, const std::string& what)
        : std::runtime_error(what), chain_index(chain) {}
    int chain_index;
};

struct ParseError : std::runtime_error {
    ParseError(const std::string& what, long line = -1)
        : std::runtime_error(line >= 0 ? what + " (line " + std::to_string(line) + ")" : what),
          line_number(line) {}
    long line_number;
};

} // namespace isinggof
