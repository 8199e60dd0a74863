#pragma once

#include <stdexcept>
#include <string>

namespace sswm {

/// Argument outside the mathematical domain of an operation (N < 1, beta <= 0, k = 0, ...).
class domain_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// A problem/parameter binding that cannot be constructed (odd n for Balance, d out of range).
class parameter_error : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Operation requested on a problem it does not support (exact chain for Balance).
class unsupported_problem : public std::invalid_argument {
public:
    using std::invalid_argument::invalid_argument;
};

/// Markov chain whose optimum is unreachable from some start state.
class structural_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

class numerical_error : public std::runtime_error {
public:
    using std::runtime_error::runtime_error;
};

} // namespace sswm
