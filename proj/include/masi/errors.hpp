#pragma once

#include <stdexcept>
#include <string>

namespace masi {

/// Input rejected before any computation (bad parameter range, malformed
/// matrix, unknown generator family).
class validation_error : public std::invalid_argument {
public:
    explicit validation_error(const std::string& what) : std::invalid_argument(what) {}
};

/// The computation is well-posed but the arguments left the domain of the
/// requested quantity (zero eigenvalue under t^{-1/2}, rank-deficient state
/// on a modular path, non-regular metric where a regular one is required).
class domain_error : public std::domain_error {
public:
    explicit domain_error(const std::string& what) : std::domain_error(what) {}
};

/// A numeric procedure failed to stabilize (finite differences disagree,
/// limit sequence oscillates).
class numerical_error : public std::runtime_error {
public:
    explicit numerical_error(const std::string& what) : std::runtime_error(what) {}
};

} // namespace masi
