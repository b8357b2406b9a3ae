#ifndef HEATCTL_ERRORS_HPP
#define HEATCTL_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace heatctl {

/// Base class for all toolkit errors.
class Error : public std::runtime_error {
public:
  explicit Error(const std::string& what) : std::runtime_error(what) {}
};

/// Invalid configuration, argument, or precondition violation.
/// CLI maps this to exit status 2.
class ConfigError : public Error {
public:
  explicit ConfigError(const std::string& what) : Error(what) {}
};

/// Solver non-convergence or numerical degeneracy.
/// CLI maps this to exit status 3.
class NumericalError : public Error {
public:
  explicit NumericalError(const std::string& what) : Error(what) {}
};

} // namespace heatctl

#endif
