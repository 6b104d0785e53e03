#ifndef KERRMZI_ERRORS_HPP
#define KERRMZI_ERRORS_HPP

#include <stdexcept>
#include <string>

namespace kerrmzi {

/// Input tail mass at the chosen cutoff exceeds the allowed tolerance.
class TruncationError : public std::runtime_error {
public:
  explicit TruncationError(const std::string& what) : std::runtime_error(what) {}
};

/// Detector-efficiency smearing applied to an already smeared distribution.
class DoubleSmearError : public std::logic_error {
public:
  explicit DoubleSmearError(const std::string& what) : std::logic_error(what) {}
};

/// Analytic and finite-difference distribution derivatives disagree.
class DerivativeMismatchError : public std::runtime_error {
public:
  explicit DerivativeMismatchError(const std::string& what) : std::runtime_error(what) {}
};

/// Closed-form reference requested outside its chi = pi/2 validity domain.
class UnsupportedChi : public std::domain_error {
public:
  explicit UnsupportedChi(const std::string& what) : std::domain_error(what) {}
};

/// Cramer-Rao bound requested for non-positive Fisher information.
class ZeroInformation : public std::domain_error {
public:
  explicit ZeroInformation(const std::string& what) : std::domain_error(what) {}
};

/// g2(0) requested for a mode with (numerically) zero mean photon number.
class UndefinedG2 : public std::domain_error {
public:
  explicit UndefinedG2(const std::string& what) : std::domain_error(what) {}
};

/// A density block developed an eigenvalue below the -1e-10 floor.
class PositivityError : public std::runtime_error {
public:
  explicit PositivityError(const std::string& what) : std::runtime_error(what) {}
};

/// Scenario configuration problem. `kind` separates unreadable/unparsable
/// input (Parse) from well-formed values outside their domain (Domain);
/// the CLI maps them to distinct exit codes.
class ConfigError : public std::runtime_error {
public:
  enum class Kind { Parse, Domain };

  ConfigError(Kind kind, std::string field, const std::string& what)
      : std::runtime_error(what), kind_(kind), field_(std::move(field)) {}

  Kind kind() const { return kind_; }
  const std::string& field() const { return field_; }

private:
  Kind kind_;
  std::string field_;
};

}  // namespace kerrmzi

#endif
