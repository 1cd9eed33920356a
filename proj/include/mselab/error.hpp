#pragma once

#include <stdexcept>
#include <string>

namespace mselab {

class Error : public std::runtime_error {
public:
  using std::runtime_error::runtime_error;
};

class ParseError : public Error {
public:
  using Error::Error;
};

class InvalidArgument : public Error {
public:
  using Error::Error;
};

/// ĝ not symmetric positive definite, c not positive, or the
/// ∂ₓₙc = ∂ₓₙ²c = 0 precondition violated at xₙ = 0.
class MetricInvalid : public Error {
public:
  using Error::Error;
};

/// c(x′, u(x′)) ≤ 0 for the current iterate.
class DomainEscape : public Error {
public:
  using Error::Error;
};

class NoConvergence : public Error {
public:
  NoConvergence(const std::string& what, double last_residual)
      : Error(what), last_residual_(last_residual) {}
  [[nodiscard]] double last_residual() const { return last_residual_; }

private:
  double last_residual_;
};

class SingularOperator : public Error {
public:
  using Error::Error;
};

class IllPosed : public Error {
public:
  using Error::Error;
};

class NotClosed : public Error {
public:
  using Error::Error;
};

class StencilEscape : public Error {
public:
  using Error::Error;
};

class GridMismatch : public Error {
public:
  using Error::Error;
};

class IoError : public Error {
public:
  using Error::Error;
};

/// A pipeline failure, labelled with the stage that raised it.
class StageError : public Error {
public:
  StageError(std::string stage, const std::string& what)
      : Error("stage " + stage + ": " + what), stage_(std::move(stage)) {}
  [[nodiscard]] const std::string& stage() const { return stage_; }

private:
  std::string stage_;
};

}  // namespace mselab
