#pragma once

#include <stdexcept>
#include <string>

namespace harnack {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

/// Quadrature failed to reach the requested tolerance; carries the best value
/// obtained so far.
struct AccuracyError : std::runtime_error {
  double best_estimate;
  AccuracyError(const std::string& msg, double best)
      : std::runtime_error(msg), best_estimate(best) {}
};

/// ODE state or right-hand side became non-finite; t_last is the last time
/// with a valid state.
struct BlowupError : std::runtime_error {
  double t_last;
  BlowupError(const std::string& msg, double t)
      : std::runtime_error(msg), t_last(t) {}
};

/// Estimate parameters violate the constraint stated for that estimate.
struct ConstructionError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// Mismatched or inconsistent run configuration (e.g. kernel/estimate geometry).
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

struct InputError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

/// The two sides of a splice disagree at the junction by |jump|.
struct SpliceError : std::runtime_error {
  double jump;
  SpliceError(const std::string& msg, double j)
      : std::runtime_error(msg), jump(j) {}
};

/// Profile admission failed; names the violated assumption ("A1" or "A2").
struct ProfileError : std::invalid_argument {
  std::string assumption;
  ProfileError(const std::string& msg, std::string which)
      : std::invalid_argument(msg), assumption(std::move(which)) {}
};

/// alpha(t) crossed 1, where the envelope ODE right-hand side is singular.
struct SingularityError : std::runtime_error {
  double t_cross;
  SingularityError(const std::string& msg, double t)
      : std::runtime_error(msg), t_cross(t) {}
};

}  // namespace harnack
