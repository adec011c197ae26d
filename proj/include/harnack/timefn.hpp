#pragma once

#include <functional>
#include <limits>
#include <string>
#include <vector>

#include "harnack/errors.hpp"

namespace harnack {

/// Which one-sided limit to take when differentiating at a kink.
enum class Side { central, left, right };

/// A scalar function of time with an optional analytic derivative.
///
/// TimeFn is the common currency of the library: the coefficient functions
/// alpha(t) and c(t) of a linear gradient estimate, and the profile a(t)
/// feeding the integral construction, are all TimeFns. Instances are
/// immutable after construction and safe to share across threads.
class TimeFn {
 public:
  using Fn = std::function<double(double)>;

  TimeFn() = default;
  TimeFn(Fn eval, std::string label, double t_lo = 0.0,
         double t_hi = std::numeric_limits<double>::infinity());

  static TimeFn analytic(Fn eval, Fn deriv, std::string label,
                         double t_lo = 0.0,
                         double t_hi = std::numeric_limits<double>::infinity());
  static TimeFn constant(double value, std::string label = {});

  /// Piecewise-linear interpolant of (ts, vals); ts strictly increasing.
  static TimeFn from_table(std::vector<double> ts, std::vector<double> vals,
                           std::string label);

  double operator()(double t) const;

  bool valid() const { return static_cast<bool>(eval_); }
  bool has_analytic_deriv() const { return static_cast<bool>(deriv_); }
  double analytic_deriv(double t) const;

  const std::string& label() const { return label_; }
  double t_lo() const { return t_lo_; }
  double t_hi() const { return t_hi_; }

  /// Times where the function is continuous but possibly not C1; verifiers
  /// check one-sided derivatives there.
  const std::vector<double>& kinks() const { return kinks_; }
  TimeFn with_kinks(std::vector<double> ks) const;

 private:
  Fn eval_;
  Fn deriv_;
  std::string label_;
  double t_lo_ = 0.0;
  double t_hi_ = std::numeric_limits<double>::infinity();
  std::vector<double> kinks_;
};

/// A linear estimate pair: the bound |grad log u|^2 <= alpha(t) (log u)_t + c(t).
struct EstimatePair {
  TimeFn alpha;
  TimeFn c;
};

/// Derivative of f at t. Uses the analytic derivative when present, otherwise
/// a central difference with step h = max(1e-6, 1e-6*t) (one-sided 3-point
/// stencils near domain ends). Side::left/right take the one-sided limit,
/// which is how declared kinks are handled.
double derivative_at(const TimeFn& f, double t, Side side = Side::central);

/// Definite integral of f over [lo, hi] by adaptive Simpson quadrature to
/// absolute tolerance tol. lo == 0 is treated as an open endpoint: the
/// interval is split into geometrically shrinking subintervals toward 0 so
/// integrable singularities converge; a non-integrable singularity raises
/// AccuracyError carrying the partial sum.
double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol = 1e-10);
double integrate(const TimeFn& f, double lo, double hi, double tol = 1e-10);

/// Classical 4th-order Runge-Kutta on a uniform grid from (t0, c0) to T.
/// The result interpolates linearly between nodes and reports rhs(t, c(t))
/// as its analytic derivative, which is exact along the true solution.
TimeFn ode_solve(const std::function<double(double, double)>& rhs, double t0,
                 double c0, double T, double step = 1e-3);

std::vector<double> log_spaced(double lo, double hi, int n);
std::vector<double> lin_spaced(double lo, double hi, int n);

}  // namespace harnack
