#pragma once

#include <functional>
#include <string>
#include <vector>

#include "harnack/timefn.hpp"
#include "harnack/types.hpp"

namespace harnack {

/// A generating profile a(t) > 0 for the integral construction. Admissible
/// profiles vanish at 0 together with a/a' (checked numerically at the two
/// probe times, a heuristic admission test) and have a'^2/a integrable at 0.
struct Profile {
  TimeFn a;
  /// Optional closed forms for the small-time integrals over [0, eps]:
  /// head_int_a = integral of a, head_int_q = integral of a'^2/a. Built-in
  /// profiles provide them so quadrature never has to resolve the endpoint.
  std::function<double(double)> head_int_a;
  std::function<double(double)> head_int_q;
  std::vector<double> admission_ts = {1e-4, 1e-6};
  /// Derivative discontinuities (table nodes for CSV profiles); integrals
  /// split at them so quadrature only ever sees smooth pieces.
  std::vector<double> breakpoints;

  static Profile quadratic();             // a(t) = t^2
  static Profile sinh_squared(double K);  // a(t) = sinh^2(K t), K > 0
  static Profile from_timefn(TimeFn a);

  /// Two-column CSV "t,a" with strictly increasing t > 0. Below the first
  /// node the table is extended by a quadratic through the origin, the
  /// mildest extension compatible with an integrable a'^2/a.
  static Profile from_csv(const std::string& path);
};

/// Throws ProfileError naming "A1" or "A2" when the profile is inadmissible.
void check_profile(const Profile& prof);

/// Integral construction of an estimate pair from a profile:
///   alpha(t) = 1 + 2K/a(t) * int_0^t a,
///   c(t)     = nK/2 + nK^2/(2a(t)) * int_0^t a + n/(8a(t)) * int_0^t a'^2/a.
/// Cumulative integrals are tabulated on t_grid (evaluation between
/// checkpoints re-integrates locally, so the returned functions are smooth
/// and carry exact analytic derivatives in terms of the tabulated integrals).
EstimatePair pair_from_profile(const Profile& prof, const GeometryParams& p,
                               const std::vector<double>& t_grid);

/// Minimal-c envelope for a given alpha: integrates the discriminant
/// criterion as an equality ODE
///   c' = [ (1-alpha)(2K - alpha') c + n (2K alpha - alpha')^2 / 8 ] / (1-alpha)^2
/// forward from (t0, c0). alpha(t) = 1 anywhere on [t0, T] is singular.
TimeFn envelope_ode(const TimeFn& alpha, const GeometryParams& p, double t0,
                    double c0, double T, double step = 1e-3);

struct SpliceReport {
  double t0 = 0.0;
  double alpha_jump = 0.0;
  double c_jump = 0.0;
  double c_dleft = 0.0;
  double c_dright = 0.0;
  double c1_gap = 0.0;
  bool is_c1 = false;
};

/// Joins `first` on (0, t0] with `second` on (t0, inf). Both alpha and c must
/// be continuous at t0 (|jump| <= 1e-10 scaled); the report carries the
/// one-sided derivatives of c at the junction and whether they agree.
std::pair<EstimatePair, SpliceReport> splice(const EstimatePair& first,
                                             const EstimatePair& second,
                                             double t0);

/// Closed forms of the two built-in profiles' pairs, used as cross-check
/// targets: "quadratic_profile" gives alpha = 1 + 2Kt/3,
/// c = n/2t + nK/2 (1 + Kt/3); "sinh_profile" gives
/// alpha = 1 + (sinh(Kt)cosh(Kt) - Kt)/sinh^2(Kt), c = nK/2 (coth(Kt) + 1).
EstimatePair closed_form_special(const std::string& name,
                                 const GeometryParams& p);

}  // namespace harnack
