#pragma once

#include <string>
#include <vector>

#include "harnack/timefn.hpp"
#include "harnack/types.hpp"

namespace harnack {

/// Coefficients of the certifying quadratic q(x) = A x^2 + B x + C at a fixed
/// time, where x stands for |grad log u|^2. The pair (alpha, c) certifies the
/// gradient bound at time t exactly when q(x) <= 0 for every x >= 0.
/// A = -2(1-alpha)^2/(n alpha^2) is never positive; A = 0 iff alpha(t) = 1.
struct QuadCoeffs {
  double A = 0.0;
  double B = 0.0;
  double C = 0.0;
  double t = 0.0;
  /// Sums of the absolute term magnitudes that formed B and C; sign checks
  /// tolerate 1e-12 of these, so exact cancellations classify as zero.
  double scale_B = 0.0;
  double scale_C = 0.0;
};

enum class Verdict { holds_case1, holds_case2, holds_degenerate, fails };
const char* to_string(Verdict v);

QuadCoeffs quad_coeffs(const TimeFn& alpha, const TimeFn& c, double t,
                       const GeometryParams& p, Side side = Side::central);

/// Sign criterion: (1-alpha) c <= n alpha (alpha' - 2 K alpha)/4 and
/// (alpha/c)' <= 2/(n alpha). Equivalent to B <= 0 and C <= 0.
bool case1_check(const TimeFn& alpha, const TimeFn& c, double t,
                 const GeometryParams& p, Side side = Side::central);

/// Discriminant criterion: (1-alpha)^2 c' >= (1-alpha)(2K - alpha') c
/// + n (2 K alpha - alpha')^2 / 8. Equivalent to B^2 - 4AC <= 0.
bool case2_check(const TimeFn& alpha, const TimeFn& c, double t,
                 const GeometryParams& p, Side side = Side::central);

/// Classification of a downward (or degenerate) parabola on [0, inf):
/// nonpositive iff either both B <= 0 and C <= 0 (case 1) or the discriminant
/// is nonpositive (case 2); for A = 0 the linear function needs B <= 0 and
/// C <= 0 (degenerate).
Verdict classify(const QuadCoeffs& q);

Verdict condition_holds(const TimeFn& alpha, const TimeFn& c, double t,
                        const GeometryParams& p, Side side = Side::central);

/// Brute-force maximum of A x^2 + B x + C over a uniform grid on [0, x_max].
/// x_max <= 0 selects the default 2(1 + |B/A|) when A < -1e-14, else 1e3,
/// which always covers the parabola vertex.
double grid_oracle(const QuadCoeffs& q, double x_max = 0.0, int points = 2001);

struct ConditionRow {
  double t = 0.0;
  QuadCoeffs q;
  Verdict verdict = Verdict::fails;
  double margin = 0.0;  // grid_oracle maximum; <= 0 when the condition holds
  Side side = Side::central;
};

struct ConditionReport {
  std::vector<ConditionRow> rows;
  double worst_margin = 0.0;
  bool all_hold = true;
  std::string to_csv() const;  // columns: t,A,B,C,verdict,margin
};

/// Evaluates the condition on log-spaced samples of [t_lo, t_hi]. Declared
/// kinks of alpha or c inside the interval get two extra rows checking both
/// one-sided derivatives; both must pass.
ConditionReport verify_over_interval(const TimeFn& alpha, const TimeFn& c,
                                     const GeometryParams& p, double t_lo,
                                     double t_hi, int points);

}  // namespace harnack
