#include "harnack/condition.hpp"

#include <algorithm>
#include <cmath>
#include <set>

#include "harnack/csvio.hpp"

namespace harnack {

namespace {

// Inequality checks accept absolute slack 1e-12 scaled by the magnitude of
// the terms involved, so analytic equality cases classify as holding.
bool leq(double lhs, double rhs, double term_scale = 0.0) {
  const double scale =
      std::max({1.0, std::abs(lhs), std::abs(rhs), term_scale});
  return lhs - rhs <= 1e-12 * scale;
}

}  // namespace

const char* to_string(Verdict v) {
  switch (v) {
    case Verdict::holds_case1: return "holds_case1";
    case Verdict::holds_case2: return "holds_case2";
    case Verdict::holds_degenerate: return "holds_degenerate";
    case Verdict::fails: return "fails";
  }
  return "?";
}

QuadCoeffs quad_coeffs(const TimeFn& alpha, const TimeFn& c, double t,
                       const GeometryParams& p, Side side) {
  validate(p);
  if (!(t > 0)) throw DomainError("quad_coeffs: t must be positive");
  const double a = alpha(t);
  const double cv = c(t);
  if (!(a > 0) || !(cv > 0))
    throw DomainError("quad_coeffs: alpha and c must be positive at t");
  const double ad = derivative_at(alpha, t, side);
  const double cd = derivative_at(c, t, side);
  const double na2 = p.n * a * a;

  QuadCoeffs q;
  q.t = t;
  q.A = -2.0 * (1.0 - a) * (1.0 - a) / na2;
  q.B = 2.0 * p.K + 4.0 * (1.0 - a) * cv / na2 - ad / a;
  q.C = -2.0 * cv * cv / na2 - cd + ad * cv / a;
  q.scale_B = 2.0 * std::abs(p.K) + 4.0 * std::abs(1.0 - a) * cv / na2 +
              std::abs(ad) / a;
  q.scale_C = 2.0 * cv * cv / na2 + std::abs(cd) + std::abs(ad) * cv / a;
  if (!std::isfinite(q.A) || !std::isfinite(q.B) || !std::isfinite(q.C))
    throw DomainError("quad_coeffs: non-finite coefficient");
  return q;
}

bool case1_check(const TimeFn& alpha, const TimeFn& c, double t,
                 const GeometryParams& p, Side side) {
  validate(p);
  const double a = alpha(t), cv = c(t);
  if (!(t > 0) || !(a > 0) || !(cv > 0))
    throw DomainError("case1_check: need t > 0, alpha > 0, c > 0");
  const double ad = derivative_at(alpha, t, side);
  const double cd = derivative_at(c, t, side);

  const double lhs1 = (1.0 - a) * cv;
  const double rhs1 = p.n * a * (ad - 2.0 * p.K * a) / 4.0;
  const double sc1 = p.n * a * (std::abs(ad) + 2.0 * std::abs(p.K) * a) / 4.0;
  const double lhs2 = (ad * cv - a * cd) / (cv * cv);  // (alpha/c)'
  const double rhs2 = 2.0 / (p.n * a);
  const double sc2 = (std::abs(ad) * cv + a * std::abs(cd)) / (cv * cv);
  return leq(lhs1, rhs1, sc1) && leq(lhs2, rhs2, sc2);
}

bool case2_check(const TimeFn& alpha, const TimeFn& c, double t,
                 const GeometryParams& p, Side side) {
  validate(p);
  const double a = alpha(t), cv = c(t);
  if (!(t > 0) || !(a > 0) || !(cv > 0))
    throw DomainError("case2_check: need t > 0, alpha > 0, c > 0");
  const double ad = derivative_at(alpha, t, side);
  const double cd = derivative_at(c, t, side);

  const double lhs = (1.0 - a) * (1.0 - a) * cd;
  const double s = 2.0 * p.K * a - ad;
  const double rhs = (1.0 - a) * (2.0 * p.K - ad) * cv + p.n * s * s / 8.0;
  const double smag = 2.0 * std::abs(p.K) * a + std::abs(ad);
  const double sc = std::abs(1.0 - a) * (2.0 * std::abs(p.K) + std::abs(ad)) * cv +
                    p.n * smag * smag / 8.0;
  return leq(rhs, lhs, sc);
}

Verdict classify(const QuadCoeffs& q) {
  const bool b_ok = leq(q.B, 0.0, q.scale_B);
  const bool c_ok = leq(q.C, 0.0, q.scale_C);
  if (q.A > -1e-14) return (b_ok && c_ok) ? Verdict::holds_degenerate : Verdict::fails;
  if (b_ok && c_ok) return Verdict::holds_case1;
  const double disc = q.B * q.B - 4.0 * q.A * q.C;
  const double scale = std::max({1.0, q.scale_B * q.scale_B,
                                 std::abs(4.0 * q.A) * q.scale_C, q.B * q.B,
                                 std::abs(4.0 * q.A * q.C)});
  if (disc <= 1e-12 * scale) return Verdict::holds_case2;
  return Verdict::fails;
}

Verdict condition_holds(const TimeFn& alpha, const TimeFn& c, double t,
                        const GeometryParams& p, Side side) {
  return classify(quad_coeffs(alpha, c, t, p, side));
}

double grid_oracle(const QuadCoeffs& q, double x_max, int points) {
  if (x_max <= 0.0)
    x_max = (q.A < -1e-14) ? 2.0 * (1.0 + std::abs(q.B / q.A)) : 1e3;
  if (points < 2) throw InputError("grid_oracle: points must be >= 2");
  double best = -std::numeric_limits<double>::infinity();
  for (int i = 0; i < points; ++i) {
    const double x = x_max * i / (points - 1);
    best = std::max(best, (q.A * x + q.B) * x + q.C);
  }
  return best;
}

std::string ConditionReport::to_csv() const {
  std::string out = "t,A,B,C,verdict,margin\n";
  for (const auto& r : rows) {
    out += csv_num(r.t);
    out += ',';
    out += csv_num(r.q.A);
    out += ',';
    out += csv_num(r.q.B);
    out += ',';
    out += csv_num(r.q.C);
    out += ',';
    out += to_string(r.verdict);
    out += ',';
    out += csv_num(r.margin);
    out += '\n';
  }
  return out;
}

ConditionReport verify_over_interval(const TimeFn& alpha, const TimeFn& c,
                                     const GeometryParams& p, double t_lo,
                                     double t_hi, int points) {
  if (!(0 < t_lo && t_lo < t_hi))
    throw DomainError("verify_over_interval: need 0 < t_lo < t_hi");

  struct Sample {
    double t;
    Side side;
  };
  std::vector<Sample> samples;
  for (double t : log_spaced(t_lo, t_hi, points))
    samples.push_back({t, Side::central});

  std::set<double> kink_ts;
  for (const auto& src : {alpha.kinks(), c.kinks()})
    for (double k : src)
      if (k > t_lo && k < t_hi) kink_ts.insert(k);
  for (double k : kink_ts) {
    samples.push_back({k, Side::left});
    samples.push_back({k, Side::right});
  }
  std::stable_sort(samples.begin(), samples.end(),
                   [](const Sample& a, const Sample& b) { return a.t < b.t; });

  ConditionReport rep;
  rep.worst_margin = -std::numeric_limits<double>::infinity();
  for (const auto& s : samples) {
    ConditionRow row;
    row.t = s.t;
    row.side = s.side;
    row.q = quad_coeffs(alpha, c, s.t, p, s.side);
    row.verdict = classify(row.q);
    row.margin = grid_oracle(row.q);
    rep.worst_margin = std::max(rep.worst_margin, row.margin);
    if (row.verdict == Verdict::fails) rep.all_hold = false;
    rep.rows.push_back(row);
  }
  return rep;
}

}  // namespace harnack
