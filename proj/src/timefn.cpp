#include "harnack/timefn.hpp"

#include <algorithm>
#include <cmath>
#include <memory>
#include <utility>

namespace harnack {

namespace {
constexpr double kInf = std::numeric_limits<double>::infinity();
}

TimeFn::TimeFn(Fn eval, std::string label, double t_lo, double t_hi)
    : eval_(std::move(eval)),
      label_(std::move(label)),
      t_lo_(t_lo),
      t_hi_(t_hi) {}

TimeFn TimeFn::analytic(Fn eval, Fn deriv, std::string label, double t_lo,
                        double t_hi) {
  TimeFn f(std::move(eval), std::move(label), t_lo, t_hi);
  f.deriv_ = std::move(deriv);
  return f;
}

TimeFn TimeFn::constant(double value, std::string label) {
  if (label.empty()) label = "const " + std::to_string(value);
  TimeFn f([value](double) { return value; }, std::move(label), -kInf, kInf);
  f.deriv_ = [](double) { return 0.0; };
  return f;
}

TimeFn TimeFn::from_table(std::vector<double> ts, std::vector<double> vals,
                          std::string label) {
  if (ts.size() != vals.size() || ts.size() < 2)
    throw InputError("from_table: need at least 2 matching (t, v) nodes");
  for (std::size_t i = 1; i < ts.size(); ++i)
    if (!(ts[i] > ts[i - 1]))
      throw InputError("from_table: times must be strictly increasing");
  const double lo = ts.front(), hi = ts.back();
  struct Table {
    std::vector<double> t, v;
  };
  auto tab = std::make_shared<const Table>(Table{std::move(ts), std::move(vals)});
  auto eval = [tab](double t) {
    const auto& T = tab->t;
    const auto& V = tab->v;
    const double tc = std::clamp(t, T.front(), T.back());
    auto it = std::upper_bound(T.begin(), T.end(), tc);
    std::size_t hi_ix = std::clamp<std::size_t>(
        static_cast<std::size_t>(it - T.begin()), 1, T.size() - 1);
    std::size_t lo_ix = hi_ix - 1;
    const double w = (tc - T[lo_ix]) / (T[hi_ix] - T[lo_ix]);
    return V[lo_ix] + w * (V[hi_ix] - V[lo_ix]);
  };
  return TimeFn(eval, std::move(label), lo, hi);
}

double TimeFn::operator()(double t) const {
  if (!eval_) throw DomainError("TimeFn: empty function");
  const double slack = 1e-9 * std::max(1.0, std::abs(t));
  if (t < t_lo_ - slack || t > t_hi_ + slack)
    throw DomainError("TimeFn '" + label_ + "': t out of domain");
  return eval_(t);
}

double TimeFn::analytic_deriv(double t) const {
  if (!deriv_) throw DomainError("TimeFn '" + label_ + "': no analytic derivative");
  return deriv_(t);
}

TimeFn TimeFn::with_kinks(std::vector<double> ks) const {
  TimeFn f = *this;
  std::sort(ks.begin(), ks.end());
  f.kinks_ = std::move(ks);
  return f;
}

double derivative_at(const TimeFn& f, double t, Side side) {
  double v;
  if (f.has_analytic_deriv()) {
    if (side == Side::central) {
      v = f.analytic_deriv(t);
    } else {
      // Evaluate the analytic derivative one ulp off the kink so piecewise
      // closures resolve to the requested one-sided branch without
      // perturbing the value beyond roundoff.
      const double inf = std::numeric_limits<double>::infinity();
      v = f.analytic_deriv(std::nextafter(t, side == Side::left ? -inf : inf));
    }
  } else {
    const double h = std::max(1e-6, 1e-6 * t);
    auto inside = [&](double x) { return x >= f.t_lo() && x <= f.t_hi(); };
    Side s = side;
    if (s == Side::central && !(inside(t - h) && inside(t + h)))
      s = inside(t - h) ? Side::left : Side::right;
    if (s == Side::central)
      v = (f(t + h) - f(t - h)) / (2 * h);
    else if (s == Side::right)
      v = (-3 * f(t) + 4 * f(t + h) - f(t + 2 * h)) / (2 * h);
    else
      v = (3 * f(t) - 4 * f(t - h) + f(t - 2 * h)) / (2 * h);
  }
  if (!std::isfinite(v))
    throw DomainError("derivative_at: non-finite derivative of '" + f.label() +
                      "'");
  return v;
}

namespace {

struct QuadAcc {
  double value = 0.0;
  bool converged = true;
};

void simpson_rec(const std::function<double(double)>& f, double a, double m,
                 double b, double fa, double fm, double fb, double whole,
                 double tol, int depth, QuadAcc& acc) {
  const double lm = 0.5 * (a + m), rm = 0.5 * (m + b);
  const double flm = f(lm), frm = f(rm);
  if (!std::isfinite(flm) || !std::isfinite(frm)) {
    acc.converged = false;
    acc.value += whole;
    return;
  }
  const double sl = (m - a) / 6.0 * (fa + 4.0 * flm + fm);
  const double sr = (b - m) / 6.0 * (fm + 4.0 * frm + fb);
  const double d = sl + sr - whole;
  // Second test is a relative floor: stop refining once the correction is
  // below roundoff for the magnitude at hand.
  if (std::abs(d) <= 15.0 * tol || std::abs(d) <= 5e-15 * std::abs(sl + sr)) {
    acc.value += sl + sr + d / 15.0;
    return;
  }
  if (depth <= 0) {
    acc.converged = false;
    acc.value += sl + sr + d / 15.0;
    return;
  }
  simpson_rec(f, a, lm, m, fa, flm, fm, sl, tol / 2, depth - 1, acc);
  simpson_rec(f, m, rm, b, fm, frm, fb, sr, tol / 2, depth - 1, acc);
}

QuadAcc simpson(const std::function<double(double)>& f, double a, double b,
                double tol, int depth = 48) {
  QuadAcc acc;
  const double m = 0.5 * (a + b);
  const double fa = f(a), fm = f(m), fb = f(b);
  if (!std::isfinite(fa) || !std::isfinite(fm) || !std::isfinite(fb)) {
    acc.converged = false;
    return acc;
  }
  const double whole = (b - a) / 6.0 * (fa + 4.0 * fm + fb);
  simpson_rec(f, a, m, b, fa, fm, fb, whole, tol, depth, acc);
  return acc;
}

}  // namespace

double integrate(const std::function<double(double)>& f, double lo, double hi,
                 double tol) {
  if (!(lo < hi)) throw DomainError("integrate: requires lo < hi");
  if (!(tol > 0)) throw InputError("integrate: tolerance must be positive");

  if (lo > 0.0) {
    auto acc = simpson(f, lo, hi, tol);
    if (!acc.converged)
      throw AccuracyError("integrate: quadrature did not converge", acc.value);
    return acc.value;
  }
  if (lo < 0.0)
    throw DomainError("integrate: negative lower limit not supported");

  // Open endpoint at 0: sum over octaves [b/2, b], [b/4, b/2], ... and stop
  // once the geometric tail extrapolation is below tolerance. The integrand
  // is never evaluated at 0.
  double total = 0.0;
  double prev = -1.0;
  double b = hi;
  bool ok = true;
  for (int k = 0; k < 240; ++k) {
    const double a = 0.5 * b;
    const double seg_tol = tol * std::pow(0.70710678118654752, k) / 8.0;
    auto seg = simpson(f, a, b, seg_tol);
    if (!seg.converged) ok = false;
    total += seg.value;
    const double cur = std::abs(seg.value);
    if (k >= 1) {
      if (cur == 0.0 && prev == 0.0) {
        if (!ok) throw AccuracyError("integrate: quadrature did not converge", total);
        return total;
      }
      const double r = cur / std::max(prev, 1e-300);
      if (r <= 0.9) {
        const double tail = seg.value * r / (1.0 - r);
        if (std::abs(tail) <= 0.5 * tol) {
          total += tail;
          if (!ok)
            throw AccuracyError("integrate: quadrature did not converge", total);
          return total;
        }
      }
    }
    prev = cur;
    b = a;
    if (b < 1e-280) break;
  }
  throw AccuracyError("integrate: integrand appears non-integrable near 0",
                      total);
}

double integrate(const TimeFn& f, double lo, double hi, double tol) {
  return integrate([&f](double t) { return f(t); }, lo, hi, tol);
}

TimeFn ode_solve(const std::function<double(double, double)>& rhs, double t0,
                 double c0, double T, double step) {
  if (!(t0 < T)) throw DomainError("ode_solve: requires t0 < T");
  if (!(step > 0)) throw InputError("ode_solve: step must be positive");
  if (!std::isfinite(c0)) throw InputError("ode_solve: c0 must be finite");

  std::vector<double> ts{t0}, cs{c0};
  double c = c0;
  const long n_full = static_cast<long>((T - t0) / step + 1e-9);
  double t = t0;
  for (long i = 0;; ++i) {
    const double t_next = (i < n_full) ? t0 + (i + 1) * step : T;
    if (t_next <= t + 1e-15 * std::max(1.0, std::abs(t))) break;
    const double h = t_next - t;
    const double k1 = rhs(t, c);
    const double k2 = rhs(t + 0.5 * h, c + 0.5 * h * k1);
    const double k3 = rhs(t + 0.5 * h, c + 0.5 * h * k2);
    const double k4 = rhs(t + h, c + h * k3);
    const double cn = c + h / 6.0 * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    if (!std::isfinite(k1) || !std::isfinite(k2) || !std::isfinite(k3) ||
        !std::isfinite(k4) || !std::isfinite(cn))
      throw BlowupError("ode_solve: solution blew up", t);
    c = cn;
    t = t_next;
    ts.push_back(t);
    cs.push_back(c);
    if (t >= T) break;
  }

  TimeFn tab = TimeFn::from_table(std::move(ts), std::move(cs), "ode");
  auto ev = [tab](double tt) { return tab(tt); };
  auto dv = [tab, rhs](double tt) { return rhs(tt, tab(tt)); };
  return TimeFn::analytic(std::move(ev), std::move(dv), "ode_solution", t0, T);
}

std::vector<double> log_spaced(double lo, double hi, int n) {
  if (!(lo > 0) || !(hi > lo) || n < 1)
    throw InputError("log_spaced: need 0 < lo < hi and n >= 1");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  const double la = std::log(lo), lb = std::log(hi);
  for (int i = 0; i < n; ++i)
    out[i] = std::exp(la + (lb - la) * i / (n - 1));
  out.front() = lo;
  out.back() = hi;
  return out;
}

std::vector<double> lin_spaced(double lo, double hi, int n) {
  if (!(hi > lo) || n < 1) throw InputError("lin_spaced: need lo < hi, n >= 1");
  std::vector<double> out(n);
  if (n == 1) {
    out[0] = lo;
    return out;
  }
  for (int i = 0; i < n; ++i) out[i] = lo + (hi - lo) * i / (n - 1);
  out.back() = hi;
  return out;
}

}  // namespace harnack
