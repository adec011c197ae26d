#include "harnack/designer.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <memory>
#include <sstream>

#include "harnack/catalog.hpp"

namespace harnack {

namespace {

constexpr double kTMin = 1e-8;  // closed-form head covers [0, kTMin]
constexpr double kQuadTol = 1e-13;

double sinh_minus_x_local(double x) {
  if (std::abs(x) < 0.75) {
    const double x2 = x * x;
    return x * x2 / 6.0 *
           (1.0 +
            x2 / 20.0 *
                (1.0 + x2 / 42.0 * (1.0 + x2 / 72.0 * (1.0 + x2 / 110.0 * (1.0 + x2 / 156.0)))));
  }
  return std::sinh(x) - x;
}

double xcosh_minus_sinh_local(double x) {
  if (std::abs(x) < 0.75) {
    const double x2 = x * x;
    return x * x2 / 3.0 *
           (1.0 +
            x2 / 10.0 *
                (1.0 + x2 / 28.0 * (1.0 + x2 / 54.0 * (1.0 + x2 / 88.0 * (1.0 + x2 / 130.0)))));
  }
  return x * std::cosh(x) - std::sinh(x);
}

// a'(t)^2 / a(t) built from the profile's analytic derivative.
std::function<double(double)> q_integrand(const TimeFn& a) {
  return [a](double t) {
    const double ad = derivative_at(a, t);
    return ad * ad / a(t);
  };
}

// Plain quadrature split at the breakpoints inside [lo, hi], so piecewise
// integrands (tabulated profiles) never present a jump to the Simpson rule.
double split_integrate(const std::function<double(double)>& f, double lo,
                       double hi, double tol,
                       const std::vector<double>& breaks) {
  double acc = 0.0, a = lo;
  auto it = std::upper_bound(breaks.begin(), breaks.end(), lo);
  for (; it != breaks.end() && *it < hi; ++it) {
    if (*it > a) {
      acc += integrate(f, a, *it, tol);
      a = *it;
    }
  }
  if (hi > a) acc += integrate(f, a, hi, tol);
  return acc;
}

// Cumulative integrals of f checkpointed on a grid; evaluation between
// checkpoints integrates the short remainder, so results are smooth in t.
class Cumulative {
 public:
  Cumulative(std::function<double(double)> f, double head_at_tmin,
             const std::vector<double>& grid, std::vector<double> breaks)
      : f_(std::move(f)), breaks_(std::move(breaks)) {
    ts_.push_back(kTMin);
    vals_.push_back(head_at_tmin);
    double t_prev = kTMin, acc = head_at_tmin;
    for (double t : grid) {
      if (!(t > t_prev)) continue;
      acc += split_integrate(f_, t_prev, t, kQuadTol, breaks_);
      ts_.push_back(t);
      vals_.push_back(acc);
      t_prev = t;
    }
  }

  double operator()(double t) const {
    if (!(t > 0)) throw DomainError("profile integral: t must be positive");
    if (t <= ts_.front())
      return vals_.front() - split_integrate(f_, t, ts_.front(), kQuadTol, breaks_);
    auto it = std::upper_bound(ts_.begin(), ts_.end(), t);
    const std::size_t ix = static_cast<std::size_t>(it - ts_.begin()) - 1;
    if (ts_[ix] == t) return vals_[ix];
    return vals_[ix] + split_integrate(f_, ts_[ix], t, kQuadTol, breaks_);
  }

 private:
  std::function<double(double)> f_;
  std::vector<double> breaks_;
  std::vector<double> ts_;
  std::vector<double> vals_;
};

}  // namespace

Profile Profile::quadratic() {
  Profile p;
  p.a = TimeFn::analytic([](double t) { return t * t; },
                         [](double t) { return 2.0 * t; }, "t^2", 0.0);
  p.head_int_a = [](double e) { return e * e * e / 3.0; };
  p.head_int_q = [](double e) { return 4.0 * e; };
  return p;
}

Profile Profile::sinh_squared(double K) {
  if (!(K > 0)) throw InputError("sinh_squared profile requires K > 0");
  Profile p;
  p.a = TimeFn::analytic(
      [K](double t) {
        const double s = std::sinh(K * t);
        return s * s;
      },
      [K](double t) { return K * std::sinh(2.0 * K * t); }, "sinh^2(Kt)", 0.0);
  // int_0^e sinh^2(Ks) ds = (sinh(2Ke) - 2Ke)/(4K);
  // a'^2/a = 4K^2 cosh^2(Ks), whose integral is 2K^2 e + K sinh(2Ke).
  p.head_int_a = [K](double e) { return sinh_minus_x_local(2.0 * K * e) / (4.0 * K); };
  p.head_int_q = [K](double e) { return 2.0 * K * K * e + K * std::sinh(2.0 * K * e); };
  return p;
}

Profile Profile::from_timefn(TimeFn a) {
  Profile p;
  p.a = std::move(a);
  return p;
}

Profile Profile::from_csv(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw InputError("cannot open profile CSV '" + path + "'");
  std::vector<double> ts, as;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::replace(line.begin(), line.end(), ',', ' ');
    std::istringstream ls(line);
    double t, a;
    if (!(ls >> t >> a)) {
      if (ts.empty()) continue;  // header row
      throw InputError("profile CSV '" + path + "': malformed line");
    }
    ts.push_back(t);
    as.push_back(a);
  }
  if (ts.size() < 2) throw InputError("profile CSV '" + path + "': need >= 2 rows");
  for (std::size_t i = 0; i < ts.size(); ++i) {
    if (!(ts[i] > 0)) throw InputError("profile CSV: times must be positive");
    if (!(as[i] > 0)) throw InputError("profile CSV: values must be positive");
    if (i > 0 && !(ts[i] > ts[i - 1]))
      throw InputError("profile CSV: times must be strictly increasing");
  }

  struct Tab {
    std::vector<double> t, v;
    double p = 2.0;  // sub-table power-law exponent
  };
  Tab built{std::move(ts), std::move(as), 2.0};
  // Below the first node, extend by a1 (t/t1)^p with p matching the first
  // chord slope, so a and a' are continuous at the junction. a'^2/a stays
  // integrable at 0 exactly when p > 1.
  built.p = (built.v[1] - built.v[0]) / (built.t[1] - built.t[0]) *
            built.t[0] / built.v[0];
  auto tab = std::make_shared<const Tab>(std::move(built));
  auto eval = [tab](double t) {
    const auto& T = tab->t;
    const auto& V = tab->v;
    if (t < T.front()) return V.front() * std::pow(t / T.front(), tab->p);
    const double tc = std::min(t, T.back());
    auto it = std::upper_bound(T.begin(), T.end(), tc);
    std::size_t hi = std::clamp<std::size_t>(
        static_cast<std::size_t>(it - T.begin()), 1, T.size() - 1);
    std::size_t lo = hi - 1;
    const double w = (tc - T[lo]) / (T[hi] - T[lo]);
    return V[lo] + w * (V[hi] - V[lo]);
  };
  auto deriv = [tab](double t) {
    const auto& T = tab->t;
    const auto& V = tab->v;
    if (t < T.front())
      return tab->p * V.front() / T.front() * std::pow(t / T.front(), tab->p - 1.0);
    const double tc = std::min(t, T.back());
    auto it = std::upper_bound(T.begin(), T.end(), tc);
    std::size_t hi = std::clamp<std::size_t>(
        static_cast<std::size_t>(it - T.begin()), 1, T.size() - 1);
    std::size_t lo = hi - 1;
    return (V[hi] - V[lo]) / (T[hi] - T[lo]);
  };
  Profile p;
  p.a = TimeFn::analytic(std::move(eval), std::move(deriv),
                         "csv:" + path, 0.0, tab->t.back());
  p.admission_ts = {tab->t[1], tab->t[0]};  // two smallest table points
  p.breakpoints = tab->t;
  return p;
}

void check_profile(const Profile& prof) {
  if (!prof.a.valid()) throw InputError("profile has no a(t)");
  if (prof.admission_ts.size() < 2)
    throw InputError("profile needs two admission probe times");
  const double t1 = prof.admission_ts[0], t2 = prof.admission_ts[1];
  auto ratio = [&](double t) {
    const double ad = derivative_at(prof.a, t);
    if (ad == 0.0) return std::numeric_limits<double>::infinity();
    return std::abs(prof.a(t) / ad);
  };
  const double a1 = prof.a(t1), a2 = prof.a(t2);
  if (!(a1 > 0) || !(a2 > 0))
    throw ProfileError("profile must be positive for t > 0", "A1");
  if (!(a1 < 1e-2 && a2 < a1))
    throw ProfileError("profile does not vanish at 0 (checked at probe times)",
                       "A1");
  const double r1 = ratio(t1), r2 = ratio(t2);
  if (!(r1 < 1e-2 && r2 < r1))
    throw ProfileError("a/a' does not vanish at 0 (checked at probe times)",
                       "A1");
  const double L = std::min(1.0, prof.a.t_hi());
  try {
    auto q = q_integrand(prof.a);
    double total;
    if (prof.head_int_q) {
      total = prof.head_int_q(kTMin) +
              split_integrate(q, kTMin, L, 1e-8, prof.breakpoints);
    } else {
      // open-ended part up to the first breakpoint (or all of [0, L])
      const double b0 = prof.breakpoints.empty()
                            ? L
                            : std::min(L, prof.breakpoints.front());
      total = integrate(q, 0.0, b0, 1e-8);
      if (b0 < L) total += split_integrate(q, b0, L, 1e-8, prof.breakpoints);
    }
    if (!std::isfinite(total)) throw AccuracyError("non-finite", 0.0);
  } catch (const AccuracyError&) {
    throw ProfileError("a'^2/a is not integrable at 0", "A2");
  }
}

EstimatePair pair_from_profile(const Profile& prof, const GeometryParams& p,
                               const std::vector<double>& t_grid) {
  validate(p);
  if (p.K < 0) throw InputError("pair_from_profile requires K >= 0");
  if (t_grid.empty()) throw InputError("pair_from_profile: empty t grid");
  check_profile(prof);

  std::vector<double> grid = t_grid;
  std::sort(grid.begin(), grid.end());
  if (!(grid.front() > 0)) throw InputError("pair_from_profile: grid times must be > 0");

  const double K = p.K, n = p.n;
  const TimeFn a = prof.a;

  auto head_a = prof.head_int_a
                    ? prof.head_int_a(kTMin)
                    : integrate(a, 0.0, kTMin, kQuadTol);
  auto head_q = prof.head_int_q
                    ? prof.head_int_q(kTMin)
                    : integrate(q_integrand(a), 0.0, kTMin, 1e-10);

  auto Iq = std::make_shared<Cumulative>(q_integrand(a), head_q, grid,
                                         prof.breakpoints);
  std::shared_ptr<Cumulative> Ia;
  if (K > 0)
    Ia = std::make_shared<Cumulative>([a](double t) { return a(t); }, head_a,
                                      grid, prof.breakpoints);

  EstimatePair out;
  if (K > 0) {
    out.alpha = TimeFn::analytic(
        [K, a, Ia](double t) { return 1.0 + 2.0 * K * (*Ia)(t) / a(t); },
        [K, a, Ia](double t) {
          const double av = a(t), ad = derivative_at(a, t);
          return 2.0 * K * (av * av - (*Ia)(t)*ad) / (av * av);
        },
        "alpha[" + a.label() + "]", 0.0, a.t_hi());
  } else {
    out.alpha = TimeFn::constant(1.0, "alpha[" + a.label() + "]");
  }
  out.c = TimeFn::analytic(
      [K, n, a, Ia, Iq](double t) {
        const double av = a(t);
        double v = n * (*Iq)(t) / (8.0 * av);
        if (Ia) v += n * K / 2.0 + n * K * K * (*Ia)(t) / (2.0 * av);
        return v;
      },
      [K, n, a, Ia, Iq](double t) {
        const double av = a(t), ad = derivative_at(a, t);
        double v = n * (ad * ad - (*Iq)(t)*ad) / (8.0 * av * av);
        if (Ia) v += n * K * K * (av * av - (*Ia)(t)*ad) / (2.0 * av * av);
        return v;
      },
      "c[" + a.label() + "]", 0.0, a.t_hi());
  return out;
}

TimeFn envelope_ode(const TimeFn& alpha, const GeometryParams& p, double t0,
                    double c0, double T, double step) {
  validate(p);
  if (!(c0 > 0)) throw InputError("envelope_ode: c0 must be positive");
  const double K = p.K, n = p.n;
  auto rhs = [alpha, K, n](double t, double c) {
    const double av = alpha(t);
    const double one_m = 1.0 - av;
    if (std::abs(one_m) < 1e-12 * std::max(1.0, std::abs(av)))
      throw SingularityError("envelope_ode: alpha(t) = 1", t);
    const double ad = derivative_at(alpha, t);
    const double s = 2.0 * K * av - ad;
    return (one_m * (2.0 * K - ad) * c + n * s * s / 8.0) / (one_m * one_m);
  };
  return ode_solve(rhs, t0, c0, T, step);
}

std::pair<EstimatePair, SpliceReport> splice(const EstimatePair& first,
                                             const EstimatePair& second,
                                             double t0) {
  if (!(t0 > 0)) throw DomainError("splice: t0 must be positive");
  for (const auto* pr : {&first, &second})
    if (!pr->alpha.valid() || !pr->c.valid())
      throw InputError("splice: both pairs must be complete");

  SpliceReport rep;
  rep.t0 = t0;
  rep.alpha_jump = second.alpha(t0) - first.alpha(t0);
  rep.c_jump = second.c(t0) - first.c(t0);
  const double c_scale = std::max(1.0, std::abs(first.c(t0)));
  if (std::abs(rep.c_jump) > 1e-10 * c_scale)
    throw SpliceError("splice: c is discontinuous at t0", std::abs(rep.c_jump));
  const double a_scale = std::max(1.0, std::abs(first.alpha(t0)));
  if (std::abs(rep.alpha_jump) > 1e-10 * a_scale)
    throw SpliceError("splice: alpha is discontinuous at t0",
                      std::abs(rep.alpha_jump));

  rep.c_dleft = derivative_at(first.c, t0, Side::left);
  rep.c_dright = derivative_at(second.c, t0, Side::right);
  rep.c1_gap = std::abs(rep.c_dright - rep.c_dleft);
  rep.is_c1 =
      rep.c1_gap <= 1e-6 * std::max({1.0, std::abs(rep.c_dleft), std::abs(rep.c_dright)});

  auto piece = [t0](const TimeFn& lo, const TimeFn& hi, const std::string& lbl) {
    auto ev = [t0, lo, hi](double t) { return (t <= t0) ? lo(t) : hi(t); };
    TimeFn out;
    if (lo.has_analytic_deriv() && hi.has_analytic_deriv()) {
      auto dv = [t0, lo, hi](double t) {
        return (t <= t0) ? lo.analytic_deriv(t) : hi.analytic_deriv(t);
      };
      out = TimeFn::analytic(ev, dv, lbl, lo.t_lo(), hi.t_hi());
    } else {
      out = TimeFn(ev, lbl, lo.t_lo(), hi.t_hi());
    }
    std::vector<double> ks = lo.kinks();
    ks.push_back(t0);
    for (double k : hi.kinks()) ks.push_back(k);
    return out.with_kinks(std::move(ks));
  };

  EstimatePair joined;
  joined.alpha = piece(first.alpha, second.alpha, "spliced alpha");
  joined.c = piece(first.c, second.c, "spliced c");
  return {std::move(joined), rep};
}

EstimatePair closed_form_special(const std::string& name,
                                 const GeometryParams& p) {
  validate(p);
  const double K = p.K, n = p.n;
  EstimatePair out;
  if (name == "quadratic_profile") {
    if (K < 0) throw InputError("quadratic_profile requires K >= 0");
    out.alpha = TimeFn::analytic(
        [K](double t) { return 1.0 + 2.0 * K * t / 3.0; },
        [K](double) { return 2.0 * K / 3.0; }, "1 + 2Kt/3", 0.0);
    out.c = TimeFn::analytic(
        [n, K](double t) { return n / (2.0 * t) + n * K / 2.0 * (1.0 + K * t / 3.0); },
        [n, K](double t) { return -n / (2.0 * t * t) + n * K * K / 6.0; },
        "quadratic_profile c", 0.0);
  } else if (name == "sinh_profile") {
    if (!(K > 0)) throw InputError("sinh_profile requires K > 0");
    out.alpha = TimeFn::analytic(
        [K](double t) {
          const double S = std::sinh(K * t);
          return 1.0 + sinh_minus_x_local(2.0 * K * t) / (2.0 * S * S);
        },
        [K](double t) {
          const double S = std::sinh(K * t);
          return 2.0 * K * xcosh_minus_sinh_local(K * t) / (S * S * S);
        },
        "sinh_profile alpha", 0.0);
    out.c = TimeFn::analytic(
        [n, K](double t) { return n * K / 2.0 * (1.0 / std::tanh(K * t) + 1.0); },
        [n, K](double t) {
          const double S = std::sinh(K * t);
          return -n * K * K / (2.0 * S * S);
        },
        "sinh_profile c", 0.0);
  } else {
    throw InputError("closed_form_special: unknown name '" + name + "'");
  }
  return out;
}

}  // namespace harnack
