#include "harnack/catalog.hpp"

#include <cmath>

namespace harnack {

namespace {

constexpr double kPi = 3.14159265358979323846;

double sq(double x) { return x * x; }

// sinh(x) - x without cancellation near 0.
double sinh_minus_x(double x) {
  if (std::abs(x) < 0.75) {
    const double x2 = x * x;
    return x * x2 / 6.0 *
           (1.0 +
            x2 / 20.0 *
                (1.0 + x2 / 42.0 * (1.0 + x2 / 72.0 * (1.0 + x2 / 110.0 * (1.0 + x2 / 156.0)))));
  }
  return std::sinh(x) - x;
}

// x cosh(x) - sinh(x) without cancellation near 0.
double xcosh_minus_sinh(double x) {
  if (std::abs(x) < 0.75) {
    const double x2 = x * x;
    return x * x2 / 3.0 *
           (1.0 +
            x2 / 10.0 *
                (1.0 + x2 / 28.0 * (1.0 + x2 / 54.0 * (1.0 + x2 / 88.0 * (1.0 + x2 / 130.0)))));
  }
  return x * std::cosh(x) - std::sinh(x);
}

// w(z) = sqrt(z) coth sqrt(z) for z > 0, sqrt(-z) cot sqrt(-z) for z < 0;
// both are restrictions of one analytic function, series-evaluated near 0.
double wfun(double z) {
  if (z > 1e-4) {
    const double y = std::sqrt(z);
    return y / std::tanh(y);
  }
  if (z < -1e-4) {
    const double y = std::sqrt(-z);
    if (y >= kPi) throw DomainError("bbg: argument beyond the oscillatory branch limit");
    return y / std::tan(y);
  }
  return 1.0 + z * (1.0 / 3.0 + z * (-1.0 / 45.0 + z * (2.0 / 945.0)));
}

double maxfac(double theta) { return std::max(0.5 * (1.0 - theta), theta); }

// c(t) = n K m exp(4 theta K t) / (exp(2 theta K t) - 1) with the removable
// K -> 0 singularity handled by the series branch
// exp(y) - 1 ~ y (1 + y/2), y = 2 theta K t.
double exp_family_c(double n, double K, double theta, double m, double t) {
  const double y = 2.0 * theta * K * t;
  const double e2 = std::exp(2.0 * y);
  if (std::abs(y) < 1e-8) return n * m * e2 / (2.0 * theta * t * (1.0 + 0.5 * y));
  return n * K * m * e2 / std::expm1(y);
}

double exp_family_c_deriv(double n, double K, double theta, double m, double t) {
  const double y = 2.0 * theta * K * t;
  const double e2 = std::exp(2.0 * y);
  if (std::abs(y) < 1e-8) {
    const double q = 1.0 + 0.5 * y;
    return n * m * e2 * (2.0 * y * q - 1.0 - 0.5 * y - 0.5 * y) /
           (2.0 * theta * t * t * q * q);
  }
  const double em = std::expm1(y);
  return 2.0 * n * theta * K * K * m * e2 * (std::exp(y) - 2.0) / (em * em);
}

double require_extra(const std::map<std::string, double>& extra,
                     const std::string& key, const std::string& id) {
  auto it = extra.find(key);
  if (it == extra.end())
    throw ConstructionError(id + " requires parameter '" + key + "'");
  if (!std::isfinite(it->second))
    throw ConstructionError(id + ": parameter '" + key + "' must be finite");
  return it->second;
}

TimeFn exp_alpha(double K, double theta) {
  return TimeFn::analytic(
      [K, theta](double t) { return std::exp(2.0 * theta * K * t); },
      [K, theta](double t) { return 2.0 * theta * K * std::exp(2.0 * theta * K * t); },
      "exp(2*theta*K*t)", 0.0);
}

TimeFn exp_family_c_fn(double n, double K, double theta, double m,
                       const std::string& label) {
  return TimeFn::analytic(
      [n, K, theta, m](double t) { return exp_family_c(n, K, theta, m, t); },
      [n, K, theta, m](double t) { return exp_family_c_deriv(n, K, theta, m, t); },
      label, 0.0);
}

struct BuildResult {
  Estimate::Form form = Estimate::Form::linear;
  EstimatePair pair;
};

// Shared construction of the displayed formulas. `strict` enforces the
// stated parameter constraints; the lax path only guards divisions that
// would be undefined.
BuildResult build(const std::string& id, const GeometryParams& p,
                  const std::map<std::string, double>& extra, bool strict) {
  validate(p);
  const double K = p.K, n = p.n;
  BuildResult out;

  auto alpha_gt1 = [&](const char* who) {
    const double a = require_extra(extra, "alpha", who);
    if (strict) {
      if (K < 0)
        throw ConstructionError(std::string(who) + " requires K >= 0");
      if (!(a > 1.0 || (a == 1.0 && K == 0.0)))
        throw ConstructionError(std::string(who) +
                                " requires alpha > 1 (alpha = 1 only when K = 0)");
    } else if (!(a > 0)) {
      throw ConstructionError(std::string(who) + ": alpha must be positive");
    }
    return a;
  };

  if (id == "li_yau" || id == "davies") {
    const double a = alpha_gt1(id.c_str());
    const double denom = (id == "li_yau") ? 2.0 : 4.0;
    const double kterm = (a != 1.0) ? n * a * a * K / (denom * (a - 1.0)) : 0.0;
    out.pair.alpha = TimeFn::constant(a, "alpha");
    out.pair.c = TimeFn::analytic(
        [n, a, kterm](double t) { return n * a * a / (2.0 * t) + kterm; },
        [n, a](double t) { return -n * a * a / (2.0 * t * t); }, id + " c", 0.0);
  } else if (id == "hamilton") {
    if (strict && K < 0) throw ConstructionError("hamilton requires K >= 0");
    out.pair.alpha = exp_alpha(K, 1.0);
    out.pair.c = TimeFn::analytic(
        [n, K](double t) { return std::exp(4.0 * K * t) * n / (2.0 * t); },
        [n, K](double t) {
          return n * std::exp(4.0 * K * t) * (4.0 * K * t - 1.0) / (2.0 * t * t);
        },
        "hamilton c", 0.0);
  } else if (id == "li_xu_linear") {
    if (strict && K < 0) throw ConstructionError("li_xu_linear requires K >= 0");
    out.pair.alpha = TimeFn::analytic(
        [K](double t) { return 1.0 + 2.0 * K * t / 3.0; },
        [K](double) { return 2.0 * K / 3.0; }, "1 + 2Kt/3", 0.0);
    out.pair.c = TimeFn::analytic(
        [n, K](double t) {
          return n / (2.0 * t) + n * K / 2.0 * (1.0 + K * t / 3.0);
        },
        [n, K](double t) { return -n / (2.0 * t * t) + n * K * K / 6.0; },
        "li_xu_linear c", 0.0);
  } else if (id == "li_xu_sinh") {
    if (!(K > 0)) throw ConstructionError("li_xu_sinh requires K > 0");
    out.pair.alpha = TimeFn::analytic(
        [K](double t) {
          const double S = std::sinh(K * t);
          return 1.0 + sinh_minus_x(2.0 * K * t) / (2.0 * S * S);
        },
        [K](double t) {
          const double S = std::sinh(K * t);
          return 2.0 * K * xcosh_minus_sinh(K * t) / (S * S * S);
        },
        "li_xu_sinh alpha", 0.0);
    out.pair.c = TimeFn::analytic(
        [n, K](double t) {
          return n * K / 2.0 * (1.0 / std::tanh(K * t) + 1.0);
        },
        [n, K](double t) { return -n * K * K / (2.0 * sq(std::sinh(K * t))); },
        "li_xu_sinh c", 0.0);
  } else if (id == "new_max" || id == "new_spliced") {
    const double a = alpha_gt1(id.c_str());
    if (!strict && a == 1.0 && K != 0.0)
      throw ConstructionError(id + ": alpha = 1 with K != 0 leaves the bound undefined");
    const double t0 = (K > 0.0 && a > 1.0)
                          ? (a - 1.0) / K
                          : std::numeric_limits<double>::infinity();
    if (id == "new_max") {
      out.pair.c = TimeFn::analytic(
          [n, a, K, t0](double t) {
            return n * a * a / 2.0 * ((t <= t0) ? 1.0 / t : K / (a - 1.0));
          },
          [n, a, t0](double t) {
            return (t <= t0) ? -n * a * a / (2.0 * t * t) : 0.0;
          },
          "new_max c", 0.0);
    } else {
      const double cs = std::isfinite(t0) ? K * n * a * a / (4.0 * (a - 1.0)) : 0.0;
      const double rate = std::isfinite(t0) ? 2.0 * K / (a - 1.0) : 0.0;
      out.pair.c = TimeFn::analytic(
          [n, a, t0, cs, rate](double t) {
            if (t <= t0) return n * a * a / (2.0 * t);
            return cs * (1.0 + std::exp(-rate * (t - t0)));
          },
          [n, a, t0, cs, rate](double t) {
            if (t <= t0) return -n * a * a / (2.0 * t * t);
            return -cs * rate * std::exp(-rate * (t - t0));
          },
          "new_spliced c", 0.0);
    }
    if (std::isfinite(t0)) out.pair.c = out.pair.c.with_kinks({t0});
    out.pair.alpha = TimeFn::constant(a, "alpha");
  } else if (id == "theta_exp" || id == "hamilton_refined" ||
             id == "theta_exp_positive") {
    double theta = 1.0;
    double m = 1.0;
    if (id == "theta_exp") {
      theta = require_extra(extra, "theta", "theta_exp");
      if (strict && K < 0) throw ConstructionError("theta_exp requires K >= 0");
      if (!(theta > 0)) throw ConstructionError("theta_exp requires theta > 0");
      m = maxfac(theta);
    } else if (id == "theta_exp_positive") {
      theta = require_extra(extra, "theta", "theta_exp_positive");
      if (strict && !(K < 0))
        throw ConstructionError("theta_exp_positive requires K < 0");
      if (strict && !(theta <= 1.0 / 3.0))
        throw ConstructionError("theta_exp_positive requires theta in (0, 1/3]");
      if (!(theta > 0))
        throw ConstructionError("theta_exp_positive requires theta > 0");
      m = theta;
    } else {
      if (strict && K < 0) throw ConstructionError("hamilton_refined requires K >= 0");
    }
    out.pair.alpha = exp_alpha(K, theta);
    out.pair.c = exp_family_c_fn(n, K, theta, m, id + " c");
  } else if (id == "bakry_qian") {
    if (K < 0) throw ConstructionError("bakry_qian requires K >= 0");
    out.form = Estimate::Form::bakry_qian;
  } else if (id == "bbg") {
    if (!(K > 0)) throw ConstructionError("bbg requires K > 0");
    out.form = Estimate::Form::bbg;
  } else {
    throw ConstructionError("unknown estimate id '" + id + "'");
  }
  return out;
}

}  // namespace

double bbg_phi(double K, double t, double x) {
  const double z = K * K * t * t * (1.0 - x);
  if (!(z > -kPi * kPi))
    throw DomainError("bbg: state beyond the oscillatory branch limit");
  return 0.5 * K * (2.0 - x) + wfun(z) / t;
}

const TimeFn& Estimate::alpha() const {
  if (!is_linear()) throw DomainError(id_ + ": not a linear estimate");
  return pair_.alpha;
}

const TimeFn& Estimate::c() const {
  if (!is_linear()) throw DomainError(id_ + ": not a linear estimate");
  return pair_.c;
}

const EstimatePair& Estimate::pair() const {
  if (!is_linear()) throw DomainError(id_ + ": not a linear estimate");
  return pair_;
}

double Estimate::extra(const std::string& key) const {
  auto it = extra_.find(key);
  if (it == extra_.end()) throw InputError(id_ + ": no parameter '" + key + "'");
  return it->second;
}

double Estimate::residual(const SolutionState& s) const {
  if (!(s.t > 0)) throw DomainError("residual: t must be positive");
  if (!(s.g >= 0)) throw DomainError("residual: g must be nonnegative");
  const double K = params_.K, n = params_.n;
  switch (form_) {
    case Form::linear:
      return s.g - pair_.alpha(s.t) * s.h - pair_.c(s.t);
    case Form::bakry_qian: {
      const double base = n / (2.0 * s.t);
      return s.g - s.h - std::sqrt(n * K) * std::sqrt(s.g + base + n * K / 4.0) -
             base;
    }
    case Form::bbg: {
      const double x = 4.0 * s.h / (-n * K);
      return s.g - 0.5 * n * bbg_phi(K, s.t, x);
    }
  }
  throw DomainError("residual: unreachable");
}

GradientCeiling Estimate::max_allowed_gradient(double h, double t) const {
  if (!(t > 0)) throw DomainError("max_allowed_gradient: t must be positive");
  const double K = params_.K, n = params_.n;
  double v = 0.0;
  switch (form_) {
    case Form::linear:
      v = pair_.alpha(t) * h + pair_.c(t);
      break;
    case Form::bakry_qian: {
      const double c0 = n / (2.0 * t) + n * K / 4.0;
      const double inner = n * K + 4.0 * (c0 + h + n / (2.0 * t));
      if (inner < 0) return {0.0, true};
      const double s = 0.5 * (std::sqrt(n * K) + std::sqrt(inner));
      v = s * s - c0;
      break;
    }
    case Form::bbg: {
      const double x = 4.0 * h / (-n * K);
      v = 0.5 * n * bbg_phi(K, t, x);
      break;
    }
  }
  if (v < 0.0) return {0.0, true};
  return {v, false};
}

std::optional<double> Estimate::h_min(double t) const {
  if (form_ != Form::bbg) return std::nullopt;
  const double K = params_.K, n = params_.n;
  const double x_lim = 1.0 + kPi * kPi / (K * K * t * t);
  return -n * K / 4.0 * x_lim;
}

Estimate make_estimate(const std::string& id, const GeometryParams& p,
                       const std::map<std::string, double>& extra) {
  BuildResult b = build(id, p, extra, /*strict=*/true);
  Estimate e;
  e.id_ = id;
  e.params_ = p;
  e.form_ = b.form;
  e.pair_ = std::move(b.pair);
  e.extra_ = extra;
  return e;
}

EstimatePair linear_pair(const std::string& id, const GeometryParams& p,
                         const std::map<std::string, double>& extra) {
  BuildResult b = build(id, p, extra, /*strict=*/false);
  if (b.form != Estimate::Form::linear)
    throw ConstructionError(id + " is not a linear estimate");
  return b.pair;
}

std::vector<CatalogEntry> list_catalog() {
  return {
      {"li_yau", "alpha", "α>1 (α=1 allowed iff K=0), K≥0", true},
      {"davies", "alpha", "α>1 (α=1 allowed iff K=0), K≥0", true},
      {"hamilton", "", "K≥0", true},
      {"li_xu_linear", "", "K≥0", true},
      {"li_xu_sinh", "", "K>0", true},
      {"new_max", "alpha", "α>1 (α=1 allowed iff K=0), K≥0", true},
      {"new_spliced", "alpha", "α>1 (α=1 allowed iff K=0), K≥0", true},
      {"theta_exp", "theta", "K≥0, θ>0", true},
      {"theta_exp_positive", "theta", "K<0, θ∈(0,1/3]", true},
      {"hamilton_refined", "", "K≥0", true},
      {"bakry_qian", "", "K≥0 (nonlinear in g)", false},
      {"bbg", "", "K>0 (nonlinear; h bounded below by the branch limit)", false},
  };
}

}  // namespace harnack
