#include "harnack/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <random>

#include "harnack/csvio.hpp"

namespace harnack {

namespace {

constexpr double kPi = 3.14159265358979323846;
constexpr double kTwoPi = 2.0 * kPi;

double sq(double x) { return x * x; }

// 1/r - coth(r), series-evaluated near 0 where the two terms cancel.
double inv_r_minus_coth(double r) {
  if (r < 0.1) {
    const double r2 = r * r;
    return -r / 3.0 + r * r2 / 45.0 - 2.0 * r * r2 * r2 / 945.0 +
           r * r2 * r2 * r2 / 4725.0;
  }
  return 1.0 / r - 1.0 / std::tanh(r);
}

// log(sinh(r)/r), accurate for all r >= 0.
double log_sinh_over_r(double r) {
  if (r == 0.0) return 0.0;
  if (r < 0.75) {
    const double r2 = r * r;
    const double sm = r * r2 / 6.0 *
                      (1.0 + r2 / 20.0 * (1.0 + r2 / 42.0 * (1.0 + r2 / 72.0)));
    return std::log1p(sm / r);
  }
  return std::log(std::sinh(r) / r);
}

int auto_k_max(double coord, double t) {
  const int k = static_cast<int>(
      std::ceil((std::abs(coord) + std::sqrt(160.0 * t)) / kTwoPi));
  return std::max(3, k + 1);
}

// Image sums for the sphere kernel: S = sum a_k exp(-a_k^2/4t) with
// a_k = th + 2 pi k, plus the theta- and t-derivatives, all scaled by
// exp(m) with m = min_k a_k^2/4t to keep the terms representable.
struct SphereSums {
  double S = 0.0, Sd = 0.0, St = 0.0;
  double m = 0.0;  // log of the factored-out scale
};

SphereSums sphere_sums(double th, double t, int km) {
  SphereSums out;
  double m = std::numeric_limits<double>::infinity();
  for (int k = -km; k <= km; ++k) m = std::min(m, sq(th + kTwoPi * k) / (4.0 * t));
  out.m = -m;
  for (int k = -km; k <= km; ++k) {
    const double a = th + kTwoPi * k;
    const double e = std::exp(m - a * a / (4.0 * t));
    out.S += a * e;
    out.Sd += (1.0 - a * a / (2.0 * t)) * e;
    out.St += a * a * a / (4.0 * t * t) * e;
  }
  return out;
}

// d/dth of the sphere sums at fixed t, used for the endpoint limits where
// S and sin(th) vanish together.
struct SphereEndpoint {
  double Sd = 0.0;    // sum (1 - a^2/2t) e
  double Std = 0.0;   // d/dth of St: sum (3a^2/4t^2 - a^4/8t^3) e
  double m = 0.0;
};

SphereEndpoint sphere_endpoint(double th, double t, int km) {
  SphereEndpoint out;
  double m = std::numeric_limits<double>::infinity();
  for (int k = -km; k <= km; ++k) m = std::min(m, sq(th + kTwoPi * k) / (4.0 * t));
  out.m = -m;
  for (int k = -km; k <= km; ++k) {
    const double a = th + kTwoPi * k;
    const double e = std::exp(m - a * a / (4.0 * t));
    out.Sd += (1.0 - a * a / (2.0 * t)) * e;
    out.Std += (3.0 * a * a / (4.0 * t * t) - a * a * a * a / (8.0 * t * t * t)) * e;
  }
  return out;
}

struct CircleSums {
  double S = 0.0, Sx = 0.0, St = 0.0;
  double m = 0.0;
};

CircleSums circle_sums(double x, double t, int km) {
  CircleSums out;
  double m = std::numeric_limits<double>::infinity();
  for (int k = -km; k <= km; ++k) m = std::min(m, sq(x + kTwoPi * k) / (4.0 * t));
  out.m = -m;
  for (int k = -km; k <= km; ++k) {
    const double a = x + kTwoPi * k;
    const double e = std::exp(m - a * a / (4.0 * t));
    out.S += e;
    out.Sx += -a / (2.0 * t) * e;
    out.St += a * a / (4.0 * t * t) * e;
  }
  return out;
}

}  // namespace

Kernel Kernel::make(Id id, double n_for_gaussian, int k_max) {
  Kernel k;
  k.id_ = id;
  k.k_max_ = k_max;
  switch (id) {
    case Id::gaussian_rn:
      if (!(n_for_gaussian >= 1))
        throw InputError("gaussian_rn: dimension must be >= 1");
      k.name_ = "gaussian_rn";
      k.params_ = {0.0, n_for_gaussian};
      break;
    case Id::hyperbolic_h3:
      k.name_ = "hyperbolic_h3";
      k.params_ = {2.0, 3.0};
      break;
    case Id::sphere_s3:
      k.name_ = "sphere_s3";
      k.params_ = {-2.0, 3.0};
      break;
    case Id::circle_flat:
      k.name_ = "circle_flat";
      k.params_ = {0.0, 1.0};
      break;
  }
  return k;
}

Kernel Kernel::make(const std::string& id, double n_for_gaussian, int k_max) {
  if (id == "gaussian_rn") return make(Id::gaussian_rn, n_for_gaussian, k_max);
  if (id == "hyperbolic_h3") return make(Id::hyperbolic_h3, n_for_gaussian, k_max);
  if (id == "sphere_s3") return make(Id::sphere_s3, n_for_gaussian, k_max);
  if (id == "circle_flat") return make(Id::circle_flat, n_for_gaussian, k_max);
  throw InputError("unknown kernel id '" + id + "'");
}

SolutionState Kernel::evaluate(double r, double t) const {
  if (!(t > 0)) throw DomainError("kernel: t must be positive");
  SolutionState s;
  s.t = t;
  const double n = params_.n;
  switch (id_) {
    case Id::gaussian_rn: {
      if (!(r >= 0)) throw DomainError("gaussian_rn: r must be >= 0");
      const double rq = r / (2.0 * t);
      s.g = rq * rq;
      s.h = -n / (2.0 * t) + rq * rq;
      s.log_u = -0.5 * n * std::log(4.0 * kPi * t) - r * r / (4.0 * t);
      return s;
    }
    case Id::hyperbolic_h3: {
      if (!(r >= 0)) throw DomainError("hyperbolic_h3: r must be >= 0");
      const double dr = inv_r_minus_coth(r) - r / (2.0 * t);
      const double rq = r / (2.0 * t);
      s.g = (r == 0.0) ? 0.0 : dr * dr;
      s.h = -3.0 / (2.0 * t) - 1.0 + rq * rq;
      s.log_u = -1.5 * std::log(4.0 * kPi * t) - log_sinh_over_r(r) - t -
                r * r / (4.0 * t);
      return s;
    }
    case Id::sphere_s3: {
      if (!(r >= 0) || r >= kPi)
        throw DomainError("sphere_s3: angle must lie in [0, pi)");
      const int km = k_max_ > 0 ? k_max_ : auto_k_max(r, t);
      const double base = t - 1.5 * std::log(4.0 * kPi * t);
      if (std::abs(std::sin(r)) < 1e-8) {
        // Source point: S and sin both vanish linearly; the ratios reduce to
        // theta-derivatives of the sums.
        auto e = sphere_endpoint(r, t, km);
        s.g = 0.0;
        s.h = 1.0 - 3.0 / (2.0 * t) + e.Std / e.Sd;
        s.log_u = base + std::log(e.Sd) + e.m;
        return s;
      }
      auto ss = sphere_sums(r, t, km);
      const double dth = -1.0 / std::tan(r) + ss.Sd / ss.S;
      s.g = dth * dth;
      s.h = 1.0 - 3.0 / (2.0 * t) + ss.St / ss.S;
      s.log_u = base - std::log(std::sin(r)) + std::log(ss.S) + ss.m;
      return s;
    }
    case Id::circle_flat: {
      const int km = k_max_ > 0 ? k_max_ : auto_k_max(r, t);
      auto cs = circle_sums(r, t, km);
      const double dx = cs.Sx / cs.S;
      s.g = dx * dx;
      s.h = -1.0 / (2.0 * t) + cs.St / cs.S;
      s.log_u = -0.5 * std::log(4.0 * kPi * t) + std::log(cs.S) + cs.m;
      return s;
    }
  }
  throw DomainError("kernel: unreachable");
}

double Kernel::log_u(double r, double t) const { return evaluate(r, t).log_u; }

std::string SlackReport::to_csv() const {
  std::string out = "kernel,estimate,r,t,g,h,slack\n";
  for (const auto& row : rows) {
    out += row.kernel;
    out += ',';
    out += row.estimate;
    out += ',';
    out += csv_num(row.r);
    out += ',';
    out += csv_num(row.t);
    out += ',';
    out += csv_num(row.g);
    out += ',';
    out += csv_num(row.h);
    out += ',';
    out += csv_num(row.slack);
    out += '\n';
  }
  return out;
}

SlackReport verify_estimate(const Kernel& k, const Estimate& e,
                            std::span<const double> r_grid,
                            std::span<const double> t_grid) {
  if (e.params().K != k.params().K || e.params().n != k.params().n)
    throw ConfigError("verify_estimate: estimate (K, n) = (" +
                      csv_num(e.params().K) + ", " + csv_num(e.params().n) +
                      ") does not match kernel " + k.name());
  SlackReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  for (double t : t_grid) {
    for (double r : r_grid) {
      const SolutionState s = k.evaluate(r, t);
      const double slack = -e.residual(s);
      if (slack < rep.min_slack) {
        rep.min_slack = slack;
        rep.argmin_r = r;
        rep.argmin_t = t;
      }
      rep.rows.push_back({k.name(), e.id(), r, t, s.g, s.h, slack});
    }
  }
  return rep;
}

double harnack_check(const Kernel& k, double theta, double s, double t,
                     double r_x, double r_y, double d) {
  if (!(k.params().K < 0))
    throw ConfigError("harnack_check: needs a positive-curvature kernel (K < 0)");
  if (!(theta > 0 && theta <= 1.0 / 3.0))
    throw DomainError("harnack_check: theta must lie in (0, 1/3]");
  if (!(s > 0)) throw DomainError("harnack_check: s must be positive");
  if (!(s <= t)) throw DomainError("harnack_check: needs s <= t");
  if (!(d >= 0)) throw DomainError("harnack_check: d must be >= 0");
  if (s == t) {
    if (d != 0.0) throw DomainError("harnack_check: s = t requires d = 0");
    return std::exp(k.log_u(r_y, t) - k.log_u(r_x, s));
  }
  const double K = k.params().K, n = k.params().n;
  const double log_pref =
      0.5 * n *
      (std::log1p(-std::exp(2.0 * theta * K * t)) -
       std::log1p(-std::exp(2.0 * theta * K * s)));
  double log_exp = 0.0;
  if (d > 0.0) {
    const double denom = std::exp(-2.0 * theta * K * t) - std::exp(-2.0 * theta * K * s);
    log_exp = -0.5 * theta * K * d * d / denom;
  }
  return std::exp(log_pref + log_exp + k.log_u(r_y, t) - k.log_u(r_x, s));
}

namespace {

// Solves (B + corner terms) x = d for the cyclic tridiagonal CN matrix with
// diagonal b and off-diagonal/corner value off, via Sherman-Morrison around
// a plain Thomas solve.
class CyclicTridiag {
 public:
  CyclicTridiag(int n, double diag, double off) : n_(n), b_(diag), off_(off) {}

  std::vector<double> solve(const std::vector<double>& d) const {
    const double gamma = -b_;
    std::vector<double> dm = d;
    std::vector<double> u(n_, 0.0);
    u[0] = gamma;
    u[n_ - 1] = off_;
    std::vector<double> y = thomas(dm, gamma);
    std::vector<double> z = thomas(u, gamma);
    const double vy = y[0] + (off_ / gamma) * y[n_ - 1];
    const double vz = z[0] + (off_ / gamma) * z[n_ - 1];
    const double f = vy / (1.0 + vz);
    for (int i = 0; i < n_; ++i) y[i] -= f * z[i];
    return y;
  }

 private:
  std::vector<double> thomas(const std::vector<double>& d, double gamma) const {
    std::vector<double> cp(n_), dp(n_);
    const double b0 = b_ - gamma;
    const double bn = b_ - off_ * off_ / gamma;
    double beta = b0;
    cp[0] = off_ / beta;
    dp[0] = d[0] / beta;
    for (int i = 1; i < n_; ++i) {
      const double bi = (i == n_ - 1) ? bn : b_;
      beta = bi - off_ * cp[i - 1];
      cp[i] = off_ / beta;
      dp[i] = (d[i] - off_ * dp[i - 1]) / beta;
    }
    std::vector<double> x(n_);
    x[n_ - 1] = dp[n_ - 1];
    for (int i = n_ - 2; i >= 0; --i) x[i] = dp[i] - cp[i] * x[i + 1];
    return x;
  }

  int n_;
  double b_;
  double off_;
};

}  // namespace

FDRun fd_solve(const std::vector<double>& initial, int N, double T, double t0,
               double floor_eps) {
  if (N < 64) throw InputError("fd_solve: N must be >= 64");
  if (static_cast<int>(initial.size()) != N)
    throw InputError("fd_solve: initial data must have N samples");
  if (!(T > 0)) throw InputError("fd_solve: T must be positive");
  if (!(floor_eps >= 0)) throw InputError("fd_solve: floor must be >= 0");
  for (double v : initial)
    if (!(v > floor_eps))
      throw InputError("fd_solve: initial data must be strictly positive");

  FDRun run;
  run.N = N;
  run.dx = kTwoPi / N;
  run.dt = run.dx;  // ties temporal to spatial error, both second order
  run.t0 = t0;

  const double lam = run.dt / (2.0 * run.dx * run.dx);
  CyclicTridiag lhs(N, 1.0 + 2.0 * lam, -lam);

  std::vector<double> u = initial;
  run.times.push_back(t0);
  run.snapshots.push_back(u);
  run.min_u = *std::min_element(u.begin(), u.end());
  const double mass0 = std::accumulate(u.begin(), u.end(), 0.0) * run.dx;

  const long steps = static_cast<long>(std::ceil(T / run.dt - 1e-9));
  std::vector<double> rhs(N);
  for (long m = 1; m <= steps; ++m) {
    for (int i = 0; i < N; ++i) {
      const double up = u[(i + 1) % N], um = u[(i + N - 1) % N];
      rhs[i] = (1.0 - 2.0 * lam) * u[i] + lam * (up + um);
    }
    u = lhs.solve(rhs);
    const double mn = *std::min_element(u.begin(), u.end());
    run.min_u = std::min(run.min_u, mn);
    if (!(mn > floor_eps))
      throw BlowupError("fd_solve: positivity floor crossed", t0 + m * run.dt);
    const double mass = std::accumulate(u.begin(), u.end(), 0.0) * run.dx;
    run.mass_drift = std::max(run.mass_drift, std::abs(mass - mass0) / mass0);
    run.times.push_back(t0 + m * run.dt);
    run.snapshots.push_back(u);
  }
  return run;
}

std::string FDRun::snapshot_csv(std::size_t index) const {
  if (index >= snapshots.size()) throw InputError("snapshot_csv: index out of range");
  std::string out = "x,u\n";
  for (int i = 0; i < N; ++i) {
    out += csv_num(i * dx);
    out += ',';
    out += csv_num(snapshots[index][i]);
    out += '\n';
  }
  return out;
}

SlackReport fd_check(const FDRun& run, const Estimate& e, double t_min) {
  if (!(t_min > 0)) throw DomainError("fd_check: t_min must be positive");
  if (!e.is_linear() || e.params().K != 0.0 || e.params().n != 1.0)
    throw ConfigError("fd_check: estimate must be linear with (K, n) = (0, 1)");

  SlackReport rep;
  rep.min_slack = std::numeric_limits<double>::infinity();
  const int N = run.N;
  std::vector<double> L(N);
  for (std::size_t m = 0; m < run.snapshots.size(); ++m) {
    const double t = run.times[m];
    if (t < t_min) continue;
    const auto& u = run.snapshots[m];
    for (int i = 0; i < N; ++i) L[i] = std::log(u[i]);
    const double at = e.alpha()(t), ct = e.c()(t);
    for (int i = 0; i < N; ++i) {
      const double lp = L[(i + 1) % N], lm = L[(i + N - 1) % N];
      const double d1 = (lp - lm) / (2.0 * run.dx);
      const double d2 = (lp - 2.0 * L[i] + lm) / (run.dx * run.dx);
      const double g = d1 * d1;
      const double h = d2 + g;  // Laplacian u / u on the circle
      const double slack = ct + at * h - g;
      if (slack < rep.min_slack) {
        rep.min_slack = slack;
        rep.argmin_r = i * run.dx;
        rep.argmin_t = t;
      }
      rep.rows.push_back({"fd_circle", e.id(), i * run.dx, t, g, h, slack});
    }
  }
  return rep;
}

std::vector<double> fd_initial_constant(int N, double value) {
  return std::vector<double>(N, value);
}

std::vector<double> fd_initial_mode(int N, double amplitude) {
  std::vector<double> u(N);
  for (int i = 0; i < N; ++i) u[i] = 1.0 + amplitude * std::cos(i * kTwoPi / N);
  return u;
}

std::vector<double> fd_initial_wrapped_gaussian(int N, double t0) {
  Kernel k = Kernel::make(Kernel::Id::circle_flat);
  std::vector<double> u(N);
  for (int i = 0; i < N; ++i) {
    double x = i * kTwoPi / N;
    if (x > kPi) x -= kTwoPi;
    u[i] = std::exp(k.log_u(x, t0));
  }
  return u;
}

std::vector<double> fd_initial_random(int N, unsigned seed) {
  // Smooth positive field: exponential of a few random low modes.
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> amp(-0.4, 0.4), phase(0.0, kTwoPi);
  std::vector<double> coef(4), ph(4);
  for (int j = 0; j < 4; ++j) {
    coef[j] = amp(rng);
    ph[j] = phase(rng);
  }
  std::vector<double> u(N);
  for (int i = 0; i < N; ++i) {
    const double x = i * kTwoPi / N;
    double s = 0.0;
    for (int j = 0; j < 4; ++j) s += coef[j] * std::cos((j + 1) * x + ph[j]);
    u[i] = std::exp(s);
  }
  return u;
}

}  // namespace harnack
