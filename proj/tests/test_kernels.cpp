#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "harnack/kernels.hpp"

using namespace harnack;

namespace {

constexpr double kPi = 3.14159265358979323846;

// Numeric d/dt and d/dr of log u straight from the kernel's log values; an
// oracle independent of the analytic derivative formulas in evaluate().
double num_dt(const Kernel& k, double r, double t) {
  const double d = 1e-4 * t;
  return (k.log_u(r, t + d) - k.log_u(r, t - d)) / (2 * d);
}
double num_dr(const Kernel& k, double r, double t) {
  const double d = 1e-4 * std::max(0.5, r);
  return (k.log_u(r + d, t) - k.log_u(r - d, t)) / (2 * d);
}
double num_drr(const Kernel& k, double r, double t) {
  const double d = 1e-3 * std::max(0.5, r);
  return (k.log_u(r + d, t) - 2 * k.log_u(r, t) + k.log_u(r - d, t)) / (d * d);
}

// Radial Laplacian coefficient of the first derivative term.
double radial_coef(const Kernel& k, double r) {
  switch (k.id()) {
    case Kernel::Id::gaussian_rn: return (k.params().n - 1.0) / r;
    case Kernel::Id::hyperbolic_h3: return 2.0 / std::tanh(r);
    case Kernel::Id::sphere_s3: return 2.0 / std::tan(r);
    case Kernel::Id::circle_flat: return 0.0;
  }
  return 0.0;
}

}  // namespace

TEST_CASE("gaussian kernel states at hand-checked points") {
  auto k = Kernel::make(Kernel::Id::gaussian_rn, 1.0);
  auto s = k.evaluate(2.0, 1.0);
  CHECK(s.g == doctest::Approx(1.0));
  CHECK(s.h == doctest::Approx(0.5));

  for (double n : {1.0, 2.0, 3.0}) {
    auto kn = Kernel::make(Kernel::Id::gaussian_rn, n);
    auto c = kn.evaluate(0.0, 0.4);
    CHECK(c.g == 0.0);
    CHECK(c.h == doctest::Approx(-n / 0.8));
  }
}

TEST_CASE("gaussian sharpness identity holds to machine precision") {
  for (double n : {1.0, 2.0, 3.0}) {
    auto k = Kernel::make(Kernel::Id::gaussian_rn, n);
    for (double t : {0.1, 1.0, 10.0})
      for (int i = 0; i < 20; ++i) {
        const double r = 6.0 * std::sqrt(t) * i / 19.0;
        auto s = k.evaluate(r, t);
        CHECK(std::abs(s.g - s.h - n / (2.0 * t)) <= 1e-10);
      }
  }
}

TEST_CASE("hyperbolic kernel near the source") {
  auto k = Kernel::make(Kernel::Id::hyperbolic_h3);
  auto s = k.evaluate(1e-8, 0.5);
  CHECK(s.g <= 1e-12);
  CHECK(s.h == doctest::Approx(-3.0 - 1.0).epsilon(1e-10));  // -3/2t - 1 at t=0.5
  auto s0 = k.evaluate(0.0, 0.5);
  CHECK(s0.g == 0.0);
}

TEST_CASE("every closed-form kernel satisfies the heat equation") {
  // Delta u / u = D2 log u + (D1 log u)^2 + coef * D1 log u must equal
  // u_t / u, with all derivatives taken numerically from log u alone.
  struct Probe {
    Kernel k;
    std::vector<double> rs;
  };
  std::vector<Probe> probes = {
      {Kernel::make(Kernel::Id::gaussian_rn, 3.0), {0.5, 1.5, 3.0}},
      {Kernel::make(Kernel::Id::hyperbolic_h3), {0.4, 1.0, 2.5}},
      {Kernel::make(Kernel::Id::sphere_s3), {0.4, 1.2, 2.6}},
      {Kernel::make(Kernel::Id::circle_flat), {0.4, 1.0, 2.8}},
  };
  for (const auto& pr : probes) {
    for (double t : {0.2, 1.0, 3.0}) {
      for (double r : pr.rs) {
        const double lt = num_dt(pr.k, r, t);
        const double d1 = num_dr(pr.k, r, t);
        const double d2 = num_drr(pr.k, r, t);
        const double lap_over_u = d2 + d1 * d1 + radial_coef(pr.k, r) * d1;
        CHECK(lt == doctest::Approx(lap_over_u)
                        .epsilon(2e-5));  // numeric stencils limit accuracy
      }
    }
  }
}

TEST_CASE("analytic g and h match numeric differentiation of log u") {
  std::vector<Kernel> kernels = {
      Kernel::make(Kernel::Id::gaussian_rn, 2.0),
      Kernel::make(Kernel::Id::hyperbolic_h3),
      Kernel::make(Kernel::Id::sphere_s3),
      Kernel::make(Kernel::Id::circle_flat),
  };
  for (const auto& k : kernels) {
    for (double t : {0.3, 1.0, 4.0}) {
      for (double r : {0.4, 1.1, 2.4}) {
        auto s = k.evaluate(r, t);
        CHECK(s.h == doctest::Approx(num_dt(k, r, t)).epsilon(1e-6));
        const double d1 = num_dr(k, r, t);
        CHECK(s.g == doctest::Approx(d1 * d1).epsilon(1e-5));
      }
    }
  }
}

TEST_CASE("sphere kernel endpoints and domain") {
  auto k = Kernel::make(Kernel::Id::sphere_s3);
  CHECK_THROWS_AS(k.evaluate(kPi, 1.0), DomainError);
  CHECK_THROWS_AS(k.evaluate(3.5, 1.0), DomainError);
  auto s = k.evaluate(1e-9, 0.7);
  CHECK(s.g == 0.0);
  CHECK(std::isfinite(s.h));
  CHECK(std::isfinite(s.log_u));
  // h at the source approaches the value just off the source
  auto s2 = k.evaluate(1e-4, 0.7);
  CHECK(s.h == doctest::Approx(s2.h).epsilon(1e-4));
}

TEST_CASE("image-sum truncation is converged by k_max = 5 to 8") {
  for (auto id : {Kernel::Id::sphere_s3, Kernel::Id::circle_flat}) {
    auto k5 = Kernel::make(id, 1.0, 5);
    auto k8 = Kernel::make(id, 1.0, 8);
    for (double t : {0.01, 0.5, 5.0})
      for (double r : {0.001, 1.0, 2.0})
        CHECK(std::abs(k5.log_u(r, t) - k8.log_u(r, t)) < 1e-12);
  }
  // near the far pole at large t the image sum nearly cancels, so the
  // automatic truncation keeps more terms; spot-check it against k_max = 12
  auto ka = Kernel::make(Kernel::Id::sphere_s3);
  auto k12 = Kernel::make(Kernel::Id::sphere_s3, 1.0, 12);
  CHECK(ka.log_u(2.9, 10.0) == doctest::Approx(k12.log_u(2.9, 10.0)).epsilon(1e-10));
}

TEST_CASE("circle kernel satisfies the semigroup property") {
  auto k = Kernel::make(Kernel::Id::circle_flat);
  const int N = 256;
  const double t1 = 0.3, t2 = 0.5;
  const double dx = 2.0 * kPi / N;
  for (double x : {0.0, 1.0, 2.5}) {
    double conv = 0.0;
    for (int j = 0; j < N; ++j) {
      const double y = j * dx;
      conv += std::exp(k.log_u(x - y, t1)) * std::exp(k.log_u(y, t2)) * dx;
    }
    const double want = std::exp(k.log_u(x, t1 + t2));
    CHECK(conv == doctest::Approx(want).epsilon(1e-6));
  }
}

TEST_CASE("verify_estimate: sharp equality on the flat kernel") {
  auto k = Kernel::make(Kernel::Id::gaussian_rn, 2.0);
  auto e = make_estimate("li_yau", {0.0, 2.0}, {{"alpha", 1.0}});
  auto rg = lin_spaced(0.0, 4.0, 15);
  auto tg = log_spaced(0.1, 10.0, 12);
  auto rep = verify_estimate(k, e, rg, tg);
  CHECK(std::abs(rep.min_slack) <= 1e-10);
  CHECK(rep.rows.size() == rg.size() * tg.size());
}

TEST_CASE("verify_estimate rejects mismatched geometry") {
  auto k = Kernel::make(Kernel::Id::gaussian_rn, 2.0);
  auto e = make_estimate("li_yau", {1.0, 2.0}, {{"alpha", 2.0}});
  std::vector<double> g{1.0};
  CHECK_THROWS_AS(verify_estimate(k, e, g, g), ConfigError);
}

TEST_CASE("verify_estimate: hyperbolic and spherical bounds hold") {
  auto h3 = Kernel::make(Kernel::Id::hyperbolic_h3);
  auto lx = make_estimate("li_xu_linear", {2.0, 3.0});
  auto rg = log_spaced(1e-3, 3.0, 25);
  auto tg = log_spaced(1e-2, 10.0, 25);
  CHECK(verify_estimate(h3, lx, rg, tg).min_slack >= -1e-8);

  auto s3 = Kernel::make(Kernel::Id::sphere_s3);
  auto tp = make_estimate("theta_exp_positive", {-2.0, 3.0}, {{"theta", 1.0 / 3.0}});
  CHECK(verify_estimate(s3, tp, rg, tg).min_slack >= -1e-8);
}

TEST_CASE("two-point bound on the sphere kernel") {
  auto k = Kernel::make(Kernel::Id::sphere_s3);
  // degenerate equality
  CHECK(harnack_check(k, 1.0 / 3.0, 0.7, 0.7, 1.0, 1.0, 0.0) == doctest::Approx(1.0));
  // coincident points at different times
  CHECK(harnack_check(k, 1.0 / 3.0, 0.5, 1.0, 1.0, 1.0, 0.0) >= 1.0);
  // distinct points on a common ray
  CHECK(harnack_check(k, 1.0 / 3.0, 0.5, 1.0, 2.0, 1.0, 1.0) >= 1.0);

  CHECK_THROWS_AS(harnack_check(k, 1.0 / 3.0, 0.0, 1.0, 1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(harnack_check(k, 0.5, 0.5, 1.0, 1.0, 1.0, 0.0), DomainError);
  CHECK_THROWS_AS(harnack_check(k, 1.0 / 3.0, 1.0, 0.5, 1.0, 1.0, 0.0), DomainError);
  auto flat = Kernel::make(Kernel::Id::gaussian_rn, 3.0);
  CHECK_THROWS_AS(harnack_check(flat, 1.0 / 3.0, 0.5, 1.0, 1.0, 1.0, 0.0), ConfigError);
}

TEST_CASE("fd_solve: constant data stays constant, mass is conserved") {
  auto run = fd_solve(fd_initial_constant(64), 64, 0.5);
  for (const auto& snap : run.snapshots)
    for (double v : snap) CHECK(v == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(run.mass_drift <= 1e-12);

  CHECK_THROWS_AS(fd_solve(fd_initial_constant(32), 32, 0.5), InputError);
  auto bad = fd_initial_constant(64);
  bad[10] = -1.0;
  CHECK_THROWS_AS(fd_solve(bad, 64, 0.5), InputError);
}

TEST_CASE("fd_solve: single cosine mode decays at the right rate") {
  const int N = 256;
  auto run = fd_solve(fd_initial_mode(N), N, 1.0);
  const double T = run.times.back();
  const auto& u = run.snapshots.back();
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    const double x = i * run.dx;
    worst = std::max(worst,
                     std::abs(u[i] - (1.0 + 0.5 * std::exp(-T) * std::cos(x))));
  }
  CHECK(worst <= 5e-3);
  CHECK(run.mass_drift <= 1e-8);
  CHECK(run.min_u > 0.0);
}

TEST_CASE("fd_solve matches the wrapped-gaussian kernel evolution") {
  const int N = 256;
  const double t0 = 0.05;
  auto run = fd_solve(fd_initial_wrapped_gaussian(N, t0), N, 0.5, t0);
  auto k = Kernel::make(Kernel::Id::circle_flat);
  const double tend = run.times.back();
  const auto& u = run.snapshots.back();
  double worst = 0.0;
  for (int i = 0; i < N; ++i) {
    double x = i * run.dx;
    if (x > kPi) x -= 2.0 * kPi;
    worst = std::max(worst, std::abs(u[i] - std::exp(k.log_u(x, tend))));
  }
  CHECK(worst <= 2e-2);
}

TEST_CASE("fd_check: constant run has slack c(t), sharp run stays near zero") {
  auto e = make_estimate("li_yau", {0.0, 1.0}, {{"alpha", 1.0}});
  auto cr = fd_solve(fd_initial_constant(64), 64, 0.5, 0.05);
  auto rep = fd_check(cr, e, 0.05);
  // g = 0, h = 0 everywhere: slack is exactly c(t) = 1/(2t) > 0
  CHECK(rep.min_slack == doctest::Approx(1.0 / (2.0 * cr.times.back())).epsilon(1e-6));

  const int N = 256;
  auto mr = fd_solve(fd_initial_mode(N), N, 0.95, 0.05);
  CHECK(fd_check(mr, e, 0.05).min_slack >= -0.05);

  auto rr = fd_solve(fd_initial_random(N, 12345), N, 0.95, 0.05);
  CHECK(fd_check(rr, e, 0.05).min_slack >= -0.05);

  // the near-sharp kernel run is discretization-limited: once the
  // time-stepping startup transient has decayed, the slack dips only by the
  // spatial discretization allowance, and halves again at twice the
  // resolution
  auto gr = fd_solve(fd_initial_wrapped_gaussian(N, 0.05), N, 0.95, 0.05);
  auto grep = fd_check(gr, e, 0.25);
  CHECK(grep.min_slack >= -0.05);
  CHECK(grep.min_slack < 0.0);  // genuinely limited by discretization

  auto wrong = make_estimate("li_yau", {0.0, 2.0}, {{"alpha", 1.0}});
  CHECK_THROWS_AS(fd_check(gr, wrong, 0.05), ConfigError);
}

TEST_CASE("fd derivatives track the analytic solution values") {
  const int N = 256;
  // single-mode run against the exact solution 1 + a e^{-t} cos x
  auto run = fd_solve(fd_initial_mode(N), N, 1.0);
  auto e = make_estimate("li_yau", {0.0, 1.0}, {{"alpha", 1.0}});
  auto rep = fd_check(run, e, 0.1);
  double worst = 0.0;
  for (const auto& row : rep.rows) {
    const double u = 1.0 + 0.5 * std::exp(-row.t) * std::cos(row.r);
    const double du = -0.5 * std::exp(-row.t) * std::sin(row.r);
    const double d2u = -0.5 * std::exp(-row.t) * std::cos(row.r);
    const double g = (du / u) * (du / u);
    const double h = d2u / u;
    worst = std::max({worst, std::abs(row.g - g), std::abs(row.h - h)});
  }
  CHECK(worst <= 0.02);

  // wrapped-gaussian run against the closed-form kernel, past the startup
  // transient and away from the antipodal crossover where log u curvature
  // blows up the stencil constants
  const double t0 = 0.05;
  auto grun = fd_solve(fd_initial_wrapped_gaussian(N, t0), N, 0.95, t0);
  auto grep = fd_check(grun, e, 0.4);
  auto k = Kernel::make(Kernel::Id::circle_flat);
  double gworst = 0.0;
  for (const auto& row : grep.rows) {
    double x = row.r;
    if (x > kPi) x -= 2.0 * kPi;
    if (std::abs(x) > 2.0) continue;
    auto s = k.evaluate(x, row.t);
    gworst = std::max({gworst, std::abs(row.g - s.g), std::abs(row.h - s.h)});
  }
  CHECK(gworst <= 0.02);
}

TEST_CASE("fd snapshots export as x,u tables") {
  auto run = fd_solve(fd_initial_mode(64), 64, 0.2);
  const std::string csv = run.snapshot_csv(0);
  CHECK(csv.rfind("x,u\n", 0) == 0);
  CHECK(std::count(csv.begin(), csv.end(), '\n') == 65);
  CHECK_THROWS_AS(run.snapshot_csv(run.snapshots.size()), InputError);
}

TEST_CASE("slack report CSV is deterministic with fixed columns") {
  auto k = Kernel::make(Kernel::Id::gaussian_rn, 2.0);
  auto e = make_estimate("li_yau", {0.0, 2.0}, {{"alpha", 1.0}});
  std::vector<double> g1{0.5, 1.0}, g2{0.3, 0.9};
  auto rep = verify_estimate(k, e, g1, g2);
  const std::string csv = rep.to_csv();
  CHECK(csv.rfind("kernel,estimate,r,t,g,h,slack\n", 0) == 0);
  CHECK(csv == rep.to_csv());
}
