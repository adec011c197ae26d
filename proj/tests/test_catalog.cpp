#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "harnack/catalog.hpp"

using namespace harnack;

TEST_CASE("make_estimate reproduces the displayed coefficients") {
  // li_yau at K = 0: c = n a^2 / (2t)
  auto ly = make_estimate("li_yau", {0.0, 2.0}, {{"alpha", 2.0}});
  CHECK(ly.c()(1.0) == doctest::Approx(4.0).epsilon(1e-14));
  CHECK(ly.alpha()(1.0) == 2.0);

  // li_xu_linear at K = 3, n = 2, t = 1: alpha = 3, c = 1 + 6 = 7
  auto lx = make_estimate("li_xu_linear", {3.0, 2.0});
  CHECK(lx.alpha()(1.0) == doctest::Approx(3.0).epsilon(1e-14));
  CHECK(lx.c()(1.0) == doctest::Approx(7.0).epsilon(1e-14));

  // hamilton_refined at K = 1, n = 1, t = ln(2)/2: c = 4/(2-1) = 4
  auto hr = make_estimate("hamilton_refined", {1.0, 1.0});
  CHECK(hr.c()(std::log(2.0) / 2.0) == doctest::Approx(4.0).epsilon(1e-13));
}

TEST_CASE("construction errors name the violated constraint") {
  CHECK_THROWS_AS(make_estimate("nope", {0.0, 1.0}), ConstructionError);
  CHECK_THROWS_AS(make_estimate("li_yau", {1.0, 2.0}, {{"alpha", 1.0}}),
                  ConstructionError);
  CHECK_THROWS_AS(make_estimate("li_yau", {1.0, 2.0}), ConstructionError);
  CHECK_THROWS_AS(make_estimate("theta_exp_positive", {1.0, 3.0}, {{"theta", 0.2}}),
                  ConstructionError);
  CHECK_THROWS_AS(make_estimate("theta_exp_positive", {-1.0, 3.0}, {{"theta", 0.4}}),
                  ConstructionError);
  CHECK_THROWS_AS(make_estimate("theta_exp", {1.0, 3.0}, {{"theta", 0.0}}),
                  ConstructionError);
  CHECK_THROWS_AS(make_estimate("bbg", {0.0, 3.0}), ConstructionError);
  CHECK_THROWS_AS(make_estimate("li_xu_sinh", {0.0, 3.0}), ConstructionError);
  try {
    make_estimate("li_yau", {2.0, 2.0}, {{"alpha", 0.5}});
    CHECK(false);
  } catch (const ConstructionError& e) {
    CHECK(std::string(e.what()).find("alpha > 1") != std::string::npos);
  }
}

TEST_CASE("linear residual: sharp state, zero state") {
  // Gaussian-kernel state at (n, r, t) = (1, 2, 1): g = 1, h = 0.5; the
  // K = 0, alpha = 1 bound is saturated there.
  auto ly = make_estimate("li_yau", {0.0, 1.0}, {{"alpha", 1.0}});
  CHECK(ly.residual({1.0, 0.5, 0.0, 1.0}) == doctest::Approx(0.0).epsilon(1e-14));

  for (const auto& entry : list_catalog()) {
    if (!entry.linear) continue;
    GeometryParams p{entry.id == "theta_exp_positive" ? -2.0 : 1.0, 2.0};
    std::map<std::string, double> extra;
    if (entry.requires_params == "alpha") extra["alpha"] = 2.0;
    if (entry.requires_params == "theta") extra["theta"] = 1.0 / 3.0;
    auto e = make_estimate(entry.id, p, extra);
    // residual of the zero state is -c(t) < 0
    const double r = e.residual({0.0, 0.0, 0.0, 0.7});
    CHECK(r < 0.0);
    CHECK(r == doctest::Approx(-e.c()(0.7)).epsilon(1e-14));
  }
}

TEST_CASE("bbg branches meet continuously at x = 1") {
  const double K = 1.0, t = 1.0;
  // both branches limit to K/2 + 1/t
  CHECK(bbg_phi(K, t, 1.0) == doctest::Approx(1.5).epsilon(1e-13));
  CHECK(bbg_phi(K, t, 1.0 - 1e-6) == doctest::Approx(1.5).epsilon(1e-5));
  CHECK(bbg_phi(K, t, 1.0 + 1e-6) == doctest::Approx(1.5).epsilon(1e-5));
  // far side of each branch against direct closed forms; the displayed
  // argument is -Kt sqrt(1-x), and coth is odd
  const double xm = -3.0;
  const double want_m =
      -K / 2.0 * (xm - 2.0 - 2.0 * std::sqrt(1.0 - xm) / std::tanh(K * t * std::sqrt(1.0 - xm)));
  CHECK(bbg_phi(K, t, xm) == doctest::Approx(want_m).epsilon(1e-13));
  const double xp = 2.0;
  const double want_p =
      -K / 2.0 * (xp - 2.0 - 2.0 * std::sqrt(xp - 1.0) / std::tan(K * t * std::sqrt(xp - 1.0)));
  CHECK(bbg_phi(K, t, xp) == doctest::Approx(want_p).epsilon(1e-13));
  CHECK_THROWS_AS(bbg_phi(K, t, 1.0 + M_PI * M_PI + 0.1), DomainError);
}

TEST_CASE("gradient ceiling: affine, bakry_qian closed form, bbg") {
  // linear with alpha = 2, c(1) = 4: ceiling at h = 1 is 6
  auto ly = make_estimate("li_yau", {0.0, 2.0}, {{"alpha", 2.0}});
  CHECK(ly.max_allowed_gradient(1.0, 1.0).g == doctest::Approx(6.0));

  // K = 0 reduces bakry_qian to g <= h + n/2t
  auto bq0 = make_estimate("bakry_qian", {0.0, 2.0});
  CHECK(bq0.max_allowed_gradient(0.3, 1.0).g == doctest::Approx(1.3).epsilon(1e-13));

  // K > 0: the closed form must be the root of the residual (bisection oracle)
  auto bq = make_estimate("bakry_qian", {1.0, 2.0});
  for (double h : {-1.0, 0.0, 2.0}) {
    const double t = 0.8;
    const double ceil = bq.max_allowed_gradient(h, t).g;
    double lo = 0.0, hi = 1e6;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (bq.residual({mid, h, 0.0, t}) <= 0.0 ? lo : hi) = mid;
    }
    CHECK(ceil == doctest::Approx(lo).epsilon(1e-9));
  }

  // bbg at K=1, n=3, t=1, h=-1.5 lands on the oscillatory branch (x = 2)
  auto bbg = make_estimate("bbg", {1.0, 3.0});
  const double ceil = bbg.max_allowed_gradient(-1.5, 1.0).g;
  CHECK(ceil == doctest::Approx(1.5 / std::tan(1.0)).epsilon(1e-13));
  {
    double lo = 0.0, hi = 100.0;
    for (int i = 0; i < 200; ++i) {
      const double mid = 0.5 * (lo + hi);
      (bbg.residual({mid, -1.5, 0.0, 1.0}) <= 0.0 ? lo : hi) = mid;
    }
    CHECK(ceil == doctest::Approx(lo).epsilon(1e-9));
  }

  // empty feasible set flags and floors at zero
  auto flagged = ly.max_allowed_gradient(-10.0, 1.0);
  CHECK(flagged.empty);
  CHECK(flagged.g == 0.0);
}

TEST_CASE("catalog registry lists all twelve estimates") {
  auto entries = list_catalog();
  CHECK(entries.size() == 12);
  int linear = 0;
  std::string joined;
  for (const auto& e : entries) {
    joined += e.id + ": " + e.validity + "\n";
    if (e.linear) linear++;
  }
  CHECK(linear == 10);
  CHECK(joined.find("theta_exp_positive: K<0, θ∈(0,1/3]") != std::string::npos);
  CHECK(joined.find("li_yau: α>1 (α=1 allowed iff K=0)") != std::string::npos);
}

TEST_CASE("residual is nondecreasing in g for every estimate") {
  std::mt19937 rng(7);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const auto& entry : list_catalog()) {
    GeometryParams p{entry.id == "theta_exp_positive" ? -2.0
                     : (entry.id == "bbg" || entry.id == "li_xu_sinh") ? 1.5
                                                                       : 1.0,
                     3.0};
    std::map<std::string, double> extra;
    if (entry.requires_params == "alpha") extra["alpha"] = 2.0;
    if (entry.requires_params == "theta") extra["theta"] = 1.0 / 3.0;
    auto e = make_estimate(entry.id, p, extra);
    for (int i = 0; i < 50; ++i) {
      const double t = 0.1 + 3.0 * U(rng);
      double h = -1.5 / t + 3.0 * U(rng);
      if (entry.id == "bbg") {
        const double hm = *e.h_min(t);
        h = std::max(h, hm + 0.1 * (1.0 + std::abs(hm)));
      }
      const double g1 = 3.0 * U(rng), g2 = g1 + 2.0 * U(rng);
      CHECK(e.residual({g1, h, 0.0, t}) <= e.residual({g2, h, 0.0, t}) + 1e-12);
    }
  }
}

TEST_CASE("linear ceilings are exact residual roots") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (const auto& entry : list_catalog()) {
    if (!entry.linear) continue;
    GeometryParams p{entry.id == "theta_exp_positive" ? -2.0
                     : entry.id == "li_xu_sinh"       ? 1.5
                                                      : 1.0,
                     3.0};
    std::map<std::string, double> extra;
    if (entry.requires_params == "alpha") extra["alpha"] = 2.0;
    if (entry.requires_params == "theta") extra["theta"] = 0.25;
    auto e = make_estimate(entry.id, p, extra);
    for (int i = 0; i < 20; ++i) {
      const double t = 0.2 + 3.0 * U(rng);
      const double h = -1.0 + 2.0 * U(rng);
      auto ceil = e.max_allowed_gradient(h, t);
      if (ceil.empty) continue;
      CHECK(std::abs(e.residual({ceil.g, h, 0.0, t})) <= 1e-12 * std::max(1.0, ceil.g));
    }
  }
}

TEST_CASE("theta_exp at theta = 1 coincides with hamilton_refined") {
  std::mt19937 rng(13);
  std::uniform_real_distribution<double> U(0.0, 1.0);
  for (int i = 0; i < 20; ++i) {
    const double K = 2.0 * U(rng);
    const double t = 0.05 + 5.0 * U(rng);
    auto te = make_estimate("theta_exp", {K, 3.0}, {{"theta", 1.0}});
    auto hr = make_estimate("hamilton_refined", {K, 3.0});
    CHECK(te.alpha()(t) == hr.alpha()(t));
    CHECK(te.c()(t) == hr.c()(t));
  }
}

TEST_CASE("small-K branch of the exponential family") {
  const double n = 3.0, t = 1.7;
  for (double theta : {0.2, 1.0 / 3.0, 1.0}) {
    const double m = std::max(0.5 * (1 - theta), theta);
    // direct evaluation at K = 1e-9 (naive formula) vs the implementation
    const double K = 1e-9;
    const double naive =
        n * K * m * std::exp(4 * theta * K * t) / (std::exp(2 * theta * K * t) - 1.0);
    auto e = make_estimate("theta_exp", {K, n}, {{"theta", theta}});
    CHECK(e.c()(t) == doctest::Approx(naive).epsilon(1e-5));
    // K -> 0 limit matches the series value to 1e-5 relative
    auto e0 = make_estimate("theta_exp", {0.0, n}, {{"theta", theta}});
    CHECK(e0.c()(t) ==
          doctest::Approx(n * m / (2.0 * theta * t)).epsilon(1e-12));
    CHECK(e.c()(t) == doctest::Approx(e0.c()(t)).epsilon(1e-5));
  }
}

TEST_CASE("hamilton exceeds hamilton_refined for K > 0") {
  for (double K : {0.3, 1.0, 2.0}) {
    auto h = make_estimate("hamilton", {K, 2.0});
    auto hr = make_estimate("hamilton_refined", {K, 2.0});
    for (double t : {0.05, 0.5, 1.0, 4.0, 10.0}) {
      CHECK(h.c()(t) > hr.c()(t));
      CHECK(h.alpha()(t) == hr.alpha()(t));
    }
  }
}

TEST_CASE("analytic derivatives of the catalog coefficients are consistent") {
  // central differences of c against the registered analytic derivative
  for (const auto& entry : list_catalog()) {
    if (!entry.linear) continue;
    GeometryParams p{entry.id == "theta_exp_positive" ? -2.0
                     : entry.id == "li_xu_sinh"       ? 1.5
                                                      : 1.2,
                     3.0};
    std::map<std::string, double> extra;
    if (entry.requires_params == "alpha") extra["alpha"] = 2.0;
    if (entry.requires_params == "theta") extra["theta"] = 0.3;
    auto e = make_estimate(entry.id, p, extra);
    for (double t : {0.21, 0.9, 3.3}) {
      const double h = 1e-6 * std::max(1.0, t);
      for (const TimeFn* f : {&e.alpha(), &e.c()}) {
        const double num = ((*f)(t + h) - (*f)(t - h)) / (2 * h);
        const double ana = derivative_at(*f, t);
        CHECK(ana == doctest::Approx(num).epsilon(1e-5));
      }
    }
  }
}
