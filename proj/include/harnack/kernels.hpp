#pragma once

#include <span>
#include <string>
#include <vector>

#include "harnack/catalog.hpp"
#include "harnack/types.hpp"

namespace harnack {

/// Closed-form heat kernels on model spaces, used as verification ground
/// truth. Geometry is fixed per model: gaussian_rn has K = 0 with the
/// dimension chosen by the caller; hyperbolic_h3 is (K, n) = (2, 3);
/// sphere_s3 is (K, n) = (-2, 3); circle_flat is (K, n) = (0, 1).
class Kernel {
 public:
  enum class Id { gaussian_rn, hyperbolic_h3, sphere_s3, circle_flat };

  /// k_max = 0 picks the image-sum truncation adaptively so the dropped tail
  /// is below 1e-14 of the leading term.
  static Kernel make(Id id, double n_for_gaussian = 1.0, int k_max = 0);
  static Kernel make(const std::string& id, double n_for_gaussian = 1.0,
                     int k_max = 0);

  Id id() const { return id_; }
  const std::string& name() const { return name_; }
  const GeometryParams& params() const { return params_; }

  /// Pointwise solution data at radial coordinate r (angle for sphere_s3,
  /// arclength for circle_flat) and time t > 0, from analytic
  /// differentiation of the closed form.
  SolutionState evaluate(double r, double t) const;
  double log_u(double r, double t) const;

 private:
  Id id_ = Id::gaussian_rn;
  std::string name_;
  GeometryParams params_;
  int k_max_ = 0;
};

struct SlackRow {
  std::string kernel;
  std::string estimate;
  double r = 0.0;
  double t = 0.0;
  double g = 0.0;
  double h = 0.0;
  double slack = 0.0;
};

struct SlackReport {
  double min_slack = 0.0;
  double argmin_r = 0.0;
  double argmin_t = 0.0;
  std::vector<SlackRow> rows;
  std::string to_csv() const;  // columns: kernel,estimate,r,t,g,h,slack
};

/// slack(r, t) = -residual(e, evaluate(k, r, t)) over the grid product;
/// nonnegative slack everywhere means the estimate holds on this model.
SlackReport verify_estimate(const Kernel& k, const Estimate& e,
                            std::span<const double> r_grid,
                            std::span<const double> t_grid);

/// Two-point comparison derived from the positive-curvature exponential
/// bound: returns RHS/LHS for
///   u(s, x) <= ((1 - e^{2 th K t})/(1 - e^{2 th K s}))^{n/2}
///              * exp(-(th K/2) d^2 / (e^{-2 th K t} - e^{-2 th K s})) * u(t, y),
/// with x, y at radii r_x, r_y from the kernel source and geodesic distance d.
/// Ratio >= 1 means the inequality holds. Requires K < 0, 0 < s <= t
/// (s = t only with d = 0) and theta in (0, 1/3].
double harnack_check(const Kernel& k, double theta, double s, double t,
                     double r_x, double r_y, double d);

/// A Crank-Nicolson run on the unit-speed circle. Snapshots are full u
/// fields at times t0 + m*dt, dt = dx = 2*pi/N.
struct FDRun {
  int N = 0;
  double dx = 0.0;
  double dt = 0.0;
  double t0 = 0.0;
  std::vector<double> times;
  std::vector<std::vector<double>> snapshots;
  double mass_drift = 0.0;  // max relative drift of the trapezoid mass
  double min_u = 0.0;
  std::string snapshot_csv(std::size_t index) const;  // columns: x,u
};

/// initial must hold N strictly positive samples on [0, 2*pi). floor_eps is
/// the positivity floor: the run aborts if u ever drops to it.
FDRun fd_solve(const std::vector<double>& initial, int N, double T,
               double t0 = 0.0, double floor_eps = 0.0);

/// Checks a linear estimate with (K, n) = (0, 1) against the run: g and h are
/// formed from central differences of log u in space (h = D2 log u + g).
/// Snapshots before t_min are skipped.
SlackReport fd_check(const FDRun& run, const Estimate& e, double t_min);

/// Convenience initial fields for fd_solve.
std::vector<double> fd_initial_constant(int N, double value = 1.0);
std::vector<double> fd_initial_mode(int N, double amplitude = 0.5);
std::vector<double> fd_initial_wrapped_gaussian(int N, double t0);
std::vector<double> fd_initial_random(int N, unsigned seed);

}  // namespace harnack
