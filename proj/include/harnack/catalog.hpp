#pragma once

#include <map>
#include <optional>
#include <string>
#include <vector>

#include "harnack/timefn.hpp"
#include "harnack/types.hpp"

namespace harnack {

/// Largest gradient square permitted at given (h, t); empty is set when even
/// g = 0 violates the bound (the value is then floored at 0).
struct GradientCeiling {
  double g = 0.0;
  bool empty = false;
};

/// A named gradient estimate: either a linear bound
///   |grad log u|^2 - alpha(t) (log u)_t - c(t) <= 0
/// or one of the two nonlinear bounds (bakry_qian, bbg). Immutable after
/// construction; all member functions are pure.
class Estimate {
 public:
  enum class Form { linear, bakry_qian, bbg };

  const std::string& id() const { return id_; }
  const GeometryParams& params() const { return params_; }
  Form form() const { return form_; }
  bool is_linear() const { return form_ == Form::linear; }

  const TimeFn& alpha() const;
  const TimeFn& c() const;
  const EstimatePair& pair() const;

  /// Signed residual at a solution state; <= 0 means the bound holds with
  /// slack equal to -residual.
  double residual(const SolutionState& s) const;

  /// Largest g >= 0 with residual <= 0 at (h, t).
  GradientCeiling max_allowed_gradient(double h, double t) const;

  /// Lower limit of admissible h at time t (only bbg restricts h: its
  /// oscillatory branch requires 4h/(-nK) < 1 + pi^2/(K t)^2).
  std::optional<double> h_min(double t) const;

  double extra(const std::string& key) const;

 private:
  friend Estimate make_estimate(const std::string&, const GeometryParams&,
                                const std::map<std::string, double>&);
  friend EstimatePair linear_pair(const std::string&, const GeometryParams&,
                                  const std::map<std::string, double>&);
  Estimate() = default;

  std::string id_;
  GeometryParams params_;
  Form form_ = Form::linear;
  EstimatePair pair_;
  std::map<std::string, double> extra_;
};

/// Builds a catalog estimate by id. Known ids: li_yau, davies, hamilton,
/// li_xu_linear, li_xu_sinh, new_max, new_spliced, theta_exp,
/// theta_exp_positive, hamilton_refined, bakry_qian, bbg. `extra` supplies
/// "alpha" or "theta" where the estimate requires one. Parameters outside an
/// estimate's stated constraints raise ConstructionError naming the
/// constraint.
Estimate make_estimate(const std::string& id, const GeometryParams& p,
                       const std::map<std::string, double>& extra = {});

/// Builds the (alpha, c) pair of a linear estimate without enforcing the
/// stated parameter constraints (divisions that would be undefined are
/// dropped, e.g. the K-term of li_yau at alpha = 1). This is what the
/// condition verifier feeds on when probing parameter combinations the
/// estimate itself rejects.
EstimatePair linear_pair(const std::string& id, const GeometryParams& p,
                         const std::map<std::string, double>& extra = {});

struct CatalogEntry {
  std::string id;
  std::string requires_params;  // "alpha", "theta" or ""
  std::string validity;
  bool linear = true;
};

/// All twelve estimates with their parameter requirements and constraints.
/// The first ten entries are the linear bounds.
std::vector<CatalogEntry> list_catalog();

/// Two-branch envelope function used by the bbg estimate:
/// phi(x) = K(2-x)/2 + w(K^2 t^2 (1-x))/t with w(z) = sqrt(z) coth sqrt(z)
/// continued analytically through z = 0; defined for z > -pi^2.
double bbg_phi(double K, double t, double x);

}  // namespace harnack
