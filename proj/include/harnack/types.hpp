#pragma once

#include "harnack/errors.hpp"

namespace harnack {

/// Geometry data shared across the library: the Ricci curvature of the
/// underlying manifold is bounded below by -K, and n is the dimension.
/// K >= 0 admits curvature down to -K; K < 0 asserts positive curvature.
struct GeometryParams {
  double K = 0.0;
  double n = 1.0;
};

void validate(const GeometryParams& p);

/// Pointwise data of a positive heat-equation solution u at time t:
///   g = |grad u|^2 / u^2, h = u_t / u (= Laplacian u / u), log_u = log u.
struct SolutionState {
  double g = 0.0;
  double h = 0.0;
  double log_u = 0.0;
  double t = 0.0;
};

}  // namespace harnack
