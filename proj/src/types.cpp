#include "harnack/types.hpp"

#include <cmath>

namespace harnack {

void validate(const GeometryParams& p) {
  if (!(p.n >= 1.0)) throw InputError("GeometryParams: n must be >= 1");
  if (!std::isfinite(p.K)) throw InputError("GeometryParams: K must be finite");
}

}  // namespace harnack
