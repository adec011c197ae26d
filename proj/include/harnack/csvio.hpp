#pragma once

#include <cstdio>
#include <cstdlib>
#include <string>

namespace harnack {

/// Deterministic double formatting for CSV output: the shortest of 15/16/17
/// significant digits that parses back to the same double, so identical
/// inputs produce identical bytes and rows round-trip exactly.
inline std::string csv_num(double v) {
  char buf[40];
  for (int prec = 15; prec <= 17; ++prec) {
    std::snprintf(buf, sizeof buf, "%.*g", prec, v);
    if (std::strtod(buf, nullptr) == v) break;
  }
  return buf;
}

}  // namespace harnack
