#pragma once

#include <span>
#include <string>
#include <vector>

#include "harnack/catalog.hpp"
#include "harnack/kernels.hpp"

namespace harnack {

struct DominanceRow {
  double t = 0.0;
  double h = 0.0;
  double ceiling_e1 = 0.0;
  double ceiling_e2 = 0.0;
  double diff = 0.0;  // ceiling_e1 - ceiling_e2
};

/// "e1 is at least as strong as e2" formalized as pointwise gradient-ceiling
/// dominance: at every sampled (h, t), the largest gradient e1 allows is no
/// larger than what e2 allows (within 1e-9).
struct DominanceReport {
  std::string id1, id2;
  GeometryParams params;
  double max_diff = 0.0;
  bool dominates = false;
  std::vector<DominanceRow> rows;  // t-major, then h
  std::string to_csv() const;      // columns: t,h,ceiling_e1,ceiling_e2,diff
};

/// Compares gradient ceilings on a shared grid. The h window at each t spans
/// [-10 n/2t, +10 n/2t] intersected with both estimates' admissible h ranges
/// (bbg's branch limit trims the lower end), h_points equally spaced.
DominanceReport dominance(const Estimate& e1, const Estimate& e2,
                          std::span<const double> t_grid, int h_points = 100);

struct SlackProfileRow {
  double t = 0.0;
  double min_slack = 0.0;
  double argmin_r = 0.0;
};

/// Tightness of an estimate against a model-space kernel: for each t, the
/// minimum slack over the r grid.
std::vector<SlackProfileRow> slack_profile(const Estimate& e, const Kernel& k,
                                           std::span<const double> t_grid,
                                           std::span<const double> r_grid);

std::string slack_profile_csv(const std::vector<SlackProfileRow>& rows);

}  // namespace harnack
