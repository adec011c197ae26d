#include "harnack/compare.hpp"

#include <algorithm>
#include <cmath>

#include "harnack/csvio.hpp"

namespace harnack {

std::string DominanceReport::to_csv() const {
  std::string out = "t,h,ceiling_e1,ceiling_e2,diff\n";
  for (const auto& r : rows) {
    out += csv_num(r.t);
    out += ',';
    out += csv_num(r.h);
    out += ',';
    out += csv_num(r.ceiling_e1);
    out += ',';
    out += csv_num(r.ceiling_e2);
    out += ',';
    out += csv_num(r.diff);
    out += '\n';
  }
  return out;
}

DominanceReport dominance(const Estimate& e1, const Estimate& e2,
                          std::span<const double> t_grid, int h_points) {
  if (e1.params().K != e2.params().K || e1.params().n != e2.params().n)
    throw ConfigError("dominance: estimates must share (K, n)");
  if (h_points < 2) throw InputError("dominance: h_points must be >= 2");

  DominanceReport rep;
  rep.id1 = e1.id();
  rep.id2 = e2.id();
  rep.params = e1.params();
  rep.max_diff = -std::numeric_limits<double>::infinity();

  const double n = e1.params().n;
  for (double t : t_grid) {
    double h_lo = -10.0 * n / (2.0 * t);
    const double h_hi = 10.0 * n / (2.0 * t);
    for (const Estimate* e : {&e1, &e2}) {
      if (auto hm = e->h_min(t)) {
        // keep clear of the branch edge where the ceiling dives to -inf
        const double inset = *hm + 1e-6 * (1.0 + std::abs(*hm));
        h_lo = std::max(h_lo, inset);
      }
    }
    if (!(h_lo < h_hi))
      throw ConfigError("dominance: empty h window at t = " + csv_num(t));
    for (int i = 0; i < h_points; ++i) {
      const double h = h_lo + (h_hi - h_lo) * i / (h_points - 1);
      const double c1 = e1.max_allowed_gradient(h, t).g;
      const double c2 = e2.max_allowed_gradient(h, t).g;
      DominanceRow row{t, h, c1, c2, c1 - c2};
      rep.max_diff = std::max(rep.max_diff, row.diff);
      rep.rows.push_back(row);
    }
  }
  rep.dominates = rep.max_diff <= 1e-9;
  return rep;
}

std::vector<SlackProfileRow> slack_profile(const Estimate& e, const Kernel& k,
                                           std::span<const double> t_grid,
                                           std::span<const double> r_grid) {
  if (e.params().K != k.params().K || e.params().n != k.params().n)
    throw ConfigError("slack_profile: estimate (K, n) must match the kernel");
  std::vector<SlackProfileRow> rows;
  rows.reserve(t_grid.size());
  for (double t : t_grid) {
    SlackProfileRow row;
    row.t = t;
    row.min_slack = std::numeric_limits<double>::infinity();
    for (double r : r_grid) {
      const double slack = -e.residual(k.evaluate(r, t));
      if (slack < row.min_slack) {
        row.min_slack = slack;
        row.argmin_r = r;
      }
    }
    rows.push_back(row);
  }
  return rows;
}

std::string slack_profile_csv(const std::vector<SlackProfileRow>& rows) {
  std::string out = "t,min_slack,argmin_r\n";
  for (const auto& r : rows) {
    out += csv_num(r.t);
    out += ',';
    out += csv_num(r.min_slack);
    out += ',';
    out += csv_num(r.argmin_r);
    out += '\n';
  }
  return out;
}

}  // namespace harnack
