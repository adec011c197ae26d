#include "harnack/cli.hpp"

#include <cmath>
#include <fstream>
#include <iostream>
#include <map>
#include <optional>
#include <sstream>

#include <CLI11.hpp>

#include "harnack/catalog.hpp"
#include "harnack/compare.hpp"
#include "harnack/condition.hpp"
#include "harnack/csvio.hpp"
#include "harnack/designer.hpp"
#include "harnack/kernels.hpp"

namespace harnack {

namespace {

struct Range {
  double lo = 0.0;
  double hi = 0.0;
  int count = 0;
};

Range parse_range(const std::string& text) {
  Range r;
  char c1 = 0, c2 = 0;
  std::istringstream in(text);
  if (!(in >> r.lo >> c1 >> r.hi >> c2 >> r.count) || c1 != ':' || c2 != ':')
    throw InputError("range must be lo:hi:count, got '" + text + "'");
  if (r.count < 1) throw InputError("range count must be >= 1");
  return r;
}

std::vector<double> expand(const Range& r, bool linear) {
  if (r.count == 1) return {r.lo};
  return linear ? lin_spaced(r.lo, r.hi, r.count)
                : log_spaced(r.lo, r.hi, r.count);
}

void emit(const std::string& text, const std::string& out_path) {
  if (out_path.empty()) {
    std::cout << text;
    return;
  }
  std::ofstream out(out_path, std::ios::binary);
  if (!out) throw InputError("cannot open output file '" + out_path + "'");
  out << text;
}

std::map<std::string, double> extra_of(double alpha, double theta) {
  std::map<std::string, double> extra;
  if (std::isfinite(alpha)) extra["alpha"] = alpha;
  if (std::isfinite(theta)) extra["theta"] = theta;
  return extra;
}

constexpr double kUnset = std::numeric_limits<double>::quiet_NaN();

}  // namespace

int run_cli(const std::vector<std::string>& args) {
  CLI::App app{"gradient-estimate toolkit for positive heat-equation solutions"};
  app.require_subcommand(1);
  app.set_config("--config", "", "key=value file; command-line flags win");

  // ---- catalog ----------------------------------------------------------
  auto* cat = app.add_subcommand("catalog", "list the estimate registry");
  std::string cat_out;
  cat->add_option("--out", cat_out, "write CSV here instead of stdout");

  // ---- verify -----------------------------------------------------------
  auto* ver = app.add_subcommand(
      "verify", "check the certifying condition for an estimate over a t interval");
  std::string ver_id, ver_t = "0.01:10:100", ver_out;
  double ver_K = 0.0, ver_n = 1.0, ver_alpha = kUnset, ver_theta = kUnset;
  bool ver_linear = false;
  ver->add_option("--estimate", ver_id, "estimate id")->required();
  ver->add_option("--K", ver_K, "Ricci lower bound is -K");
  ver->add_option("--n", ver_n, "dimension");
  ver->add_option("--alpha", ver_alpha, "constant alpha");
  ver->add_option("--theta", ver_theta, "theta parameter");
  ver->add_option("--t", ver_t, "time range lo:hi:count");
  ver->add_flag("--linear", ver_linear, "linear instead of log spacing");
  ver->add_option("--out", ver_out, "write CSV here instead of stdout");

  // ---- design -----------------------------------------------------------
  auto* des = app.add_subcommand("design", "synthesize an (alpha, c) pair");
  des->require_subcommand(1);

  auto* des_a = des->add_subcommand("from-a", "integral construction from a profile");
  std::string da_profile = "quadratic", da_csv, da_t = "0.01:10:200", da_out;
  double da_K = 1.0, da_n = 2.0;
  bool da_linear = false;
  des_a->add_option("--profile", da_profile, "quadratic | sinh")
      ->check(CLI::IsMember({"quadratic", "sinh"}));
  des_a->add_option("--profile-csv", da_csv, "two-column CSV t,a overriding --profile");
  des_a->add_option("--K", da_K);
  des_a->add_option("--n", da_n);
  des_a->add_option("--t", da_t, "time range lo:hi:count");
  des_a->add_flag("--linear", da_linear);
  des_a->add_option("--out", da_out);

  auto* des_o = des->add_subcommand("ode", "minimal-c envelope for constant alpha");
  double do_alpha = 2.0, do_K = 1.0, do_n = 2.0, do_t0 = 1.0, do_c0 = kUnset,
         do_T = 5.0, do_step = 1e-3;
  std::string do_out;
  des_o->add_option("--alpha", do_alpha, "constant alpha != 1");
  des_o->add_option("--K", do_K);
  des_o->add_option("--n", do_n);
  des_o->add_option("--t0", do_t0);
  des_o->add_option("--c0", do_c0, "initial c; default continues n a^2/(2 t0)");
  des_o->add_option("--T", do_T);
  des_o->add_option("--step", do_step);
  des_o->add_option("--out", do_out);

  auto* des_s = des->add_subcommand(
      "splice", "sign-criterion branch up to t0 = (alpha-1)/K, envelope after");
  double ds_alpha = 2.0, ds_K = 1.0, ds_n = 2.0, ds_T = 10.0, ds_step = 1e-3;
  int ds_points = 200;
  std::string ds_out;
  des_s->add_option("--alpha", ds_alpha, "constant alpha > 1");
  des_s->add_option("--K", ds_K)->check(CLI::PositiveNumber);
  des_s->add_option("--n", ds_n);
  des_s->add_option("--T", ds_T);
  des_s->add_option("--step", ds_step);
  des_s->add_option("--points", ds_points, "rows in the emitted table");
  des_s->add_option("--out", ds_out);

  // ---- simulate ---------------------------------------------------------
  auto* sim = app.add_subcommand(
      "simulate", "measure estimate slack on a model kernel or an FD circle run");
  std::string sim_kernel = "gaussian_rn", sim_id, sim_r = "0.001:3:20",
              sim_t = "0.1:10:20", sim_out, sim_initial = "gaussian";
  double sim_K = 0.0, sim_n = 1.0, sim_alpha = kUnset, sim_theta = kUnset;
  double sim_slack_tol = kUnset, sim_t0 = 0.05, sim_T = 0.95, sim_tmin = 0.05;
  int sim_N = 256, sim_kmax = 0;
  unsigned sim_seed = 1;
  bool sim_fd = false, sim_linear = false;
  sim->add_option("--kernel", sim_kernel,
                  "gaussian_rn | hyperbolic_h3 | sphere_s3 | circle_flat");
  sim->add_option("--estimate", sim_id)->required();
  sim->add_option("--K", sim_K, "must match the kernel geometry");
  sim->add_option("--n", sim_n, "dimension (gaussian_rn only; fixed otherwise)");
  sim->add_option("--alpha", sim_alpha);
  sim->add_option("--theta", sim_theta);
  sim->add_option("--r", sim_r, "radial range lo:hi:count");
  sim->add_option("--t", sim_t, "time range lo:hi:count");
  sim->add_flag("--linear", sim_linear);
  sim->add_option("--k-max", sim_kmax, "image-sum truncation (0 = auto)");
  sim->add_option("--slack-tol", sim_slack_tol,
                  "violation threshold (default 1e-8 kernel, 0.05 fd)");
  sim->add_flag("--fd", sim_fd, "finite-difference circle run instead of a kernel");
  sim->add_option("--N", sim_N, "fd grid size");
  sim->add_option("--initial", sim_initial, "const | mode | gaussian | random")
      ->check(CLI::IsMember({"const", "mode", "gaussian", "random"}));
  sim->add_option("--seed", sim_seed, "seed for --initial random");
  sim->add_option("--t0", sim_t0, "fd start time");
  sim->add_option("--T", sim_T, "fd run duration");
  sim->add_option("--t-min", sim_tmin, "skip fd snapshots before this time");
  sim->add_option("--out", sim_out);

  // ---- compare ----------------------------------------------------------
  auto* cmp = app.add_subcommand("compare", "gradient-ceiling dominance of e1 over e2");
  std::string cmp_e1, cmp_e2, cmp_t = "0.1:10:20", cmp_out;
  double cmp_K = 1.0, cmp_n = 3.0;
  double cmp_alpha1 = kUnset, cmp_theta1 = kUnset, cmp_alpha2 = kUnset,
         cmp_theta2 = kUnset;
  int cmp_h = 100;
  bool cmp_linear = false;
  cmp->add_option("--e1", cmp_e1, "candidate stronger estimate")->required();
  cmp->add_option("--e2", cmp_e2, "estimate compared against")->required();
  cmp->add_option("--K", cmp_K);
  cmp->add_option("--n", cmp_n);
  cmp->add_option("--alpha1", cmp_alpha1);
  cmp->add_option("--theta1", cmp_theta1);
  cmp->add_option("--alpha2", cmp_alpha2);
  cmp->add_option("--theta2", cmp_theta2);
  cmp->add_option("--t", cmp_t, "time range lo:hi:count");
  cmp->add_flag("--linear", cmp_linear);
  cmp->add_option("--h-points", cmp_h);
  cmp->add_option("--out", cmp_out);

  // ---- harnack ----------------------------------------------------------
  auto* har = app.add_subcommand(
      "harnack", "two-point inequality on the sphere kernel: reports RHS/LHS");
  double har_theta = 1.0 / 3.0, har_rx = 1.0;
  std::string har_s = "0.1:2:10", har_t = "0.1:2:10", har_d = "0,0.5,1", har_out;
  har->add_option("--theta", har_theta, "theta in (0, 1/3]");
  har->add_option("--s", har_s, "earlier-time range lo:hi:count");
  har->add_option("--t", har_t, "later-time range lo:hi:count");
  har->add_option("--d", har_d, "comma-separated distances; y sits at r_x + d");
  har->add_option("--rx", har_rx, "radius of the earlier-time point");
  har->add_option("--out", har_out);

  std::vector<const char*> argv;
  argv.push_back("harnack");
  for (const auto& a : args) argv.push_back(a.c_str());

  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (*cat) {
      std::string out = "id,requires,validity\n";
      for (const auto& e : list_catalog())
        out += e.id + "," + e.requires_params + "," + e.validity + "\n";
      emit(out, cat_out);
      return 0;
    }

    if (*ver) {
      const Range tr = parse_range(ver_t);
      const GeometryParams p{ver_K, ver_n};
      EstimatePair pair = linear_pair(ver_id, p, extra_of(ver_alpha, ver_theta));
      ConditionReport rep =
          verify_over_interval(pair.alpha, pair.c, p, tr.lo, tr.hi, tr.count);
      emit(rep.to_csv(), ver_out);
      return rep.all_hold ? 0 : 1;
    }

    if (*des_a) {
      const Range tr = parse_range(da_t);
      const auto grid = expand(tr, da_linear);
      Profile prof = !da_csv.empty() ? Profile::from_csv(da_csv)
                     : (da_profile == "sinh") ? Profile::sinh_squared(da_K)
                                              : Profile::quadratic();
      const GeometryParams p{da_K, da_n};
      EstimatePair pair = pair_from_profile(prof, p, grid);
      std::string out = "t,alpha,c\n";
      for (double t : grid)
        out += csv_num(t) + "," + csv_num(pair.alpha(t)) + "," +
               csv_num(pair.c(t)) + "\n";
      emit(out, da_out);
      return 0;
    }

    if (*des_o) {
      const GeometryParams p{do_K, do_n};
      const double c0 = std::isfinite(do_c0)
                            ? do_c0
                            : do_n * do_alpha * do_alpha / (2.0 * do_t0);
      TimeFn c = envelope_ode(TimeFn::constant(do_alpha, "alpha"), p, do_t0, c0,
                              do_T, do_step);
      std::string out = "t,alpha,c\n";
      for (double t : lin_spaced(do_t0, do_T, 201))
        out += csv_num(t) + "," + csv_num(do_alpha) + "," + csv_num(c(t)) + "\n";
      emit(out, do_out);
      return 0;
    }

    if (*des_s) {
      if (!(ds_alpha > 1.0))
        throw ConstructionError("design splice requires alpha > 1");
      const GeometryParams p{ds_K, ds_n};
      const double t0 = (ds_alpha - 1.0) / ds_K;
      if (!(t0 < ds_T)) throw InputError("design splice: need (alpha-1)/K < T");
      EstimatePair head;
      head.alpha = TimeFn::constant(ds_alpha, "alpha");
      const double a2n = ds_n * ds_alpha * ds_alpha;
      head.c = TimeFn::analytic(
          [a2n](double t) { return a2n / (2.0 * t); },
          [a2n](double t) { return -a2n / (2.0 * t * t); }, "n a^2/(2t)", 0.0);
      EstimatePair tail;
      tail.alpha = head.alpha;
      tail.c = envelope_ode(head.alpha, p, t0, a2n / (2.0 * t0), ds_T, ds_step);
      auto [joined, rep] = splice(head, tail, t0);
      std::string out;
      out += "# t0=" + csv_num(rep.t0) + " c_dleft=" + csv_num(rep.c_dleft) +
             " c_dright=" + csv_num(rep.c_dright) +
             " gap=" + csv_num(rep.c1_gap) +
             " c1=" + (rep.is_c1 ? std::string("true") : std::string("false")) +
             "\n";
      out += "t,alpha,c\n";
      for (double t : log_spaced(t0 / 10.0, ds_T, ds_points))
        out += csv_num(t) + "," + csv_num(joined.alpha(t)) + "," +
               csv_num(joined.c(t)) + "\n";
      emit(out, ds_out);
      return 0;
    }

    if (*sim) {
      const auto extra = extra_of(sim_alpha, sim_theta);
      if (sim_fd) {
        const GeometryParams p{0.0, 1.0};
        Estimate e = make_estimate(sim_id, p, extra);
        std::vector<double> u0;
        if (sim_initial == "const")
          u0 = fd_initial_constant(sim_N);
        else if (sim_initial == "mode")
          u0 = fd_initial_mode(sim_N);
        else if (sim_initial == "random")
          u0 = fd_initial_random(sim_N, sim_seed);
        else
          u0 = fd_initial_wrapped_gaussian(sim_N, sim_t0);
        FDRun run = fd_solve(u0, sim_N, sim_T, sim_t0);
        SlackReport rep = fd_check(run, e, sim_tmin);
        emit(rep.to_csv(), sim_out);
        const double tol = std::isfinite(sim_slack_tol) ? sim_slack_tol : 0.05;
        return rep.min_slack >= -tol ? 0 : 1;
      }
      Kernel k = Kernel::make(sim_kernel, sim_n, sim_kmax);
      const Estimate e = make_estimate(sim_id, {sim_K, k.params().n}, extra);
      const auto rg = expand(parse_range(sim_r), sim_linear);
      const auto tg = expand(parse_range(sim_t), sim_linear);
      SlackReport rep = verify_estimate(k, e, rg, tg);
      emit(rep.to_csv(), sim_out);
      const double tol = std::isfinite(sim_slack_tol) ? sim_slack_tol : 1e-8;
      return rep.min_slack >= -tol ? 0 : 1;
    }

    if (*cmp) {
      const GeometryParams p{cmp_K, cmp_n};
      Estimate e1 = make_estimate(cmp_e1, p, extra_of(cmp_alpha1, cmp_theta1));
      Estimate e2 = make_estimate(cmp_e2, p, extra_of(cmp_alpha2, cmp_theta2));
      const auto tg = expand(parse_range(cmp_t), cmp_linear);
      DominanceReport rep = dominance(e1, e2, tg, cmp_h);
      emit(rep.to_csv(), cmp_out);
      return rep.dominates ? 0 : 1;
    }

    if (*har) {
      Kernel k = Kernel::make(Kernel::Id::sphere_s3);
      const auto sg = expand(parse_range(har_s), true);
      const auto tg = expand(parse_range(har_t), true);
      std::vector<double> ds;
      {
        std::istringstream in(har_d);
        std::string tok;
        while (std::getline(in, tok, ',')) ds.push_back(std::stod(tok));
      }
      std::string out = "theta,s,t,r_x,r_y,d,ratio\n";
      bool ok = true;
      for (double d : ds)
        for (double s : sg)
          for (double t : tg) {
            if (!(s < t)) continue;
            const double ry = har_rx + d;
            const double ratio = harnack_check(k, har_theta, s, t, har_rx, ry, d);
            if (!(ratio >= 1.0 - 1e-8)) ok = false;
            out += csv_num(har_theta) + "," + csv_num(s) + "," + csv_num(t) +
                   "," + csv_num(har_rx) + "," + csv_num(ry) + "," +
                   csv_num(d) + "," + csv_num(ratio) + "\n";
          }
      emit(out, har_out);
      return ok ? 0 : 1;
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 2;
}

}  // namespace harnack
