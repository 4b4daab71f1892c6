#include "hslab/scaling.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <functional>
#include <thread>

namespace hslab {

namespace {

void parallel_for(std::size_t n, int workers, const std::function<void(std::size_t)>& body) {
  if (n == 0) return;
  if (workers <= 0) workers = static_cast<int>(std::thread::hardware_concurrency());
  workers = std::max(1, std::min<int>(workers, static_cast<int>(n)));
  if (workers == 1) {
    for (std::size_t i = 0; i < n; ++i) body(i);
    return;
  }
  std::atomic<std::size_t> next{0};
  std::vector<std::thread> pool;
  pool.reserve(workers);
  for (int w = 0; w < workers; ++w) {
    pool.emplace_back([&] {
      for (std::size_t i = next.fetch_add(1); i < n; i = next.fetch_add(1)) body(i);
    });
  }
  for (auto& t : pool) t.join();
}

bool is_local_family(const FractionalParams& pr) { return pr.s == 1.0; }

SeminormValue energy_seminorm(const RadialProfile& u, double q, const QuadratureConfig& quad) {
  if (is_local_family(u.params())) return local_gradient_norm(u, q, quad);
  return gagliardo(u, u.params().s, q, quad);
}

}  // namespace

double ExperimentPlan::delta_for(double eps) const {
  switch (mode) {
    case SweepMode::fix_delta_sweep_eps:
      return delta;
    case SweepMode::fix_ratio:
      return eps / ratio;
    case SweepMode::eps_power_of_delta:
      return std::pow(eps, 1.0 / beta_power);
  }
  return delta;
}

void ExperimentPlan::validate() const {
  quad.validate();
  if (mode == SweepMode::fix_ratio && !(ratio > 0.0 && ratio <= 1.0))
    throw ConstraintViolation("plan: fix_ratio requires eps/delta in (0, 1]");
  if (mode == SweepMode::eps_power_of_delta && !(beta_power >= 1.0))
    throw ConstraintViolation("plan: eps = delta^beta requires beta >= 1");
  for (double e : eps_values) {
    if (!(e > 0.0)) throw ConstraintViolation("plan: eps values must be positive");
    if (!(e <= delta_for(e))) throw ConstraintViolation("plan: requires eps <= delta");
  }
  for (double q : q_list) {
    if (!(q > 1.0 && q <= params.p)) throw ConstraintViolation("plan: q_list must lie in (1, p]");
  }
}

const char* to_string(ScalingFit::Verdict v) {
  switch (v) {
    case ScalingFit::Verdict::consistent:
      return "consistent";
    case ScalingFit::Verdict::bound_satisfied:
      return "bound_satisfied";
    case ScalingFit::Verdict::violated:
      return "violated";
  }
  return "?";
}

ScalingFit fit_slope(const std::vector<double>& x, const std::vector<double>& y,
                     double theoretical_exponent) {
  if (x.size() != y.size() || x.size() < 4)
    throw InsufficientData("fit_slope: need at least 4 converged rows");
  const std::size_t n = x.size();
  std::vector<double> lx(n), ly(n);
  for (std::size_t i = 0; i < n; ++i) {
    if (!(x[i] > 0.0) || !(y[i] > 0.0))
      throw InsufficientData("fit_slope: log-log fit requires positive data");
    lx[i] = std::log(x[i]);
    ly[i] = std::log(y[i]);
  }
  double mx = 0, my = 0;
  for (std::size_t i = 0; i < n; ++i) {
    mx += lx[i];
    my += ly[i];
  }
  mx /= n;
  my /= n;
  double sxx = 0, sxy = 0, syy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
    syy += (ly[i] - my) * (ly[i] - my);
  }
  ScalingFit fit;
  fit.slope = sxy / sxx;
  fit.intercept = my - fit.slope * mx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - (fit.intercept + fit.slope * lx[i]);
    ss_res += e * e;
  }
  fit.stderr_slope = (n > 2) ? std::sqrt(ss_res / ((n - 2) * sxx)) : 0.0;
  fit.r_squared = (syy > 0.0) ? 1.0 - ss_res / syy : 1.0;
  fit.theoretical_exponent = theoretical_exponent;
  fit.points = static_cast<int>(n);
  const double tol = 0.05 + 3.0 * fit.stderr_slope;
  if (fit.slope < theoretical_exponent - tol) {
    fit.verdict = ScalingFit::Verdict::violated;
  } else if (fit.slope > theoretical_exponent + tol) {
    fit.verdict = ScalingFit::Verdict::bound_satisfied;
  } else {
    fit.verdict = ScalingFit::Verdict::consistent;
  }
  return fit;
}

namespace {

double column_value(const SweepRow& row, Column c) {
  switch (c) {
    case Column::eps:
      return row.eps;
    case Column::delta:
      return row.delta;
    case Column::eps_over_delta:
      return row.eps / row.delta;
    case Column::seminorm:
      return row.seminorm_q.value;
    case Column::deficit1:
      return row.deficit1;
    case Column::deficit2:
      return row.deficit2;
    case Column::gagliardo_p_pow:
      return row.gagliardo_p_pow;
    case Column::hardy_r_pow:
      return row.hardy_r_pow;
  }
  return 0.0;
}

}  // namespace

ScalingFit fit_slope(const SweepTable& table, Column x, Column y, double theoretical_exponent,
                     std::optional<double> q_filter) {
  std::vector<double> xs, ys;
  for (const auto& row : table.rows) {
    if (!row.flag.empty()) continue;
    if (q_filter && row.q != *q_filter) continue;
    const double xv = column_value(row, x);
    const double yv = column_value(row, y);
    if (xv > 0.0 && yv > 0.0) {
      xs.push_back(xv);
      ys.push_back(yv);
    }
  }
  return fit_slope(xs, ys, theoretical_exponent);
}

BaseNorm normalized_base_energy(const FractionalParams& params, const QuadratureConfig& quad) {
  const RadialProfile base = at_profile(params);
  QuadratureConfig wide = quad;
  wide.r_max = std::max(quad.r_max, 1e6);  // the untruncated energy needs a long ladder
  const SeminormValue g = energy_seminorm(base, params.p, wide);
  const SeminormValue h = hardy_norm(base, params.r, params.alpha, wide);
  BaseNorm out;
  out.gagliardo_p_pow = std::pow(g.value, params.p);
  out.hardy_r_pow = std::pow(h.value, params.r);
  const auto [normalized, c] = normalize(base, out.gagliardo_p_pow, out.hardy_r_pow);
  out.c = c;
  out.s_norm = std::pow(c, params.p) * out.gagliardo_p_pow;
  return out;
}

SweepTable run_sweep(const ExperimentPlan& plan) {
  plan.validate();
  const FractionalParams& pr = plan.params;

  SweepTable table;
  table.plan = plan;

  const BaseNorm base_norm = normalized_base_energy(pr, plan.quad);
  table.s_norm = base_norm.s_norm;
  table.base_scale_c = base_norm.c;

  const RadialProfile normalized = scale_amplitude(at_profile(pr), base_norm.c);
  table.theta_bar = find_theta_bar(normalized);

  const std::size_t n_eps = plan.eps_values.size();
  const std::size_t n_q = plan.q_list.size();
  table.rows.resize(n_eps * n_q);

  parallel_for(n_eps, plan.workers, [&](std::size_t ie) {
    const double eps = plan.eps_values[ie];
    const double delta = plan.delta_for(eps);
    SweepRow proto;
    proto.eps = eps;
    proto.delta = delta;
    std::string tuple_flag;
    double p_pow = 0.0, h_pow = 0.0, bes = 0.0, gag_t = 0.0;
    std::optional<RadialProfile> trunc;
    try {
      const RadialProfile u_eps = rescale(normalized, eps);
      const TruncationSpec spec = make_truncation_spec(u_eps, eps, delta, table.theta_bar);
      trunc = truncate_by_composition(u_eps, spec);
      const SeminormValue gp = energy_seminorm(*trunc, pr.p, plan.quad);
      const SeminormValue hr = hardy_norm(*trunc, pr.r, pr.alpha, plan.quad);
      p_pow = std::pow(gp.value, pr.p);
      h_pow = std::pow(hr.value, pr.r);
      if (!gp.converged || !hr.converged) tuple_flag = "energy_not_converged";
      if (plan.interp_sigma && plan.interp_t) {
        const BesovValue bv = besov(*trunc, *plan.interp_sigma, *plan.interp_t, 2, plan.quad);
        bes = bv.norm.value;
        gag_t = energy_seminorm(*trunc, *plan.interp_t, plan.quad).value;
      }
    } catch (const std::exception& e) {
      tuple_flag = e.what();
    }
    for (std::size_t iq = 0; iq < n_q; ++iq) {
      SweepRow row = proto;
      row.q = plan.q_list[iq];
      row.gagliardo_p_pow = p_pow;
      row.hardy_r_pow = h_pow;
      row.deficit1 = p_pow - table.s_norm;
      row.deficit2 = table.s_norm - h_pow;
      row.besov_sigma_t = bes;
      row.gagliardo_s_t = gag_t;
      row.flag = tuple_flag;
      if (trunc && tuple_flag.empty()) {
        try {
          row.seminorm_q = energy_seminorm(*trunc, row.q, plan.quad);
          if (!row.seminorm_q.converged)
            row.flag = row.seminorm_q.diverged ? "seminorm_diverged" : "seminorm_not_converged";
        } catch (const std::exception& e) {
          row.flag = e.what();
        }
      }
      table.rows[ie * n_q + iq] = std::move(row);
    }
  });
  return table;
}

TheoremReport verify_st1(const ExperimentPlan& plan) {
  const FractionalParams& pr = plan.params;
  const double thr = pr.threshold();
  ExperimentPlan sub = plan;
  sub.q_list.clear();
  for (double q : plan.q_list) {
    if (q > thr && q <= pr.p) sub.q_list.push_back(q);
  }
  if (sub.q_list.empty())
    throw InvalidRange("verify_st1: no q in (threshold, p] present in the plan");

  TheoremReport report;
  report.name = "st1";
  report.params = pr;
  report.table = run_sweep(sub);

  for (double q : sub.q_list) {
    ReportEntry entry;
    entry.q = q;
    const double theo = pr.dim / q - pr.dim / pr.p;
    entry.fit = fit_slope(report.table, Column::eps, Column::seminorm, theo, q);
    double rmin = 0.0, rmax = 0.0;
    bool first = true;
    for (const auto& row : report.table.rows) {
      if (row.q != q || !row.flag.empty()) continue;
      const double ratio = row.seminorm_q.value / std::pow(row.eps, theo);
      if (first) {
        rmin = rmax = ratio;
        first = false;
      } else {
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
      }
    }
    entry.ratio_min = rmin;
    entry.ratio_max = rmax;
    report.any_violated |= entry.fit.verdict == ScalingFit::Verdict::violated;
    report.entries.push_back(entry);
  }
  return report;
}

TheoremReport verify_nu(const ExperimentPlan& plan) {
  const FractionalParams& pr = plan.params;
  const double thr = pr.threshold();
  const double limit = (pr.dim - pr.p * pr.s) / (pr.p * (pr.p - 1.0));
  ExperimentPlan sub = plan;
  sub.q_list.clear();
  for (double q : plan.q_list) {
    if (q > 1.0 && q <= thr) sub.q_list.push_back(q);
  }
  if (sub.q_list.empty())
    throw InvalidRange("verify_nu: no q in (1, threshold] present in the plan");

  TheoremReport report;
  report.name = "nu";
  report.params = pr;
  report.table = run_sweep(sub);

  for (double q : sub.q_list) {
    ReportEntry entry;
    entry.q = q;
    const double theo = limit - plan.nu;
    entry.fit = fit_slope(report.table, Column::eps_over_delta, Column::seminorm, theo, q);
    double rmin = 0.0, rmax = 0.0;
    bool first = true;
    for (const auto& row : report.table.rows) {
      if (row.q != q || !row.flag.empty()) continue;
      const double bound =
          std::pow(row.delta, pr.dim / q - pr.dim / pr.p) * std::pow(row.eps / row.delta, theo);
      const double ratio = row.seminorm_q.value / bound;
      if (first) {
        rmin = rmax = ratio;
        first = false;
      } else {
        rmin = std::min(rmin, ratio);
        rmax = std::max(rmax, ratio);
      }
    }
    entry.ratio_min = rmin;
    entry.ratio_max = rmax;
    report.any_violated |= entry.fit.verdict == ScalingFit::Verdict::violated;
    report.entries.push_back(entry);
  }
  return report;
}

TheoremReport verify_lemma21(const ExperimentPlan& plan) {
  TheoremReport report;
  report.name = "lemma21";
  report.params = plan.params;
  report.table = run_sweep(plan);
  const FractionalParams& pr = plan.params;

  const std::size_t n_q = plan.q_list.size();
  std::vector<double> x1, d1s, x2, d2s;
  bool first = true;
  int skipped = 0;
  for (std::size_t i = 0; i < report.table.rows.size(); i += std::max<std::size_t>(n_q, 1)) {
    const auto& row = report.table.rows[i];
    if (!row.flag.empty() && row.flag != "seminorm_diverged") continue;
    if (!(row.eps <= 0.5 * row.delta)) {
      ++skipped;
      continue;
    }
    if (first) {
      report.min_deficit1 = row.deficit1;
      report.min_deficit2 = row.deficit2;
      first = false;
    } else {
      report.min_deficit1 = std::min(report.min_deficit1, row.deficit1);
      report.min_deficit2 = std::min(report.min_deficit2, row.deficit2);
    }
    const double ratio = row.eps / row.delta;
    if (row.deficit1 > 0.0) {
      x1.push_back(ratio);
      d1s.push_back(row.deficit1);
    }
    if (row.deficit2 > 0.0) {
      x2.push_back(ratio);
      d2s.push_back(row.deficit2);
    }
  }
  report.deficit_tolerance = 0.005 * report.table.s_norm;

  ReportEntry e1;
  e1.q = pr.p;
  e1.note = "deficit1 vs eps/delta";
  e1.fit = fit_slope(x1, d1s, (pr.dim - pr.p * pr.s) / (pr.p - 1.0));
  report.entries.push_back(e1);

  ReportEntry e2;
  e2.q = pr.r;
  e2.note = "deficit2 vs eps/delta";
  e2.fit = fit_slope(x2, d2s, (pr.dim - pr.alpha) / (pr.p - 1.0));
  report.entries.push_back(e2);

  if (skipped > 0) {
    ReportEntry note;
    note.note = std::to_string(skipped) + " tuples skipped (eps > delta/2)";
    report.entries.push_back(note);
  }
  report.any_violated = (report.min_deficit1 < -report.deficit_tolerance) ||
                        (report.min_deficit2 < -report.deficit_tolerance);
  for (const auto& e : report.entries)
    report.any_violated |= e.fit.verdict == ScalingFit::Verdict::violated;
  return report;
}

double sigma_bar(const FractionalParams& params) {
  const double theta = std::min(1.0, params.p * (1.0 - params.alpha / params.dim));
  const double sb = (params.p >= 2.0) ? params.p * params.s / (params.p - theta)
                                      : 2.0 * params.s / (2.0 - theta);
  return sb;
}

std::pair<double, double> usable_sigma_range(const FractionalParams& params) {
  return {params.s, std::min(sigma_bar(params), 1.0)};
}

double interpolation_exponent(const FractionalParams& params, double t, double mu, double sigma) {
  const double a = params.dim / t - params.dim / params.p;
  return (1.0 - mu) * a - mu * (sigma - params.s);
}

InterpolationParams choose_interpolation_params(const FractionalParams& params, double q,
                                                double nu) {
  const double thr = params.threshold();
  const double limit = (params.dim - params.p * params.s) / (params.p * (params.p - 1.0));
  if (!(q > 1.0 && q <= thr))
    throw InvalidRange("choose_interpolation_params: q must lie in (1, threshold]");
  if (!(nu > 0.0)) throw InvalidRange("choose_interpolation_params: nu must be positive");
  if (nu >= limit)
    throw NoSolution("choose_interpolation_params: nu >= (N-ps)/(p(p-1)) leaves no rate");

  InterpolationParams out;
  out.sigma = std::min(sigma_bar(params), 1.0) - 1e-3;
  const double target = limit - nu;
  const double b = out.sigma - params.s;
  double eta = 0.5;
  for (int it = 0; it < 80; ++it) {
    const double t = thr * (1.0 + eta);
    if (t < params.p) {
      const double a = params.dim / t - params.dim / params.p;
      const double mu = (a - target) / (a + b);
      if (mu > 0.0 && mu < 1.0) {
        out.t = t;
        out.mu = mu;
        return out;
      }
    }
    eta *= 0.5;
  }
  throw NoSolution("choose_interpolation_params: no admissible (t, mu) found");
}

std::vector<InterpolationCheck> interpolation_audit(const ExperimentPlan& plan, double sigma,
                                                    double t, double mu) {
  const FractionalParams& pr = plan.params;
  const double thr = pr.threshold();
  if (!(t > thr && t < pr.p))
    throw InvalidRange("interpolation_audit: t must lie in (threshold, p)");
  const auto [slo, shi] = usable_sigma_range(pr);
  if (!(sigma > slo && sigma < shi))
    throw InvalidRange("interpolation_audit: sigma outside (s, min(sigma_bar, 1))");
  if (!(mu > 0.0 && mu < 1.0)) throw InvalidRange("interpolation_audit: mu must lie in (0, 1)");

  ExperimentPlan sub = plan;
  sub.interp_sigma = sigma;
  sub.interp_t = t;
  const SweepTable table = run_sweep(sub);

  std::vector<InterpolationCheck> checks;
  for (const auto& row : table.rows) {
    if (!row.flag.empty()) continue;
    InterpolationCheck c;
    c.eps = row.eps;
    c.delta = row.delta;
    c.q = row.q;
    c.sigma = sigma;
    c.t = t;
    c.mu = mu;
    c.lhs = row.seminorm_q.value;
    c.delta_power = std::pow(row.delta, pr.dim / row.q - pr.dim / t + mu * (sigma - pr.s));
    c.besov_factor = row.besov_sigma_t;
    c.gagliardo_factor = row.gagliardo_s_t;
    const double rhs =
        c.delta_power * std::pow(c.besov_factor, mu) * std::pow(c.gagliardo_factor, 1.0 - mu);
    c.ratio = (rhs > 0.0) ? c.lhs / rhs : 0.0;
    checks.push_back(c);
  }
  return checks;
}

TheoremReport verify_local_case(const ExperimentPlan& plan) {
  const FractionalParams& pr = plan.params;
  if (!is_local_family(pr) || !(pr.p < pr.dim) || pr.alpha != 0.0)
    throw InvalidParams("verify_local_case: requires the s = 1 family with alpha = 0, p < N");

  TheoremReport report;
  report.name = "local";
  report.params = pr;
  report.table = run_sweep(plan);
  const double thr = pr.dim * (pr.p - 1.0) / (pr.dim - 1.0);

  for (double q : plan.q_list) {
    ReportEntry entry;
    entry.q = q;
    if (q > thr) {
      const double theo = pr.dim / q - pr.dim / pr.p;
      entry.fit = fit_slope(report.table, Column::eps, Column::seminorm, theo, q);
      entry.note = "above threshold: eps rate";
    } else {
      const double theo = (pr.dim - pr.p) / (pr.p * (pr.p - 1.0));
      entry.fit = fit_slope(report.table, Column::eps_over_delta, Column::seminorm, theo, q);
      entry.note = "below threshold: eps/delta rate";
    }
    report.any_violated |= entry.fit.verdict == ScalingFit::Verdict::violated;
    report.entries.push_back(entry);
  }
  return report;
}

}  // namespace hslab
