#include "hslab/truncation.hpp"

#include <algorithm>
#include <cmath>

namespace hslab {

namespace {

// sup over rho >= 1 of U(theta rho)/U(rho), on a log grid plus tail limit
double dilation_ratio_sup(const RadialProfile& u, double theta) {
  const int n = 512;
  double sup = std::pow(theta, -u.tail_decay_rate());  // analytic limit
  for (int i = 0; i < n; ++i) {
    const double rho = std::pow(10.0, 6.0 * i / (n - 1.0));
    const double denom = u.evaluate(rho);
    if (denom <= 0.0) continue;
    sup = std::max(sup, u.evaluate(theta * rho) / denom);
  }
  return sup;
}

}  // namespace

double find_theta_bar(const RadialProfile& profile) {
  const double theta_cap = 1e6;
  if (!(dilation_ratio_sup(profile, theta_cap) <= 0.5))
    throw NoDecay("find_theta_bar: ratio never falls below 1/2 for theta <= 1e6");

  double lo = 1.0, hi = 2.0;
  while (hi < theta_cap && !(dilation_ratio_sup(profile, hi) <= 0.5)) {
    lo = hi;
    hi = std::min(2.0 * hi, theta_cap);
  }
  while (hi - lo > 1e-3 * std::max(1.0, lo)) {
    const double mid = 0.5 * (lo + hi);
    if (dilation_ratio_sup(profile, mid) <= 0.5) {
      hi = mid;
    } else {
      lo = mid;
    }
  }
  return hi;
}

TruncationSpec make_truncation_spec(const RadialProfile& u_eps, double eps, double delta,
                                    double theta_bar) {
  if (!(eps > 0.0)) throw ConstraintViolation("truncation: eps must be positive");
  if (!(eps <= delta)) throw ConstraintViolation("truncation: requires eps <= delta");
  if (!(theta_bar > 1.0)) throw ConstraintViolation("truncation: theta_bar must exceed 1");

  TruncationSpec spec;
  spec.eps = eps;
  spec.delta = delta;
  spec.theta_bar = theta_bar;
  spec.t_high = u_eps.evaluate(delta);
  spec.t_low = u_eps.evaluate(theta_bar * delta);
  if (!(spec.t_low < spec.t_high))
    throw ConstraintViolation("truncation: degenerate thresholds (t_low >= t_high)");
  spec.m = spec.t_high / (spec.t_high - spec.t_low);
  return spec;
}

CompositionMap build_g(const TruncationSpec& spec) {
  return CompositionMap{spec.t_low, spec.t_high, spec.m};
}

RadialProfile truncate_by_composition(const RadialProfile& u_eps, const TruncationSpec& spec) {
  const double at_delta = u_eps.evaluate(spec.delta);
  const double at_outer = u_eps.evaluate(spec.theta_bar * spec.delta);
  if (std::abs(at_delta - spec.t_high) > 1e-10 * std::max(1.0, std::abs(spec.t_high)) ||
      std::abs(at_outer - spec.t_low) > 1e-10 * std::max(1.0, std::abs(spec.t_low)))
    throw SpecMismatch("truncate_by_composition: spec thresholds do not match the profile");

  const CompositionMap g = build_g(spec);
  const double outer = spec.theta_bar * spec.delta;

  if (const auto* grid = std::get_if<SampledGrid>(&u_eps.representation())) {
    // sampled input: insert the exact knot radii and map the values
    std::vector<double> rho;
    std::vector<double> val;
    rho.reserve(grid->rho.size() + 2);
    for (std::size_t i = 0; i < grid->rho.size(); ++i) {
      if (grid->rho[i] < outer) rho.push_back(grid->rho[i]);
    }
    rho.push_back(spec.delta);
    rho.push_back(outer);
    std::sort(rho.begin(), rho.end());
    rho.erase(std::unique(rho.begin(), rho.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(a, b); }),
              rho.end());
    val.resize(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i)
      val[i] = (rho[i] >= outer) ? 0.0 : g(u_eps.evaluate(rho[i]));
    for (std::size_t i = 1; i < val.size(); ++i) val[i] = std::min(val[i], val[i - 1]);
    return RadialProfile(u_eps.params(), SampledGrid{std::move(rho), std::move(val)},
                         u_eps.tail_decay_rate());
  }

  ComposedForm form;
  form.base = std::make_shared<RadialProfile>(u_eps);
  form.g = g;
  form.kinks = {spec.delta, outer};
  form.support_radius = outer;
  return RadialProfile(u_eps.params(), std::move(form), u_eps.tail_decay_rate());
}

RadialProfile truncate_by_multiplication(const RadialProfile& u_eps, double delta) {
  if (!(delta > 0.0)) throw ConstraintViolation("truncate_by_multiplication: delta must be > 0");
  const SmoothstepCutoff phi{delta};

  if (const auto* grid = std::get_if<SampledGrid>(&u_eps.representation())) {
    std::vector<double> rho;
    for (double r : grid->rho) {
      if (r < 2.0 * delta) rho.push_back(r);
    }
    // refine across the cutoff shoulder where the product is not log-linear
    for (int i = 0; i <= 64; ++i) rho.push_back(delta * (1.0 + i / 64.0));
    std::sort(rho.begin(), rho.end());
    rho.erase(std::unique(rho.begin(), rho.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(a, b); }),
              rho.end());
    std::vector<double> val(rho.size());
    for (std::size_t i = 0; i < rho.size(); ++i) val[i] = phi(rho[i]) * u_eps.evaluate(rho[i]);
    for (std::size_t i = 1; i < val.size(); ++i) val[i] = std::min(val[i], val[i - 1]);
    return RadialProfile(u_eps.params(), SampledGrid{std::move(rho), std::move(val)},
                         u_eps.tail_decay_rate());
  }

  ComposedForm form;
  form.base = std::make_shared<RadialProfile>(u_eps);
  form.cutoff = phi;
  form.kinks = {delta, 2.0 * delta};
  form.support_radius = 2.0 * delta;
  return RadialProfile(u_eps.params(), std::move(form), u_eps.tail_decay_rate());
}

bool support_check(const RadialProfile& truncated, const RadialProfile& original, double inner,
                   double outer) {
  const int n = 1024;
  const double lo = inner * 1e-4;
  const double hi = 2.0 * outer;
  for (int i = 0; i < n; ++i) {
    const double rho = lo * std::pow(hi / lo, i / (n - 1.0));
    const double tv = truncated.evaluate(rho);
    if (rho >= outer && tv != 0.0) return false;
    if (rho <= inner) {
      const double ov = original.evaluate(rho);
      if (std::abs(tv - ov) > 1e-12 * std::max(std::abs(ov), 1.0)) return false;
    }
  }
  if (truncated.evaluate(outer) != 0.0) return false;
  return std::abs(truncated.evaluate(inner) - original.evaluate(inner)) <=
         1e-12 * std::max(std::abs(original.evaluate(inner)), 1.0);
}

}  // namespace hslab
