#include "hslab/profile.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

namespace hslab {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// Exponents of the closed-form shape (1 + x^a)^b.
double at_inner_exponent(const FractionalParams& pr) {
  return (pr.p - pr.alpha / pr.s) / (pr.p - 1.0);
}

double at_outer_exponent(const FractionalParams& pr) {
  return (pr.p * pr.s - pr.dim) / (pr.p - pr.alpha / pr.s);
}

double loglog_slope(double r0, double v0, double r1, double v1) {
  return std::log(v1 / v0) / std::log(r1 / r0);
}

}  // namespace

double CompositionMap::operator()(double t) const {
  if (t <= t_low) return 0.0;
  if (t >= t_high) return t;
  return slope * (t - t_low);
}

double CompositionMap::derivative(double t) const {
  if (t <= t_low) return 0.0;
  if (t >= t_high) return 1.0;
  return slope;
}

double SmoothstepCutoff::operator()(double rho) const {
  const double t = rho / delta;
  if (t <= 1.0) return 1.0;
  if (t >= 2.0) return 0.0;
  const double w = t - 1.0;
  return 1.0 - (3.0 * w * w - 2.0 * w * w * w);
}

double SmoothstepCutoff::derivative(double rho) const {
  const double t = rho / delta;
  if (t <= 1.0 || t >= 2.0) return 0.0;
  const double w = t - 1.0;
  return -(6.0 * w - 6.0 * w * w) / delta;
}

RadialProfile::RadialProfile(FractionalParams params, Representation rep, double tail_decay_rate)
    : params_(params), rep_(std::move(rep)), tail_decay_rate_(tail_decay_rate) {}

double RadialProfile::evaluate(double rho) const {
  if (rho < 0.0) throw InvalidRange("evaluate: rho must be >= 0");
  return std::visit(
      [&](const auto& rep) -> double {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, ClosedFormAT>) {
          const double a = at_inner_exponent(params_);
          const double b = at_outer_exponent(params_);
          const double x = rho / rep.scale;
          return rep.amplitude * std::pow(1.0 + std::pow(x, a), b);
        } else if constexpr (std::is_same_v<T, SampledGrid>) {
          const auto& g = rep.rho;
          const auto& v = rep.val;
          if (rho <= g.front()) return v.front();
          if (rho >= g.back()) {
            if (v.back() <= 0.0) return 0.0;
            return v.back() * std::pow(rho / g.back(), -tail_decay_rate_);
          }
          const auto it = std::upper_bound(g.begin(), g.end(), rho);
          const std::size_t j = static_cast<std::size_t>(it - g.begin());
          const double r0 = g[j - 1], r1 = g[j];
          const double v0 = v[j - 1], v1 = v[j];
          if (v0 > 0.0 && v1 > 0.0 && r0 > 0.0) {
            const double m = loglog_slope(r0, v0, r1, v1);
            return v0 * std::pow(rho / r0, m);
          }
          const double t = (rho - r0) / (r1 - r0);
          return v0 + t * (v1 - v0);
        } else {
          if (rep.support_radius > 0.0 && rho >= rep.support_radius) return 0.0;
          const double u = rep.base->evaluate(rho);
          if (rep.g) return rep.amplitude * (*rep.g)(u);
          return rep.amplitude * (*rep.cutoff)(rho)*u;
        }
      },
      rep_);
}

double RadialProfile::derivative(double rho) const {
  if (rho < 0.0) throw InvalidRange("derivative: rho must be >= 0");
  return std::visit(
      [&](const auto& rep) -> double {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, ClosedFormAT>) {
          const double a = at_inner_exponent(params_);
          const double b = at_outer_exponent(params_);
          const double x = rho / rep.scale;
          if (x == 0.0) {
            if (a > 1.0) return 0.0;
            if (a == 1.0) return rep.amplitude * b / rep.scale;
            return -kInf;
          }
          const double xa = std::pow(x, a);
          return rep.amplitude * b * std::pow(1.0 + xa, b - 1.0) * a * std::pow(x, a - 1.0) /
                 rep.scale;
        } else if constexpr (std::is_same_v<T, SampledGrid>) {
          const auto& g = rep.rho;
          const auto& v = rep.val;
          if (rho <= g.front()) return 0.0;
          if (rho >= g.back()) {
            if (v.back() <= 0.0) return 0.0;
            return -tail_decay_rate_ * evaluate(rho) / rho;
          }
          const auto it = std::upper_bound(g.begin(), g.end(), rho);
          const std::size_t j = static_cast<std::size_t>(it - g.begin());
          const double r0 = g[j - 1], r1 = g[j];
          const double v0 = v[j - 1], v1 = v[j];
          if (v0 > 0.0 && v1 > 0.0 && r0 > 0.0) {
            const double m = loglog_slope(r0, v0, r1, v1);
            return m * evaluate(rho) / rho;
          }
          return (v1 - v0) / (r1 - r0);
        } else {
          if (rep.support_radius > 0.0 && rho >= rep.support_radius) return 0.0;
          const double u = rep.base->evaluate(rho);
          const double du = rep.base->derivative(rho);
          if (rep.g) return rep.amplitude * rep.g->derivative(u) * du;
          const auto& phi = *rep.cutoff;
          return rep.amplitude * (phi.derivative(rho) * u + phi(rho)*du);
        }
      },
      rep_);
}

double RadialProfile::support_radius() const {
  return std::visit(
      [&](const auto& rep) -> double {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, ClosedFormAT>) {
          return kInf;
        } else if constexpr (std::is_same_v<T, SampledGrid>) {
          if (rep.val.back() > 0.0) return kInf;
          // values are non-increasing, so zeros form a suffix
          std::size_t j = rep.val.size() - 1;
          while (j > 0 && rep.val[j - 1] <= 0.0) --j;
          return rep.rho[j];
        } else {
          return rep.support_radius;
        }
      },
      rep_);
}

bool RadialProfile::has_compact_support() const { return std::isfinite(support_radius()); }

double RadialProfile::core_scale() const {
  return std::visit(
      [&](const auto& rep) -> double {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, ClosedFormAT>) {
          return rep.scale;
        } else if constexpr (std::is_same_v<T, SampledGrid>) {
          // half-height radius of the sampled data
          const double half = 0.5 * rep.val.front();
          for (std::size_t i = 0; i < rep.val.size(); ++i) {
            if (rep.val[i] < half) return std::max(rep.rho[i], rep.rho.front());
          }
          return rep.rho.back();
        } else {
          return rep.base->core_scale();
        }
      },
      rep_);
}

std::vector<double> RadialProfile::kink_radii() const {
  return std::visit(
      [&](const auto& rep) -> std::vector<double> {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, ClosedFormAT>) {
          return {};
        } else if constexpr (std::is_same_v<T, SampledGrid>) {
          const double sup = support_radius();
          if (std::isfinite(sup)) return {sup};
          return {};
        } else {
          return rep.kinks;
        }
      },
      rep_);
}

double RadialProfile::amplitude() const {
  return std::visit(
      [](const auto& rep) -> double {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, SampledGrid>) {
          return 1.0;
        } else {
          return rep.amplitude;
        }
      },
      rep_);
}

RadialProfile at_profile(const FractionalParams& params) {
  return RadialProfile(params, ClosedFormAT{1.0, 1.0}, params.tail_decay_rate());
}

RadialProfile sampled_profile(const FractionalParams& params, std::vector<double> rho,
                              std::vector<double> val, double tail_decay_rate) {
  if (rho.size() != val.size() || rho.size() < 2)
    throw ConstraintViolation("sampled profile needs matching grids with >= 2 nodes");
  if (rho.front() < 0.0) throw ConstraintViolation("sampled grid radii must be >= 0");
  for (std::size_t i = 1; i < rho.size(); ++i) {
    if (!(rho[i] > rho[i - 1])) throw ConstraintViolation("sampled grid must be strictly increasing");
  }
  for (std::size_t i = 0; i < val.size(); ++i) {
    if (!(val[i] >= 0.0) || !std::isfinite(val[i]))
      throw ConstraintViolation("sampled values must be finite and non-negative");
    if (i > 0) {
      if (val[i] > val[i - 1] * (1.0 + 1e-12) + 1e-300)
        throw ConstraintViolation("sampled values must be non-increasing");
      val[i] = std::min(val[i], val[i - 1]);
    }
  }
  return RadialProfile(params, SampledGrid{std::move(rho), std::move(val)}, tail_decay_rate);
}

RadialProfile rescale(const RadialProfile& profile, double eps) {
  if (!(eps > 0.0) || !std::isfinite(eps)) throw InvalidRange("rescale: eps must be positive");
  const double f = std::pow(eps, profile.params().rescale_power());
  return std::visit(
      [&](const auto& rep) -> RadialProfile {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, ClosedFormAT>) {
          ClosedFormAT out = rep;
          out.scale *= eps;
          out.amplitude *= f;
          return RadialProfile(profile.params(), out, profile.tail_decay_rate());
        } else if constexpr (std::is_same_v<T, SampledGrid>) {
          SampledGrid out = rep;
          for (auto& r : out.rho) r *= eps;
          for (auto& v : out.val) v *= f;
          return RadialProfile(profile.params(), out, profile.tail_decay_rate());
        } else {
          ComposedForm out;
          out.base = std::make_shared<RadialProfile>(rescale(*rep.base, eps));
          if (rep.g) out.g = CompositionMap{rep.g->t_low * f, rep.g->t_high * f, rep.g->slope};
          if (rep.cutoff) out.cutoff = SmoothstepCutoff{rep.cutoff->delta * eps};
          out.amplitude = rep.amplitude;
          out.kinks = rep.kinks;
          for (auto& k : out.kinks) k *= eps;
          out.support_radius = rep.support_radius * eps;
          return RadialProfile(profile.params(), out, profile.tail_decay_rate());
        }
      },
      profile.representation());
}

RadialProfile scale_amplitude(const RadialProfile& profile, double c) {
  if (!(c >= 0.0) || !std::isfinite(c)) throw InvalidRange("scale_amplitude: factor must be >= 0");
  return std::visit(
      [&](const auto& rep) -> RadialProfile {
        using T = std::decay_t<decltype(rep)>;
        if constexpr (std::is_same_v<T, ClosedFormAT>) {
          ClosedFormAT out = rep;
          out.amplitude *= c;
          return RadialProfile(profile.params(), out, profile.tail_decay_rate());
        } else if constexpr (std::is_same_v<T, SampledGrid>) {
          SampledGrid out = rep;
          for (auto& v : out.val) v *= c;
          return RadialProfile(profile.params(), out, profile.tail_decay_rate());
        } else {
          ComposedForm out = rep;
          out.amplitude *= c;
          return RadialProfile(profile.params(), out, profile.tail_decay_rate());
        }
      },
      profile.representation());
}

std::pair<RadialProfile, double> normalize(const RadialProfile& profile, double gagliardo_p_pow,
                                           double hardy_r_pow) {
  if (!(gagliardo_p_pow > 0.0) || !std::isfinite(gagliardo_p_pow))
    throw DegenerateNorm("normalize: gagliardo power must be finite and positive");
  if (!(hardy_r_pow > 0.0) || !std::isfinite(hardy_r_pow))
    throw DegenerateNorm("normalize: hardy power must be finite and positive");
  const double r = profile.params().r;
  const double p = profile.params().p;
  if (r == p) throw DegenerateNorm("normalize: r must differ from p");
  const double c = std::pow(gagliardo_p_pow / hardy_r_pow, 1.0 / (r - p));
  return {scale_amplitude(profile, c), c};
}

DecayFit decay_fit(const RadialProfile& profile, double rho_min, double rho_max) {
  if (!(rho_min >= 1.0)) throw InvalidRange("decay_fit: rho_min must be >= 1");
  if (!(rho_max > 2.0 * rho_min)) throw InvalidRange("decay_fit: rho_max must exceed 2*rho_min");

  std::vector<double> radii;
  if (const auto* grid = std::get_if<SampledGrid>(&profile.representation())) {
    for (double r : grid->rho) {
      if (r >= rho_min && r <= rho_max) radii.push_back(r);
    }
  } else {
    const int n = 256;
    const double l0 = std::log(rho_min), l1 = std::log(rho_max);
    for (int i = 0; i < n; ++i) radii.push_back(std::exp(l0 + (l1 - l0) * i / (n - 1.0)));
  }

  std::vector<double> lx, ly, comp;
  const double beta = profile.params().tail_decay_rate();
  for (double r : radii) {
    const double u = profile.evaluate(r);
    if (u > 0.0) {
      lx.push_back(std::log(r));
      ly.push_back(std::log(u));
      comp.push_back(u * std::pow(r, beta));
    }
  }
  if (lx.size() < 8) throw InsufficientRange("decay_fit: fewer than 8 sample radii in window");

  const std::size_t n = lx.size();
  double sx = 0, sy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sx += lx[i];
    sy += ly[i];
  }
  const double mx = sx / n, my = sy / n;
  double sxx = 0, sxy = 0;
  for (std::size_t i = 0; i < n; ++i) {
    sxx += (lx[i] - mx) * (lx[i] - mx);
    sxy += (lx[i] - mx) * (ly[i] - my);
  }
  const double slope = sxy / sxx;
  double ss_res = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const double e = ly[i] - my - slope * (lx[i] - mx);
    ss_res += e * e;
  }
  const double se = (n > 2) ? std::sqrt(ss_res / ((n - 2) * sxx)) : 0.0;

  DecayFit out;
  out.c1 = *std::min_element(comp.begin(), comp.end());
  out.c2 = *std::max_element(comp.begin(), comp.end());
  out.fit_min = rho_min;
  out.fit_max = rho_max;
  out.measured_exponent = slope;
  out.stderr_exponent = se;
  return out;
}

RadialProfile sample_profile(const RadialProfile& profile, int n, double lo, double hi) {
  if (n < 2 || !(lo > 0.0) || !(hi > lo)) throw InvalidRange("sample_profile: bad grid request");
  std::vector<double> radii;
  radii.reserve(static_cast<std::size_t>(n) + 8);
  radii.push_back(0.0);
  const double l0 = std::log(lo), l1 = std::log(hi);
  for (int i = 0; i < n; ++i) radii.push_back(std::exp(l0 + (l1 - l0) * i / (n - 1.0)));
  for (double k : profile.kink_radii()) {
    if (k > 0.0 && k < hi) radii.push_back(k);
  }
  const double sup = profile.support_radius();
  if (std::isfinite(sup) && sup < hi) radii.push_back(sup);
  std::sort(radii.begin(), radii.end());
  radii.erase(std::unique(radii.begin(), radii.end(),
                          [](double a, double b) { return std::abs(a - b) <= 1e-14 * std::max(a, b); }),
              radii.end());

  std::vector<double> val(radii.size());
  for (std::size_t i = 0; i < radii.size(); ++i) val[i] = profile.evaluate(radii[i]);
  // clip float wiggle so the samples are exactly non-increasing
  for (std::size_t i = 1; i < val.size(); ++i) val[i] = std::min(val[i], val[i - 1]);
  return RadialProfile(profile.params(), SampledGrid{std::move(radii), std::move(val)},
                       profile.tail_decay_rate());
}

RadialProfile sample_profile(const RadialProfile& profile) {
  const double scale = profile.core_scale();
  return sample_profile(profile, 1024, 1e-4 * scale, 1e4 * scale);
}

}  // namespace hslab
